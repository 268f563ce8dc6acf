// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace nf {

inline constexpr double kPi = 3.14159265358979323846;

/// Square grey-scale raster, row-major. When `nominal` is set the values
/// are contractually in [0,1] (stimuli and local means).
struct Image {
    int n = 0;
    bool nominal = false;
    std::vector<double> v;

    Image() = default;
    Image(int n_, double fill = 0.0, bool nominal_ = false)
        : n(n_), nominal(nominal_), v(static_cast<size_t>(n_) * n_, fill) {
        if (n_ <= 0) throw std::invalid_argument("Image: side must be positive");
    }

    double& at(int r, int c) { return v[static_cast<size_t>(r) * n + c]; }
    double at(int r, int c) const { return v[static_cast<size_t>(r) * n + c]; }
    size_t size() const { return v.size(); }

    /// Throws invalid_argument on shape/finiteness violations (and range,
    /// when the nominal flag is set).
    void validate() const;
};

/// Stack of K orientation channels over an N x N grid, channel-major.
/// Channel ch responds to orientation theta(ch) = ch * pi / K; the
/// orientation axis is pi-periodic (indices wrap modulo K).
struct OrientationVolume {
    int n = 0;
    int k = 0;
    std::vector<double> v;

    OrientationVolume() = default;
    OrientationVolume(int n_, int k_, double fill = 0.0)
        : n(n_), k(k_), v(static_cast<size_t>(n_) * n_ * k_, fill) {
        if (n_ <= 0 || k_ <= 0)
            throw std::invalid_argument("OrientationVolume: sides must be positive");
    }

    double& at(int ch, int r, int c) {
        return v[(static_cast<size_t>(ch) * n + r) * n + c];
    }
    double at(int ch, int r, int c) const {
        return v[(static_cast<size_t>(ch) * n + r) * n + c];
    }
    size_t size() const { return v.size(); }
    size_t plane() const { return static_cast<size_t>(n) * n; }

    double theta(int ch) const { return kPi * ch / k; }

    void validate() const;
};

/// Normalised non-negative 2D kernel, indexed by wrapped offset: entry
/// (r, c) is the weight of displacement (r, c) modulo N, so the peak of a
/// centred kernel sits at (0, 0).
struct Kernel2D {
    int n = 0;
    std::vector<double> w;

    double at(int r, int c) const { return w[static_cast<size_t>(r) * n + c]; }
};

/// 3D analogue of Kernel2D; offset-indexed on (channel, row, col), all
/// axes periodic (channel axis wraps modulo K).
struct Kernel3D {
    int n = 0;
    int k = 0;
    std::vector<double> w;

    double at(int ch, int r, int c) const {
        return w[(static_cast<size_t>(ch) * n + r) * n + c];
    }
};

/// Centred periodic (wrapped) Gaussian, entries summing to 1.
Kernel2D gaussian2d(double sigma_px, int n);

/// Separable product of a wrapped 2D spatial Gaussian (std sigma_spatial_px)
/// and a wrapped 1D Gaussian over the orientation channels (std
/// sigma_orient_ch channels, period K). Entries sum to 1.
Kernel3D gaussian3d(double sigma_spatial_px, double sigma_orient_ch, int n, int k);

/// Circular convolution computed spectrally: out[p] = sum_q k[p-q] f[q].
Image conv2_periodic(const Image& f, const Kernel2D& kern);

/// Circular convolution on (channel, row, col), all axes wrapping.
OrientationVolume conv3_periodic(const OrientationVolume& f, const Kernel3D& kern);

/// Local average intensity mu = g * f0 with g a wrapped Gaussian of std
/// sigma_mu pixels. Requires f0 in nominal range; result is clamped back
/// to [0,1] to absorb spectral round-off.
Image local_mean(const Image& f0, double sigma_mu);

}  // namespace nf

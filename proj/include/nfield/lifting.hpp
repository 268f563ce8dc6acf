// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <filesystem>
#include <vector>

#include "nfield/grid.hpp"

namespace nf {

/// Frequency-domain filter bank implementing the orientation lift.
///
/// Filter k is the mother filter rotated by theta_k = k*pi/K. Each filter
/// is the non-oriented (point-reflection symmetrised) angular window, so
/// the bank lives on the projective line: filters are invariant under
/// w -> -w, and summing all K filters gives 1 at every frequency sample
/// (the DC sample is split equally, 1/K per filter). Those two properties
/// make the lift real-valued and exactly invertible by channel summation.
struct CakeFilterBank {
    int n = 0;
    int k = 0;
    int bw = 0;  // angular B-spline order of the window
    std::vector<std::complex<double>> filters;  // k planes of n*n, row-major

    std::complex<double> at(int ch, int fr, int fc) const {
        return filters[(static_cast<size_t>(ch) * n + fr) * n + fc];
    }
    size_t plane() const { return static_cast<size_t>(n) * n; }
};

/// Builds the bank on an N x N grid with K orientations. The angular
/// profile is a centred cardinal B-spline of order `bw` in units of the
/// channel spacing pi/K; B-spline translates sum to one, which yields the
/// partition of unity identically. `lowpass_sigma` > 0 applies an optional
/// radial Gaussian taper (in frequency samples); this trades exact
/// reconstruction for spatial locality of the filters and is off by default.
CakeFilterBank build_cake_bank(int n, int k, int bw, double lowpass_sigma = 0.0);

/// Lift: channel k = Re ifft( fft(f) . filter_k ).
OrientationVolume lift(const Image& f, const CakeFilterBank& bank);

/// Projection: pixelwise sum over the K channels; left inverse of lift
/// for banks built without a taper.
Image project(const OrientationVolume& vol);

/// Flat binary export: 16-byte header (magic "CAKE", u32 N, K, bw), then
/// per filter one N x N real plane followed by one N x N imaginary plane,
/// doubles in native byte order.
void save_bank(const CakeFilterBank& bank, const std::filesystem::path& path);
CakeFilterBank load_bank(const std::filesystem::path& path);

}  // namespace nf

// SPDX-License-Identifier: Apache-2.0
#include "nfield/grid.hpp"

#include <cmath>

#include "nfield/fft.hpp"

namespace nf {
namespace {

// Wrapped 1D Gaussian sampled at offsets 0..n-1: the theta-function sum
// over enough period images that the dropped tail is below 1e-18.
std::vector<double> wrapped_gaussian_1d(int n, double sigma) {
    int wraps = static_cast<int>(std::ceil(9.0 * sigma / n)) + 1;
    std::vector<double> g(n, 0.0);
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int m = -wraps; m <= wraps; ++m) {
            double x = i + static_cast<double>(m) * n;
            acc += std::exp(-x * x * inv2s2);
        }
        g[i] = acc;
    }
    return g;
}

void check_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite value");
}

}  // namespace

void Image::validate() const {
    if (n <= 0 || v.size() != static_cast<size_t>(n) * n)
        throw std::invalid_argument("Image: bad shape");
    check_finite(v, "Image");
    if (nominal)
        for (double x : v)
            if (x < 0.0 || x > 1.0)
                throw std::invalid_argument("Image: value outside nominal range [0,1]");
}

void OrientationVolume::validate() const {
    if (n <= 0 || k <= 0 || v.size() != static_cast<size_t>(n) * n * k)
        throw std::invalid_argument("OrientationVolume: bad shape");
    check_finite(v, "OrientationVolume");
}

Kernel2D gaussian2d(double sigma_px, int n) {
    if (sigma_px <= 0.0) throw std::invalid_argument("gaussian2d: sigma must be positive");
    if (n < 3) throw std::invalid_argument("gaussian2d: grid too small");

    auto g1 = wrapped_gaussian_1d(n, sigma_px);
    Kernel2D k;
    k.n = n;
    k.w.resize(static_cast<size_t>(n) * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) k.w[static_cast<size_t>(r) * n + c] = g1[r] * g1[c];

    double sum = 0.0;
    for (double x : k.w) sum += x;
    for (double& x : k.w) x /= sum;
    return k;
}

Kernel3D gaussian3d(double sigma_spatial_px, double sigma_orient_ch, int n, int k) {
    if (sigma_spatial_px <= 0.0 || sigma_orient_ch <= 0.0)
        throw std::invalid_argument("gaussian3d: sigmas must be positive");
    if (n < 3) throw std::invalid_argument("gaussian3d: grid too small");
    if (k < 2) throw std::invalid_argument("gaussian3d: need at least 2 orientation channels");

    auto gs = wrapped_gaussian_1d(n, sigma_spatial_px);
    auto go = wrapped_gaussian_1d(k, sigma_orient_ch);
    Kernel3D w;
    w.n = n;
    w.k = k;
    w.w.resize(static_cast<size_t>(n) * n * k);
    for (int ch = 0; ch < k; ++ch)
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                w.w[(static_cast<size_t>(ch) * n + r) * n + c] = go[ch] * gs[r] * gs[c];

    double sum = 0.0;
    for (double x : w.w) sum += x;
    for (double& x : w.w) x /= sum;
    return w;
}

Image conv2_periodic(const Image& f, const Kernel2D& kern) {
    if (f.n != kern.n) throw std::invalid_argument("conv2_periodic: shape mismatch");
    const int n = f.n;
    const size_t count = f.size();

    std::vector<fft::cplx> zf(count), zk(count), prod(count);
    for (size_t i = 0; i < count; ++i) zf[i] = f.v[i];
    for (size_t i = 0; i < count; ++i) zk[i] = kern.w[i];
    fft::dft2(zf.data(), zf.data(), n, false);
    fft::dft2(zk.data(), zk.data(), n, false);

#pragma omp parallel for
    for (long long i = 0; i < static_cast<long long>(count); ++i)
        prod[i] = zf[i] * zk[i];

    fft::dft2(prod.data(), prod.data(), n, true);

    Image out(n);
    for (size_t i = 0; i < count; ++i) out.v[i] = prod[i].real();
    return out;
}

OrientationVolume conv3_periodic(const OrientationVolume& f, const Kernel3D& kern) {
    if (f.n != kern.n || f.k != kern.k)
        throw std::invalid_argument("conv3_periodic: shape mismatch");
    const size_t count = f.size();

    std::vector<fft::cplx> zf(count), zk(count), prod(count);
    for (size_t i = 0; i < count; ++i) zf[i] = f.v[i];
    for (size_t i = 0; i < count; ++i) zk[i] = kern.w[i];
    fft::dft3(zf.data(), zf.data(), f.k, f.n, false);
    fft::dft3(zk.data(), zk.data(), f.k, f.n, false);

#pragma omp parallel for
    for (long long i = 0; i < static_cast<long long>(count); ++i)
        prod[i] = zf[i] * zk[i];

    fft::dft3(prod.data(), prod.data(), f.k, f.n, true);

    OrientationVolume out(f.n, f.k);
    for (size_t i = 0; i < count; ++i) out.v[i] = prod[i].real();
    return out;
}

Image local_mean(const Image& f0, double sigma_mu) {
    Image checked = f0;
    checked.nominal = true;
    checked.validate();

    Image mu = conv2_periodic(f0, gaussian2d(sigma_mu, f0.n));
    // Spectral round-off can leave values a few ulp outside [0,1].
    for (double& x : mu.v) x = std::min(1.0, std::max(0.0, x));
    mu.nominal = true;
    return mu;
}

}  // namespace nf

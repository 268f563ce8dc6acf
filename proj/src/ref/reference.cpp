// SPDX-License-Identifier: Apache-2.0
#include "reference.hpp"

#include <cmath>

namespace nf::ref {

Image conv2_direct(const Image& f, const Kernel2D& kern) {
    if (f.n != kern.n) throw std::invalid_argument("conv2_direct: shape mismatch");
    const int n = f.n;
    Image out(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            double acc = 0.0;
            for (int rp = 0; rp < n; ++rp)
                for (int cp = 0; cp < n; ++cp) {
                    int dr = (r - rp + n) % n;
                    int dc = (c - cp + n) % n;
                    acc += kern.at(dr, dc) * f.at(rp, cp);
                }
            out.at(r, c) = acc;
        }
    return out;
}

OrientationVolume conv3_direct(const OrientationVolume& f, const Kernel3D& kern) {
    if (f.n != kern.n || f.k != kern.k)
        throw std::invalid_argument("conv3_direct: shape mismatch");
    const int n = f.n, k = f.k;
    OrientationVolume out(n, k);
    for (int ch = 0; ch < k; ++ch)
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                double acc = 0.0;
                for (int chp = 0; chp < k; ++chp)
                    for (int rp = 0; rp < n; ++rp)
                        for (int cp = 0; cp < n; ++cp) {
                            int dch = (ch - chp + k) % k;
                            int dr = (r - rp + n) % n;
                            int dc = (c - cp + n) % n;
                            acc += kern.at(dch, dr, dc) * f.at(chp, rp, cp);
                        }
                out.at(ch, r, c) = acc;
            }
    return out;
}

double wrapped_gaussian_sample(int dr, int dc, int dch, int n, int k,
                               double sigma_spatial, double sigma_orient, int wraps) {
    double acc = 0.0;
    for (int mr = -wraps; mr <= wraps; ++mr)
        for (int mc = -wraps; mc <= wraps; ++mc)
            for (int mk = -wraps; mk <= wraps; ++mk) {
                double xr = dr + static_cast<double>(mr) * n;
                double xc = dc + static_cast<double>(mc) * n;
                double xk = dch + static_cast<double>(mk) * k;
                acc += std::exp(-(xr * xr + xc * xc) / (2.0 * sigma_spatial * sigma_spatial)
                                - xk * xk / (2.0 * sigma_orient * sigma_orient));
            }
    return acc;
}

Kernel3D gaussian3d_direct(double sigma_spatial, double sigma_orient, int n, int k,
                           int wraps) {
    Kernel3D w;
    w.n = n;
    w.k = k;
    w.w.resize(static_cast<size_t>(n) * n * k);
    for (int ch = 0; ch < k; ++ch)
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                w.w[(static_cast<size_t>(ch) * n + r) * n + c] =
                    wrapped_gaussian_sample(r, c, ch, n, k, sigma_spatial, sigma_orient, wraps);
    double sum = 0.0;
    for (double x : w.w) sum += x;
    for (double& x : w.w) x /= sum;
    return w;
}

}  // namespace nf::ref

// SPDX-License-Identifier: Apache-2.0
#include "nfield/interaction.hpp"

#include <cmath>

#include "nfield/fft.hpp"

namespace nf {

Image interaction_naive(const Image& f, const Kernel2D& w, double alpha) {
    if (f.n != w.n) throw std::invalid_argument("interaction_naive: shape mismatch");
    const int n = f.n;
    Image out(n);
#pragma omp parallel for
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const double here = f.at(r, c);
            double acc = 0.0;
            for (int rp = 0; rp < n; ++rp)
                for (int cp = 0; cp < n; ++cp)
                    acc += w.at((r - rp + n) % n, (c - cp + n) % n) *
                           sigmoid(here - f.at(rp, cp), alpha);
            out.at(r, c) = acc;
        }
    return out;
}

OrientationVolume interaction_naive(const OrientationVolume& f, const Kernel3D& w,
                                    double alpha) {
    if (f.n != w.n || f.k != w.k)
        throw std::invalid_argument("interaction_naive: shape mismatch");
    const int n = f.n, k = f.k;
    OrientationVolume out(n, k);
#pragma omp parallel for
    for (int ch = 0; ch < k; ++ch)
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                const double here = f.at(ch, r, c);
                double acc = 0.0;
                for (int chp = 0; chp < k; ++chp)
                    for (int rp = 0; rp < n; ++rp)
                        for (int cp = 0; cp < n; ++cp)
                            acc += w.at((ch - chp + k) % k, (r - rp + n) % n,
                                        (c - cp + n) % n) *
                                   sigmoid(here - f.at(chp, rp, cp), alpha);
                out.at(ch, r, c) = acc;
            }
    return out;
}

namespace {

double binom(int n, int k) {
    double acc = 1.0;
    for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
    return acc;
}

}  // namespace

FastInteraction::FastInteraction(Kernel2D w, OddPolynomial poly)
    : poly_(std::move(poly)), n_(w.n), k_(0) {
    for (double x : w.w) kernel_sum_ += x;
    kernel_spectrum_.resize(w.w.size());
    for (size_t i = 0; i < w.w.size(); ++i) kernel_spectrum_[i] = w.w[i];
    fft::dft2(kernel_spectrum_.data(), kernel_spectrum_.data(), n_, false);
}

FastInteraction::FastInteraction(Kernel3D w, OddPolynomial poly)
    : poly_(std::move(poly)), n_(w.n), k_(w.k) {
    for (double x : w.w) kernel_sum_ += x;
    kernel_spectrum_.resize(w.w.size());
    for (size_t i = 0; i < w.w.size(); ++i) kernel_spectrum_[i] = w.w[i];
    fft::dft3(kernel_spectrum_.data(), kernel_spectrum_.data(), k_, n_, false);
}

void FastInteraction::apply_flat(const double* f, double* out, size_t count,
                                 double* pair_energy) const {
    const int degree = poly_.degree;
    const int qmax = pair_energy ? degree + 1 : degree;

    // Constant inputs have all pairwise differences zero; short-circuit so
    // the result is exactly zero rather than accumulated round-off.
    double lo = f[0], hi = f[0];
    for (size_t i = 0; i < count; ++i) {
        lo = std::min(lo, f[i]);
        hi = std::max(hi, f[i]);
    }
    if (lo == hi) {
        for (size_t i = 0; i < count; ++i) out[i] = 0.0;
        if (pair_energy) *pair_energy = 0.0;
        return;
    }

    // Mean-centring leaves every pairwise difference unchanged and keeps
    // the power fields small.
    double mean = 0.0;
    for (size_t i = 0; i < count; ++i) mean += f[i];
    mean /= static_cast<double>(count);

    std::vector<std::vector<double>> pw(qmax + 1);
    pw[1].resize(count);
#pragma omp parallel for
    for (long long i = 0; i < static_cast<long long>(count); ++i) pw[1][i] = f[i] - mean;
    for (int q = 2; q <= qmax; ++q) {
        pw[q].resize(count);
        const auto& prev = pw[q - 1];
        const auto& g = pw[1];
#pragma omp parallel for
        for (long long i = 0; i < static_cast<long long>(count); ++i) pw[q][i] = prev[i] * g[i];
    }

    // W * G^q for q = 1..qmax; q = 0 is the kernel sum (a constant).
    std::vector<std::vector<double>> conv(qmax + 1);
#pragma omp parallel for schedule(dynamic)
    for (int q = 1; q <= qmax; ++q) {
        std::vector<fft::cplx> buf(count);
        for (size_t i = 0; i < count; ++i) buf[i] = pw[q][i];
        if (k_ > 0)
            fft::dft3(buf.data(), buf.data(), k_, n_, false);
        else
            fft::dft2(buf.data(), buf.data(), n_, false);
        for (size_t i = 0; i < count; ++i) buf[i] *= kernel_spectrum_[i];
        if (k_ > 0)
            fft::dft3(buf.data(), buf.data(), k_, n_, true);
        else
            fft::dft2(buf.data(), buf.data(), n_, true);
        conv[q].resize(count);
        for (size_t i = 0; i < count; ++i) conv[q][i] = buf[i].real();
    }

    // p(x - y) = sum_j c_j sum_i C(j,i) x^i (-y)^(j-i); gathered per power
    // of x so the pointwise pass is a short inner loop.
    struct Term {
        int q;
        double w;
    };
    std::vector<std::vector<Term>> terms(degree + 1);
    for (int j = 1; j <= degree; j += 2) {
        double cj = poly_.coeff[j];
        if (cj == 0.0) continue;
        for (int i = 0; i <= j; ++i) {
            int q = j - i;
            double sign = (q % 2 == 0) ? 1.0 : -1.0;
            terms[i].push_back({q, cj * binom(j, i) * sign});
        }
    }

    const double ksum = kernel_sum_;
#pragma omp parallel for
    for (long long i = 0; i < static_cast<long long>(count); ++i) {
        const double g = pw[1][i];
        double gp = 1.0;
        double acc = 0.0;
        for (int ip = 0; ip <= degree; ++ip) {
            double inner = 0.0;
            for (const Term& t : terms[ip]) inner += t.w * (t.q == 0 ? ksum : conv[t.q][i]);
            acc += gp * inner;
            gp *= g;
        }
        out[i] = acc;
    }

    if (pair_energy) {
        // sum_{p,q} W[p-q] P(G[p]-G[q]) with P the even primitive; the
        // binomial expansion reuses the same powers and convolutions.
        auto prim = poly_.primitive();
        double energy = 0.0;
        for (int q = 2; q <= degree + 1; q += 2) {
            double eq = prim[q];
            if (eq == 0.0) continue;
            for (int i = 0; i <= q; ++i) {
                int l = q - i;
                double sign = (l % 2 == 0) ? 1.0 : -1.0;
                double dot = 0.0;
                if (i == 0 && l == 0) {
                    dot = ksum * static_cast<double>(count);
                } else if (i == 0) {
                    for (size_t s = 0; s < count; ++s) dot += conv[l][s];
                } else if (l == 0) {
                    double acc = 0.0;
                    for (size_t s = 0; s < count; ++s) acc += pw[i][s];
                    dot = ksum * acc;
                } else {
                    for (size_t s = 0; s < count; ++s) dot += pw[i][s] * conv[l][s];
                }
                energy += eq * binom(q, i) * sign * dot;
            }
        }
        *pair_energy = energy;
    }
}

Image FastInteraction::apply(const Image& f, double* pair_energy) const {
    if (k_ != 0 || f.n != n_) throw std::invalid_argument("FastInteraction: shape mismatch");
    Image out(n_);
    apply_flat(f.v.data(), out.v.data(), f.size(), pair_energy);
    return out;
}

OrientationVolume FastInteraction::apply(const OrientationVolume& f,
                                         double* pair_energy) const {
    if (k_ == 0 || f.n != n_ || f.k != k_)
        throw std::invalid_argument("FastInteraction: shape mismatch");
    OrientationVolume out(n_, k_);
    apply_flat(f.v.data(), out.v.data(), f.size(), pair_energy);
    return out;
}

namespace {

// Box B = max |f - mean(f)|; zero only for constant inputs.
double state_box(const std::vector<double>& v) {
    double lo = v[0], hi = v[0];
    for (double x : v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (lo == hi) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double b = 0.0;
    for (double x : v) b = std::max(b, std::abs(x - mean));
    return b;
}

}  // namespace

Image interaction_fast(const Image& f, const Kernel2D& w, double alpha, int degree) {
    if (degree % 2 == 0) throw std::invalid_argument("interaction_fast: degree must be odd");
    double b = state_box(f.v);
    if (b == 0.0) return Image(f.n);
    FastInteraction plan(w, fit_sigmoid_poly(alpha, degree, 2.0 * b));
    return plan.apply(f);
}

OrientationVolume interaction_fast(const OrientationVolume& f, const Kernel3D& w,
                                   double alpha, int degree) {
    if (degree % 2 == 0) throw std::invalid_argument("interaction_fast: degree must be odd");
    double b = state_box(f.v);
    if (b == 0.0) return OrientationVolume(f.n, f.k);
    FastInteraction plan(w, fit_sigmoid_poly(alpha, degree, 2.0 * b));
    return plan.apply(f);
}

}  // namespace nf

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "nfield/grid.hpp"
#include "nfield/sigmoid.hpp"

namespace nf {

/// Direct summation of the interaction term
///   R[p] = sum_q W[p-q] * sigmoid(F[p] - F[q]),
/// quadratic in the grid size; the reference the spectral path is tested
/// against.
Image interaction_naive(const Image& f, const Kernel2D& w, double alpha);
OrientationVolume interaction_naive(const OrientationVolume& f, const Kernel3D& w,
                                    double alpha);

/// Spectral evaluation of the interaction term through an odd-polynomial
/// surrogate of the sigmoid: expanding p(F[p]-F[q]) binomially turns the
/// pairwise sum into degree+1 circular convolutions of powers of the
/// mean-centred state. The same convolutions also yield the pairwise
/// primitive sum needed by the LHE energy, so one plan serves both.
class FastInteraction {
public:
    FastInteraction(Kernel2D w, OddPolynomial poly);
    FastInteraction(Kernel3D w, OddPolynomial poly);

    /// Interaction approximation; when `pair_energy` is non-null it also
    /// receives  sum_{p,q} W[p-q] * P(F[p]-F[q])  with P the polynomial's
    /// even primitive.
    Image apply(const Image& f, double* pair_energy = nullptr) const;
    OrientationVolume apply(const OrientationVolume& f, double* pair_energy = nullptr) const;

    const OddPolynomial& poly() const { return poly_; }

private:
    void apply_flat(const double* f, double* out, size_t count, double* pair_energy) const;

    OddPolynomial poly_;
    int n_ = 0, k_ = 0;  // k_ == 0 marks the 2D case
    double kernel_sum_ = 0.0;
    std::vector<std::complex<double>> kernel_spectrum_;
};

/// One-shot fast interaction: tracks the state box B = max |F - mean(F)|,
/// fits the sigmoid on [-2B, 2B] (differences of two values in [-B, B]
/// span that interval) and applies the plan. Degree must be odd.
Image interaction_fast(const Image& f, const Kernel2D& w, double alpha, int degree);
OrientationVolume interaction_fast(const OrientationVolume& f, const Kernel3D& w,
                                   double alpha, int degree);

}  // namespace nf

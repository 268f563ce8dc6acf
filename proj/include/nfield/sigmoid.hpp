// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace nf {

/// Saturating sigmoid min{1, max{alpha*rho, -1}}; odd, saturates at
/// |rho| >= 1/alpha. Requires alpha > 1.
double sigmoid(double rho, double alpha);

/// The even primitive of the sigmoid with value 0 at the origin:
/// alpha*rho^2/2 on the linear branch, |rho| - 1/(2*alpha) beyond it.
double sigma_primitive(double rho, double alpha);

/// Odd polynomial approximating the sigmoid on [-halfrange, halfrange],
/// stored as monomial coefficients (even entries are structurally zero).
struct OddPolynomial {
    int degree = 0;
    double halfrange = 0.0;
    std::vector<double> coeff;  // coeff[j] multiplies x^j, j = 0..degree
    double fit_error = 0.0;     // max |p - sigmoid| over the fit samples

    double eval(double x) const {
        double acc = 0.0;
        for (size_t j = coeff.size(); j-- > 0;) acc = acc * x + coeff[j];
        return acc;
    }

    /// Even primitive with zero constant term (coefficients of degree+1).
    std::vector<double> primitive() const {
        std::vector<double> p(coeff.size() + 1, 0.0);
        for (size_t j = 0; j < coeff.size(); ++j) p[j + 1] = coeff[j] / static_cast<double>(j + 1);
        return p;
    }
};

/// Least-squares odd-polynomial fit of the sigmoid over
/// [-halfrange, halfrange], sampled at 4096 equispaced points. Degree must
/// be odd. The solve runs in a Chebyshev basis and is converted back to
/// monomials.
OddPolynomial fit_sigmoid_poly(double alpha, int degree, double halfrange);

}  // namespace nf

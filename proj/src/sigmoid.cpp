// SPDX-License-Identifier: Apache-2.0
#include "nfield/sigmoid.hpp"

#include <cmath>
#include <stdexcept>

namespace nf {

double sigmoid(double rho, double alpha) {
    return std::min(1.0, std::max(alpha * rho, -1.0));
}

double sigma_primitive(double rho, double alpha) {
    double a = std::abs(rho);
    if (a <= 1.0 / alpha) return 0.5 * alpha * rho * rho;
    return a - 0.5 / alpha;
}

namespace {

constexpr int kFitSamples = 4096;

// Dense symmetric solve, pivot-free; the Chebyshev normal matrix is well
// conditioned for the degrees used here.
std::vector<double> solve_spd(std::vector<double> a, std::vector<double> b, int m) {
    for (int i = 0; i < m; ++i) {
        double piv = a[static_cast<size_t>(i) * m + i];
        if (piv == 0.0) throw std::runtime_error("fit_sigmoid_poly: singular normal matrix");
        for (int r = i + 1; r < m; ++r) {
            double f = a[static_cast<size_t>(r) * m + i] / piv;
            for (int c = i; c < m; ++c)
                a[static_cast<size_t>(r) * m + c] -= f * a[static_cast<size_t>(i) * m + c];
            b[r] -= f * b[i];
        }
    }
    std::vector<double> x(m);
    for (int i = m - 1; i >= 0; --i) {
        double acc = b[i];
        for (int c = i + 1; c < m; ++c) acc -= a[static_cast<size_t>(i) * m + c] * x[c];
        x[i] = acc / a[static_cast<size_t>(i) * m + i];
    }
    return x;
}

}  // namespace

OddPolynomial fit_sigmoid_poly(double alpha, int degree, double halfrange) {
    if (degree < 1 || degree % 2 == 0)
        throw std::invalid_argument("fit_sigmoid_poly: degree must be odd");
    if (!(alpha > 1.0)) throw std::invalid_argument("fit_sigmoid_poly: alpha must exceed 1");
    if (!(halfrange > 0.0)) throw std::invalid_argument("fit_sigmoid_poly: empty fit range");

    const int nb = (degree + 1) / 2;  // T_1, T_3, ..., T_degree

    // Chebyshev values per sample via the three-term recurrence.
    std::vector<double> ata(static_cast<size_t>(nb) * nb, 0.0), atb(nb, 0.0);
    std::vector<double> basis(nb);
    for (int s = 0; s < kFitSamples; ++s) {
        double x = halfrange * (2.0 * s / (kFitSamples - 1) - 1.0);
        double t = x / halfrange;
        double tkm1 = 1.0, tk = t;  // T_0, T_1
        int bi = 0;
        for (int j = 1; j <= degree; ++j) {
            if (j % 2 == 1) basis[bi++] = tk;
            double tkp1 = 2.0 * t * tk - tkm1;
            tkm1 = tk;
            tk = tkp1;
        }
        double y = sigmoid(x, alpha);
        for (int r = 0; r < nb; ++r) {
            atb[r] += basis[r] * y;
            for (int c = 0; c < nb; ++c) ata[static_cast<size_t>(r) * nb + c] += basis[r] * basis[c];
        }
    }
    std::vector<double> cheb = solve_spd(std::move(ata), std::move(atb), nb);

    // Convert sum of odd Chebyshev polynomials in t = x/halfrange into
    // monomial coefficients in x.
    std::vector<std::vector<double>> tpoly(degree + 1);
    tpoly[0] = {1.0};
    if (degree >= 1) tpoly[1] = {0.0, 1.0};
    for (int j = 2; j <= degree; ++j) {
        tpoly[j].assign(j + 1, 0.0);
        for (size_t c = 0; c < tpoly[j - 1].size(); ++c) tpoly[j][c + 1] += 2.0 * tpoly[j - 1][c];
        for (size_t c = 0; c < tpoly[j - 2].size(); ++c) tpoly[j][c] -= tpoly[j - 2][c];
    }

    OddPolynomial poly;
    poly.degree = degree;
    poly.halfrange = halfrange;
    poly.coeff.assign(degree + 1, 0.0);
    int bi = 0;
    for (int j = 1; j <= degree; j += 2) {
        for (size_t c = 0; c < tpoly[j].size(); ++c) poly.coeff[c] += cheb[bi] * tpoly[j][c];
        ++bi;
    }
    double scale = 1.0;
    for (int j = 0; j <= degree; ++j) {
        poly.coeff[j] *= scale;
        scale /= halfrange;
    }
    for (int j = 0; j <= degree; j += 2) poly.coeff[j] = 0.0;  // parity, exactly

    double err = 0.0;
    for (int s = 0; s < kFitSamples; ++s) {
        double x = halfrange * (2.0 * s / (kFitSamples - 1) - 1.0);
        err = std::max(err, std::abs(poly.eval(x) - sigmoid(x, alpha)));
    }
    poly.fit_error = err;
    return poly;
}

}  // namespace nf

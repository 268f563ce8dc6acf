// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "nfield/grid.hpp"
#include "nfield/interaction.hpp"
#include "nfield/sigmoid.hpp"

using nf::Image;
using nf::Kernel3D;
using nf::OrientationVolume;

namespace {

OrientationVolume random_volume(int n, int k, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    OrientationVolume vol(n, k);
    for (double& x : vol.v) x = dist(rng);
    return vol;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

TEST_CASE("sigmoid values and oddness") {
    CHECK(nf::sigmoid(0.1, 5.0) == doctest::Approx(0.5));
    CHECK(nf::sigmoid(0.5, 5.0) == 1.0);
    CHECK(nf::sigmoid(-0.5, 5.0) == -1.0);
    CHECK(nf::sigmoid(0.0, 3.0) == 0.0);
    CHECK(nf::sigmoid(0.0, 17.0) == 0.0);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        double x = dist(rng);
        CHECK(nf::sigmoid(-x, 5.0) == -nf::sigmoid(x, 5.0));
    }
}

TEST_CASE("sigma_primitive values, parity, continuity at the kink") {
    CHECK(nf::sigma_primitive(0.0, 5.0) == 0.0);
    CHECK(nf::sigma_primitive(0.2, 5.0) == doctest::Approx(0.1));
    // both branches agree at rho = 1/alpha
    double linear = 0.5 * 5.0 * 0.2 * 0.2;
    double saturated = 0.2 - 0.5 / 5.0;
    CHECK(linear == doctest::Approx(saturated));
    CHECK(nf::sigma_primitive(-0.7, 5.0) == nf::sigma_primitive(0.7, 5.0));
}

TEST_CASE("sigma_primitive differentiates to the sigmoid") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    const double alpha = 5.0, step = 1e-6;
    int tested = 0;
    while (tested < 100) {
        double x = dist(rng);
        if (std::abs(std::abs(x) - 1.0 / alpha) < 1e-4) continue;  // avoid the kink
        double fd = (nf::sigma_primitive(x + step, alpha) - nf::sigma_primitive(x - step, alpha)) /
                    (2.0 * step);
        CHECK(std::abs(fd - nf::sigmoid(x, alpha)) <= 1e-6);
        ++tested;
    }
}

TEST_CASE("odd polynomial fit basics") {
    CHECK_THROWS_AS(nf::fit_sigmoid_poly(5.0, 8, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(nf::fit_sigmoid_poly(0.5, 7, 1.0), std::invalid_argument);

    auto poly = nf::fit_sigmoid_poly(5.0, 11, 1.0);
    CHECK(poly.coeff.size() == 12);
    for (int j = 0; j <= 11; j += 2) CHECK(poly.coeff[j] == 0.0);
    CHECK(poly.eval(0.0) == 0.0);
    CHECK(poly.fit_error < 0.2);

    // entirely linear regime: fit recovers alpha * x almost exactly
    auto lin = nf::fit_sigmoid_poly(5.0, 7, 0.15);
    CHECK(lin.fit_error <= 1e-10);
    CHECK(lin.eval(0.1) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("interaction_naive hand-computed two-point example") {
    // 1D toy on the orientation axis: self weight 0.5, neighbour 0.5.
    Kernel3D w;
    w.n = 1;
    w.k = 2;
    w.w = {0.5, 0.5};
    OrientationVolume f(1, 2);
    f.v = {0.3, 0.0};
    auto r = nf::interaction_naive(f, w, 5.0);
    CHECK(r.v[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.v[1] == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("interaction_naive constants and sign flips") {
    auto w = nf::gaussian3d(2.0, 1.0, 8, 4);
    OrientationVolume constant(8, 4, 0.7);
    auto r = nf::interaction_naive(constant, w, 5.0);
    for (double x : r.v) CHECK(x == 0.0);

    auto f = random_volume(8, 4, 5);
    OrientationVolume neg(8, 4);
    for (size_t i = 0; i < f.size(); ++i) neg.v[i] = -f.v[i];
    auto rf = nf::interaction_naive(f, w, 5.0);
    auto rn = nf::interaction_naive(neg, w, 5.0);
    for (size_t i = 0; i < f.size(); ++i)
        CHECK(rn.v[i] == doctest::Approx(-rf.v[i]).epsilon(1e-13));
}

TEST_CASE("interaction_naive ignores constant offsets") {
    auto w = nf::gaussian3d(2.0, 1.0, 8, 4);
    auto f = random_volume(8, 4, 6);
    OrientationVolume shifted(8, 4);
    for (size_t i = 0; i < f.size(); ++i) shifted.v[i] = f.v[i] + 0.25;
    auto rf = nf::interaction_naive(f, w, 5.0);
    auto rs = nf::interaction_naive(shifted, w, 5.0);
    CHECK(max_abs_diff(rf.v, rs.v) <= 1e-12);
}

TEST_CASE("interaction_fast is exactly zero on constants") {
    auto w = nf::gaussian3d(2.0, 1.0, 8, 4);
    OrientationVolume constant(8, 4, 0.9);
    auto r = nf::interaction_fast(constant, w, 5.0, 11);
    for (double x : r.v) CHECK(x == 0.0);
}

TEST_CASE("interaction_fast approximates the direct sum") {
    auto w = nf::gaussian3d(2.0, 1.0, 8, 4);
    for (unsigned seed : {11u, 12u, 13u}) {
        auto f = random_volume(8, 4, seed);
        auto naive = nf::interaction_naive(f, w, 5.0);
        auto fast = nf::interaction_fast(f, w, 5.0, 11);
        CHECK(max_abs_diff(naive.v, fast.v) <= 5e-2);
    }
}

TEST_CASE("interaction_fast error shrinks with the degree") {
    auto w = nf::gaussian3d(2.0, 1.0, 8, 4);
    auto f = random_volume(8, 4, 21);
    auto naive = nf::interaction_naive(f, w, 5.0);
    double err7 = max_abs_diff(naive.v, nf::interaction_fast(f, w, 5.0, 7).v);
    double err15 = max_abs_diff(naive.v, nf::interaction_fast(f, w, 5.0, 15).v);
    CHECK(err15 <= err7);
}

TEST_CASE("interaction_fast rejects even degrees") {
    auto w = nf::gaussian3d(2.0, 1.0, 8, 4);
    auto f = random_volume(8, 4, 22);
    CHECK_THROWS_AS(nf::interaction_fast(f, w, 5.0, 10), std::invalid_argument);
}

TEST_CASE("interaction_fast ignores constant offsets") {
    auto w = nf::gaussian3d(2.0, 1.0, 8, 4);
    auto f = random_volume(8, 4, 23);
    OrientationVolume shifted(8, 4);
    for (size_t i = 0; i < f.size(); ++i) shifted.v[i] = f.v[i] + 0.25;
    CHECK(max_abs_diff(nf::interaction_fast(f, w, 5.0, 11).v,
                       nf::interaction_fast(shifted, w, 5.0, 11).v) <= 1e-12);
}

TEST_CASE("fast plan pair energy matches direct primitive summation") {
    const int n = 6, k = 3;
    auto w = nf::gaussian3d(1.5, 0.8, n, k);
    auto f = random_volume(n, k, 31);

    // direct sum with the polynomial primitive as the oracle
    auto poly = nf::fit_sigmoid_poly(5.0, 11, 2.5);
    auto prim = poly.primitive();
    auto prim_eval = [&](double x) {
        double acc = 0.0;
        for (size_t j = prim.size(); j-- > 0;) acc = acc * x + prim[j];
        return acc;
    };
    double want = 0.0;
    for (int ch = 0; ch < k; ++ch)
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                for (int chp = 0; chp < k; ++chp)
                    for (int rp = 0; rp < n; ++rp)
                        for (int cp = 0; cp < n; ++cp)
                            want += w.at((ch - chp + k) % k, (r - rp + n) % n,
                                         (c - cp + n) % n) *
                                    prim_eval(f.at(ch, r, c) - f.at(chp, rp, cp));

    nf::FastInteraction plan(w, poly);
    double got = 0.0;
    plan.apply(f, &got);
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
}

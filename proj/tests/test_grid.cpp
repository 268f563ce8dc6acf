// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "nfield/grid.hpp"
#include "ref/reference.hpp"

using nf::Image;
using nf::Kernel2D;
using nf::Kernel3D;
using nf::OrientationVolume;

namespace {

Image random_image(int n, unsigned seed, double lo = 0.0, double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    Image img(n);
    for (double& x : img.v) x = dist(rng);
    return img;
}

OrientationVolume random_volume(int n, int k, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    OrientationVolume vol(n, k);
    for (double& x : vol.v) x = dist(rng);
    return vol;
}

double kernel_sum(const std::vector<double>& w) {
    double s = 0.0;
    for (double x : w) s += x;
    return s;
}

}  // namespace

TEST_CASE("gaussian2d normalisation and shape") {
    auto k = nf::gaussian2d(1.0, 8);
    CHECK(kernel_sum(k.w) == doctest::Approx(1.0).epsilon(1e-12));

    auto big = nf::gaussian2d(3.0, 200);
    double peak = big.at(0, 0);
    for (double x : big.w) CHECK(x <= peak);

    auto k16 = nf::gaussian2d(2.0, 16);
    CHECK(k16.at(1, 0) == doctest::Approx(k16.at(0, 1)).epsilon(1e-15));
    // wrapped symmetry: offset r and N - r coincide
    CHECK(k16.at(3, 0) == doctest::Approx(k16.at(13, 0)).epsilon(1e-13));

    CHECK_THROWS_AS(nf::gaussian2d(0.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(nf::gaussian2d(-1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(nf::gaussian2d(1.0, 2), std::invalid_argument);
}

TEST_CASE("gaussian3d normalisation, symmetry, direct oracle") {
    auto w = nf::gaussian3d(5.0, 1.0, 8, 4);
    CHECK(kernel_sum(w.w) == doctest::Approx(1.0).epsilon(1e-12));

    // even symmetry across the orientation axis: channel offset k vs K-k
    for (int ch = 1; ch < 4; ++ch)
        for (int r = 0; r < 8; ++r)
            for (int c = 0; c < 8; ++c)
                CHECK(w.at(ch, r, c) ==
                      doctest::Approx(w.at((4 - ch) % 4, r, c)).epsilon(1e-13));

    auto fast = nf::gaussian3d(2.0, 0.5, 16, 8);
    auto direct = nf::ref::gaussian3d_direct(2.0, 0.5, 16, 8);
    double worst = 0.0;
    for (size_t i = 0; i < fast.w.size(); ++i)
        worst = std::max(worst, std::abs(fast.w[i] - direct.w[i]));
    CHECK(worst <= 1e-12);

    CHECK_THROWS_AS(nf::gaussian3d(1.0, 1.0, 8, 1), std::invalid_argument);
    CHECK_THROWS_AS(nf::gaussian3d(1.0, 0.0, 8, 4), std::invalid_argument);
}

TEST_CASE("conv2_periodic identities") {
    auto k = nf::gaussian2d(2.0, 16);

    Image constant(16, 0.5);
    Image out = nf::conv2_periodic(constant, k);
    for (double x : out.v) CHECK(x == doctest::Approx(0.5).epsilon(1e-12));

    Image delta(16);
    delta.v[0] = 1.0;
    Image impulse = nf::conv2_periodic(delta, k);
    for (size_t i = 0; i < impulse.size(); ++i)
        CHECK(impulse.v[i] == doctest::Approx(k.w[i]).epsilon(1e-12));

    Image mismatched(8);
    CHECK_THROWS_AS(nf::conv2_periodic(mismatched, k), std::invalid_argument);
}

TEST_CASE("conv2_periodic matches direct summation") {
    Image f = random_image(16, 7);
    auto k = nf::gaussian2d(2.5, 16);
    Image spec = nf::conv2_periodic(f, k);
    Image direct = nf::ref::conv2_direct(f, k);
    for (size_t i = 0; i < f.size(); ++i)
        CHECK(std::abs(spec.v[i] - direct.v[i]) <= 1e-10);
}

TEST_CASE("conv3_periodic identities and direct oracle") {
    auto w = nf::gaussian3d(2.0, 1.0, 8, 4);

    OrientationVolume constant(8, 4, 0.3);
    auto out = nf::conv3_periodic(constant, w);
    for (double x : out.v) CHECK(x == doctest::Approx(0.3).epsilon(1e-12));

    OrientationVolume delta(8, 4);
    delta.v[0] = 1.0;
    auto impulse = nf::conv3_periodic(delta, w);
    for (size_t i = 0; i < impulse.size(); ++i)
        CHECK(impulse.v[i] == doctest::Approx(w.w[i]).epsilon(1e-12));

    auto f = random_volume(8, 4, 9);
    auto spec = nf::conv3_periodic(f, w);
    auto direct = nf::ref::conv3_direct(f, w);
    for (size_t i = 0; i < f.size(); ++i)
        CHECK(std::abs(spec.v[i] - direct.v[i]) <= 1e-10);
}

TEST_CASE("convolution is linear") {
    auto k = nf::gaussian2d(2.0, 12);
    Image f = random_image(12, 31), g = random_image(12, 32);
    const double a = 0.7, b = -1.3;
    Image combo(12);
    for (size_t i = 0; i < combo.size(); ++i) combo.v[i] = a * f.v[i] + b * g.v[i];
    Image lhs = nf::conv2_periodic(combo, k);
    Image cf = nf::conv2_periodic(f, k), cg = nf::conv2_periodic(g, k);
    for (size_t i = 0; i < lhs.size(); ++i)
        CHECK(std::abs(lhs.v[i] - (a * cf.v[i] + b * cg.v[i])) <= 1e-10);
}

TEST_CASE("convolution commutes with circular shifts") {
    auto k = nf::gaussian2d(1.7, 12);
    Image f = random_image(12, 41);
    const int dr = 3, dc = 7;
    Image shifted(12);
    for (int r = 0; r < 12; ++r)
        for (int c = 0; c < 12; ++c)
            shifted.at((r + dr) % 12, (c + dc) % 12) = f.at(r, c);
    Image a = nf::conv2_periodic(shifted, k);
    Image b = nf::conv2_periodic(f, k);
    for (int r = 0; r < 12; ++r)
        for (int c = 0; c < 12; ++c)
            CHECK(std::abs(a.at((r + dr) % 12, (c + dc) % 12) - b.at(r, c)) <= 1e-12);
}

TEST_CASE("local_mean behaviour") {
    Image constant(16, 0.42, true);
    Image mu = nf::local_mean(constant, 2.0);
    for (double x : mu.v) CHECK(x == doctest::Approx(0.42).epsilon(1e-12));

    // sigma >= N approaches the global mean
    Image f = random_image(16, 55);
    f.nominal = true;
    double mean = 0.0;
    for (double x : f.v) mean += x;
    mean /= static_cast<double>(f.size());
    Image wide = nf::local_mean(f, 20.0);
    for (double x : wide.v) CHECK(std::abs(x - mean) <= 1e-3);

    // checkerboard against direct summation
    Image board(16, 0.0, true);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c) board.at(r, c) = (r + c) % 2 == 0 ? 0.0 : 1.0;
    Image got = nf::local_mean(board, 3.0);
    Image want = nf::ref::conv2_direct(board, nf::gaussian2d(3.0, 16));
    for (size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got.v[i] - want.v[i]) <= 1e-10);

    Image bad(8, 1.5);
    CHECK_THROWS_AS(nf::local_mean(bad, 2.0), std::invalid_argument);
}

TEST_CASE("image validation") {
    Image img(4, 0.5, true);
    CHECK_NOTHROW(img.validate());
    img.v[3] = 1.25;
    CHECK_THROWS_AS(img.validate(), std::invalid_argument);
    img.v[3] = std::nan("");
    CHECK_THROWS_AS(img.validate(), std::invalid_argument);
    CHECK_THROWS_AS(Image(-2), std::invalid_argument);
}

TEST_CASE("spectral conv3 matches direct summation at 16x16x8") {
    auto w = nf::gaussian3d(2.5, 1.2, 16, 8);
    auto f = random_volume(16, 8, 77);
    auto spec = nf::conv3_periodic(f, w);
    auto direct = nf::ref::conv3_direct(f, w);
    double worst = 0.0;
    for (size_t i = 0; i < f.size(); ++i)
        worst = std::max(worst, std::abs(spec.v[i] - direct.v[i]));
    CHECK(worst <= 1e-10);
}

// SPDX-License-Identifier: Apache-2.0
//
// Compares the OpenMP/spectral kernels against the serial reference
// implementations kept for testing.

#include <benchmark/benchmark.h>

#include <random>

#include "nfield/grid.hpp"
#include "nfield/interaction.hpp"
#include "ref/reference.hpp"

namespace {

nf::Image random_image(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    nf::Image img(n);
    for (double& x : img.v) x = dist(rng);
    return img;
}

nf::OrientationVolume random_volume(int n, int k, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    nf::OrientationVolume vol(n, k);
    for (double& x : vol.v) x = dist(rng);
    return vol;
}

void bm_conv2_spectral(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    nf::Image f = random_image(n, 1);
    nf::Kernel2D w = nf::gaussian2d(3.0, n);
    for (auto _ : state) benchmark::DoNotOptimize(nf::conv2_periodic(f, w));
}

void bm_conv2_direct(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    nf::Image f = random_image(n, 1);
    nf::Kernel2D w = nf::gaussian2d(3.0, n);
    for (auto _ : state) benchmark::DoNotOptimize(nf::ref::conv2_direct(f, w));
}

void bm_conv3_spectral(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    nf::OrientationVolume f = random_volume(n, 8, 2);
    nf::Kernel3D w = nf::gaussian3d(2.0, 1.0, n, 8);
    for (auto _ : state) benchmark::DoNotOptimize(nf::conv3_periodic(f, w));
}

void bm_conv3_direct(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    nf::OrientationVolume f = random_volume(n, 8, 2);
    nf::Kernel3D w = nf::gaussian3d(2.0, 1.0, n, 8);
    for (auto _ : state) benchmark::DoNotOptimize(nf::ref::conv3_direct(f, w));
}

void bm_interaction_fast(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    nf::OrientationVolume f = random_volume(n, 8, 3);
    nf::Kernel3D w = nf::gaussian3d(2.0, 1.0, n, 8);
    for (auto _ : state) benchmark::DoNotOptimize(nf::interaction_fast(f, w, 5.0, 11));
}

void bm_interaction_naive(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    nf::OrientationVolume f = random_volume(n, 8, 3);
    nf::Kernel3D w = nf::gaussian3d(2.0, 1.0, n, 8);
    for (auto _ : state) benchmark::DoNotOptimize(nf::interaction_naive(f, w, 5.0));
}

}  // namespace

BENCHMARK(bm_conv2_spectral)->Arg(64)->Arg(128);
BENCHMARK(bm_conv2_direct)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_conv3_spectral)->Arg(16)->Arg(32);
BENCHMARK(bm_conv3_direct)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_interaction_fast)->Arg(16)->Arg(32);
BENCHMARK(bm_interaction_naive)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

// SPDX-License-Identifier: Apache-2.0
#include "nfield/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace nf::fft {
namespace {

// One cached plan per (rank tag, dims, direction). Plans are created with
// FFTW_ESTIMATE (deterministic algorithm choice, no timing runs) and
// FFTW_UNALIGNED so they can execute on any caller buffer.
class PlanCache {
public:
    fftw_plan get(int k, int n, bool inverse) {
        std::scoped_lock lock(mtx_);
        auto key = std::make_tuple(k, n, inverse);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        size_t count = static_cast<size_t>(n) * n * (k > 0 ? k : 1);
        std::vector<fftw_complex> scratch(count);
        fftw_plan p;
        int sign = inverse ? FFTW_BACKWARD : FFTW_FORWARD;
        unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        if (k > 0)
            p = fftw_plan_dft_3d(k, n, n, scratch.data(), scratch.data(), sign, flags);
        else
            p = fftw_plan_dft_2d(n, n, scratch.data(), scratch.data(), sign, flags);
        plans_.emplace(key, p);
        return p;
    }

private:
    std::mutex mtx_;
    std::map<std::tuple<int, int, bool>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void execute(fftw_plan plan, const cplx* in, cplx* out, size_t count, bool inverse) {
    // fftw_execute_dft does not modify the input array for out-of-place c2c.
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(count);
        for (size_t i = 0; i < count; ++i) out[i] *= scale;
    }
}

}  // namespace

void dft2(const cplx* in, cplx* out, int n, bool inverse) {
    execute(cache().get(0, n, inverse), in, out, static_cast<size_t>(n) * n, inverse);
}

void dft3(const cplx* in, cplx* out, int k, int n, bool inverse) {
    execute(cache().get(k, n, inverse), in, out, static_cast<size_t>(n) * n * k, inverse);
}

}  // namespace nf::fft

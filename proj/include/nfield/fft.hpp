// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

namespace nf::fft {

using cplx = std::complex<double>;

// Unnormalised forward / (1/size)-normalised inverse complex DFTs.
// Plans are cached per shape with FFTW_ESTIMATE so results are
// reproducible across runs; execution is thread-safe.
void dft2(const cplx* in, cplx* out, int n, bool inverse);
void dft3(const cplx* in, cplx* out, int k, int n, bool inverse);

}  // namespace nf::fft

// SPDX-License-Identifier: Apache-2.0
#pragma once

// Serial, loop-based reference implementations. These deliberately avoid
// the spectral code paths so tests and the benchmark can compare the
// production kernels against independent direct summation.

#include "nfield/grid.hpp"

namespace nf::ref {

/// Direct O(N^4) circular convolution.
Image conv2_direct(const Image& f, const Kernel2D& kern);

/// Direct O((N^2 K)^2) circular convolution.
OrientationVolume conv3_direct(const OrientationVolume& f, const Kernel3D& kern);

/// Wrapped Gaussian evaluated term by term at one 3D offset (unnormalised).
double wrapped_gaussian_sample(int dr, int dc, int dch, int n, int k,
                               double sigma_spatial, double sigma_orient, int wraps);

/// Triple-loop wrapped 3D Gaussian, normalised to unit sum.
Kernel3D gaussian3d_direct(double sigma_spatial, double sigma_orient, int n, int k,
                           int wraps = 12);

}  // namespace nf::ref

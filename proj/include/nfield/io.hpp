// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nfield/grid.hpp"

namespace nf::io {

/// Linear [0,1] -> [0,255] quantiser, round-half-up, clamped. A guard of
/// 1e-7/255 keeps values that land numerically on a half-boundary stable.
uint8_t quantize(double v);

/// Inverse mapping used by the readers.
inline double dequantize(uint8_t b) { return static_cast<double>(b) / 255.0; }

void write_png(const std::filesystem::path& path, const Image& img);
Image read_png(const std::filesystem::path& path);

void write_pgm(const std::filesystem::path& path, const Image& img);
Image read_pgm(const std::filesystem::path& path);

/// Writes by extension (.png or .pgm).
void write_image(const std::filesystem::path& path, const Image& img);
Image read_image(const std::filesystem::path& path);

/// Quantised bytes of an image, row-major (what a write would encode).
std::vector<uint8_t> quantized_bytes(const Image& img);

}  // namespace nf::io

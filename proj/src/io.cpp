// SPDX-License-Identifier: Apache-2.0
#include "nfield/io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace nf::io {

uint8_t quantize(double v) {
    if (!(v > 0.0)) v = 0.0;
    if (v > 1.0) v = 1.0;
    double q = std::floor(255.0 * v + 0.5 + 1e-7);
    if (q < 0.0) q = 0.0;
    if (q > 255.0) q = 255.0;
    return static_cast<uint8_t>(q);
}

std::vector<uint8_t> quantized_bytes(const Image& img) {
    std::vector<uint8_t> out(img.size());
    for (size_t i = 0; i < img.size(); ++i) out[i] = quantize(img.v[i]);
    return out;
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

void write_png(const std::filesystem::path& path, const Image& img) {
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw std::runtime_error("write_png: cannot open " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("write_png: libpng failure on " + path.string());
    }
    png_init_io(png, fp.get());
    // Fixed compression settings keep re-renders byte-identical.
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, img.n, img.n, 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<uint8_t> bytes = quantized_bytes(img);
    for (int r = 0; r < img.n; ++r)
        png_write_row(png, bytes.data() + static_cast<size_t>(r) * img.n);
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

Image read_png(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw std::runtime_error("read_png: cannot open " + path.string());

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("read_png: libpng failure on " + path.string());
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info);
    png_uint_32 h = png_get_image_height(png, info);
    int depth = png_get_bit_depth(png, info);
    int color = png_get_color_type(png, info);
    if (w != h) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::invalid_argument("read_png: only square images are supported");
    }
    if (color != PNG_COLOR_TYPE_GRAY) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::invalid_argument("read_png: only 8-bit grayscale is supported");
    }
    if (depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (depth == 16) png_set_strip_16(png);
    png_read_update_info(png, info);

    Image img(static_cast<int>(w), 0.0, true);
    std::vector<uint8_t> row(w);
    for (png_uint_32 r = 0; r < h; ++r) {
        png_read_row(png, row.data(), nullptr);
        for (png_uint_32 c = 0; c < w; ++c) img.at(static_cast<int>(r), static_cast<int>(c)) = dequantize(row[c]);
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void write_pgm(const std::filesystem::path& path, const Image& img) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_pgm: cannot open " + path.string());
    out << "P2\n" << img.n << " " << img.n << "\n255\n";
    for (int r = 0; r < img.n; ++r) {
        for (int c = 0; c < img.n; ++c) {
            out << static_cast<int>(quantize(img.at(r, c)));
            out << (c + 1 == img.n ? '\n' : ' ');
        }
    }
    if (!out) throw std::runtime_error("write_pgm: write failed on " + path.string());
}

Image read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_pgm: cannot open " + path.string());
    std::string magic;
    in >> magic;
    if (magic != "P2") throw std::invalid_argument("read_pgm: expected ASCII P2 file");
    int w = 0, h = 0, maxval = 0;
    in >> w >> h >> maxval;
    if (w != h) throw std::invalid_argument("read_pgm: only square images are supported");
    if (maxval != 255) throw std::invalid_argument("read_pgm: expected maxval 255");
    Image img(w, 0.0, true);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            int x;
            if (!(in >> x) || x < 0 || x > 255)
                throw std::invalid_argument("read_pgm: bad sample");
            img.at(r, c) = dequantize(static_cast<uint8_t>(x));
        }
    return img;
}

void write_image(const std::filesystem::path& path, const Image& img) {
    auto ext = path.extension().string();
    if (ext == ".png")
        write_png(path, img);
    else if (ext == ".pgm")
        write_pgm(path, img);
    else
        throw std::invalid_argument("write_image: unsupported extension " + ext);
}

Image read_image(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    if (ext == ".png") return read_png(path);
    if (ext == ".pgm") return read_pgm(path);
    throw std::invalid_argument("read_image: unsupported extension " + ext);
}

}  // namespace nf::io

// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "nfield/io.hpp"

using nf::Image;

namespace {

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

std::vector<char> file_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::vector<char>(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("quantiser rounds half up and clamps") {
    CHECK(nf::io::quantize(0.0) == 0);
    CHECK(nf::io::quantize(1.0) == 255);
    CHECK(nf::io::quantize(0.5) == 128);           // 127.5 rounds up
    CHECK(nf::io::quantize(0.5 - 1e-13) == 128);   // guarded boundary
    CHECK(nf::io::quantize(0.498) == 127);
    CHECK(nf::io::quantize(127.4 / 255.0) == 127);
    CHECK(nf::io::quantize(-0.2) == 0);
    CHECK(nf::io::quantize(1.7) == 255);
    CHECK(nf::io::quantize(std::nan("")) == 0);
}

TEST_CASE("png round trip preserves quantised values") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    Image img(32, 0.0, true);
    for (double& x : img.v) x = dist(rng);

    auto path = temp_file("nf_io_test.png");
    nf::io::write_png(path, img);
    Image back = nf::io::read_png(path);
    REQUIRE(back.n == img.n);
    for (size_t i = 0; i < img.size(); ++i)
        CHECK(back.v[i] == nf::io::dequantize(nf::io::quantize(img.v[i])));

    // writing the read-back image reproduces the file byte for byte
    auto path2 = temp_file("nf_io_test2.png");
    nf::io::write_png(path2, back);
    CHECK(file_bytes(path) == file_bytes(path2));
    std::filesystem::remove(path);
    std::filesystem::remove(path2);
}

TEST_CASE("pgm round trip and validation") {
    Image img(8, 0.0, true);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) img.at(r, c) = (r * 8 + c) / 63.0;

    auto path = temp_file("nf_io_test.pgm");
    nf::io::write_pgm(path, img);
    Image back = nf::io::read_pgm(path);
    for (size_t i = 0; i < img.size(); ++i)
        CHECK(back.v[i] == nf::io::dequantize(nf::io::quantize(img.v[i])));
    std::filesystem::remove(path);

    auto bad = temp_file("nf_io_bad.pgm");
    {
        std::ofstream out(bad);
        out << "P2\n4 3\n255\n";  // non-square
        for (int i = 0; i < 12; ++i) out << "0 ";
    }
    CHECK_THROWS_AS(nf::io::read_pgm(bad), std::invalid_argument);
    {
        std::ofstream out(bad);
        out << "P5\n4 4\n255\n";
    }
    CHECK_THROWS_AS(nf::io::read_pgm(bad), std::invalid_argument);
    std::filesystem::remove(bad);
}

TEST_CASE("write_image dispatches on extension") {
    Image img(4, 0.25, true);
    auto png = temp_file("nf_io_any.png");
    auto pgm = temp_file("nf_io_any.pgm");
    nf::io::write_image(png, img);
    nf::io::write_image(pgm, img);
    CHECK(nf::io::read_image(png).v == nf::io::read_image(pgm).v);
    std::filesystem::remove(png);
    std::filesystem::remove(pgm);
    CHECK_THROWS_AS(nf::io::write_image(temp_file("nf_io_any.bmp"), img),
                    std::invalid_argument);
}

// SPDX-License-Identifier: Apache-2.0
#include "nfield/lifting.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "nfield/fft.hpp"

namespace nf {
namespace {

// Centred cardinal B-spline of degree d (B_0 = indicator of [-1/2, 1/2)).
double bspline(int d, double x) {
    if (d == 0) return (x >= -0.5 && x < 0.5) ? 1.0 : 0.0;
    double h = 0.5 * (d + 1);
    return ((x + h) * bspline(d - 1, x + 0.5) + (h - x) * bspline(d - 1, x - 0.5)) / d;
}

// Angular window of channel `ch`: wrapped sum of B-spline translates in
// units of the channel spacing pi/K. Summing over channels telescopes to
// the full integer-translate partition of unity.
double angular_weight(double phi, int ch, int k, int bw) {
    const double spacing = kPi / k;
    const double theta = spacing * ch;
    double acc = 0.0;
    for (int m = -(bw + 2); m <= bw + 2; ++m)
        acc += bspline(bw, (phi - theta + m * kPi) / spacing);
    return acc;
}

int signed_freq(int idx, int n) { return idx <= n / 2 ? idx : idx - n; }

}  // namespace

CakeFilterBank build_cake_bank(int n, int k, int bw, double lowpass_sigma) {
    if (n < 4) throw std::invalid_argument("build_cake_bank: grid too small");
    if (k < 1) throw std::invalid_argument("build_cake_bank: need at least one channel");
    if (bw < 1) throw std::invalid_argument("build_cake_bank: window order must be >= 1");
    if (k > n) throw std::invalid_argument("build_cake_bank: angular resolution exceeds grid");

    CakeFilterBank bank;
    bank.n = n;
    bank.k = k;
    bank.bw = bw;
    bank.filters.resize(static_cast<size_t>(k) * n * n);

    // Each bin is processed once per {w, -w} orbit and the value assigned
    // to both members, which makes the point-reflection symmetry bitwise.
    // Even-N Nyquist bins alias the +N/2 and -N/2 directions onto one
    // sample; their weight is the mean of the window over all alias reads,
    // the unique assignment that keeps the bank rotation-covariant.
#pragma omp parallel for
    for (int fr = 0; fr < n; ++fr) {
        for (int fc = 0; fc < n; ++fc) {
            size_t off = static_cast<size_t>(fr) * n + fc;
            int pr = (n - fr) % n, pc = (n - fc) % n;
            size_t poff = static_cast<size_t>(pr) * n + pc;
            if (pr < fr || (pr == fr && pc < fc)) continue;  // orbit already done
            if (fr == 0 && fc == 0) {
                for (int ch = 0; ch < k; ++ch)
                    bank.filters[static_cast<size_t>(ch) * n * n + off] = 1.0 / k;
                continue;
            }

            const bool nyq_r = (n % 2 == 0) && fr == n / 2;
            const bool nyq_c = (n % 2 == 0) && fc == n / 2;
            const double ry[2] = {static_cast<double>(signed_freq(fr, n)),
                                  static_cast<double>(-n / 2)};
            const double rx[2] = {static_cast<double>(signed_freq(fc, n)),
                                  static_cast<double>(-n / 2)};
            const int nry = nyq_r ? 2 : 1, nrx = nyq_c ? 2 : 1;

            double taper = 1.0;
            if (lowpass_sigma > 0.0) {
                double rho2 = ry[0] * ry[0] + rx[0] * rx[0];
                taper = std::exp(-rho2 / (2.0 * lowpass_sigma * lowpass_sigma));
            }
            for (int ch = 0; ch < k; ++ch) {
                double acc = 0.0;
                for (int iy = 0; iy < nry; ++iy)
                    for (int ix = 0; ix < nrx; ++ix)
                        acc += angular_weight(std::atan2(ry[iy], rx[ix]), ch, k, bw);
                double val = taper * acc / (nry * nrx);
                bank.filters[static_cast<size_t>(ch) * n * n + off] = val;
                bank.filters[static_cast<size_t>(ch) * n * n + poff] = val;
            }
        }
    }
    return bank;
}

OrientationVolume lift(const Image& f, const CakeFilterBank& bank) {
    if (f.n != bank.n) throw std::invalid_argument("lift: shape mismatch");
    const int n = f.n;
    const size_t plane = bank.plane();

    std::vector<fft::cplx> spectrum(plane);
    for (size_t i = 0; i < plane; ++i) spectrum[i] = f.v[i];
    fft::dft2(spectrum.data(), spectrum.data(), n, false);

    OrientationVolume out(n, bank.k);
#pragma omp parallel for
    for (int ch = 0; ch < bank.k; ++ch) {
        std::vector<fft::cplx> buf(plane);
        const fft::cplx* filt = bank.filters.data() + static_cast<size_t>(ch) * plane;
        for (size_t i = 0; i < plane; ++i) buf[i] = spectrum[i] * filt[i];
        fft::dft2(buf.data(), buf.data(), n, true);
        double* dst = out.v.data() + static_cast<size_t>(ch) * plane;
        for (size_t i = 0; i < plane; ++i) dst[i] = buf[i].real();
    }
    return out;
}

Image project(const OrientationVolume& vol) {
    Image out(vol.n);
    const size_t plane = vol.plane();
    for (int ch = 0; ch < vol.k; ++ch) {
        const double* src = vol.v.data() + static_cast<size_t>(ch) * plane;
        for (size_t i = 0; i < plane; ++i) out.v[i] += src[i];
    }
    return out;
}

namespace {
constexpr char kMagic[4] = {'C', 'A', 'K', 'E'};
}

void save_bank(const CakeFilterBank& bank, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_bank: cannot open " + path.string());
    uint32_t hdr[3] = {static_cast<uint32_t>(bank.n), static_cast<uint32_t>(bank.k),
                       static_cast<uint32_t>(bank.bw)};
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
    const size_t plane = bank.plane();
    std::vector<double> buf(plane);
    for (int ch = 0; ch < bank.k; ++ch) {
        const auto* filt = bank.filters.data() + static_cast<size_t>(ch) * plane;
        for (size_t i = 0; i < plane; ++i) buf[i] = filt[i].real();
        out.write(reinterpret_cast<const char*>(buf.data()), plane * sizeof(double));
        for (size_t i = 0; i < plane; ++i) buf[i] = filt[i].imag();
        out.write(reinterpret_cast<const char*>(buf.data()), plane * sizeof(double));
    }
    if (!out) throw std::runtime_error("save_bank: write failed on " + path.string());
}

CakeFilterBank load_bank(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_bank: cannot open " + path.string());
    char magic[4];
    uint32_t hdr[3];
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(hdr), sizeof hdr);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("load_bank: bad header in " + path.string());

    CakeFilterBank bank;
    bank.n = static_cast<int>(hdr[0]);
    bank.k = static_cast<int>(hdr[1]);
    bank.bw = static_cast<int>(hdr[2]);
    if (bank.n < 4 || bank.k < 1 || bank.k > bank.n)
        throw std::runtime_error("load_bank: implausible dimensions in " + path.string());
    const size_t plane = bank.plane();
    bank.filters.resize(static_cast<size_t>(bank.k) * plane);
    std::vector<double> re(plane), im(plane);
    for (int ch = 0; ch < bank.k; ++ch) {
        in.read(reinterpret_cast<char*>(re.data()), plane * sizeof(double));
        in.read(reinterpret_cast<char*>(im.data()), plane * sizeof(double));
        if (!in) throw std::runtime_error("load_bank: truncated file " + path.string());
        auto* filt = bank.filters.data() + static_cast<size_t>(ch) * plane;
        for (size_t i = 0; i < plane; ++i) filt[i] = {re[i], im[i]};
    }
    return bank;
}

}  // namespace nf

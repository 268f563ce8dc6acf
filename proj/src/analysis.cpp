// SPDX-License-Identifier: Apache-2.0
#include "nfield/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace nf {

Profile line_profile(const Image& img, Axis axis, int index) {
    if (index < 0 || index >= img.n) throw std::invalid_argument("line_profile: index out of bounds");
    Profile p;
    p.axis = axis;
    p.index = index;
    p.values.resize(img.n);
    for (int i = 0; i < img.n; ++i)
        p.values[i] = axis == Axis::Row ? img.at(index, i) : img.at(i, index);
    return p;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::ADarker: return "a-darker";
        case Verdict::ALighter: return "a-lighter";
        case Verdict::NoEffect: return "no-effect";
    }
    return "?";
}

namespace {

// Min-max normalisation; degenerate (constant) images map to all zeros.
struct RangeMap {
    double lo = 0.0;
    double scale = 0.0;
    double operator()(double x) const { return (x - lo) * scale; }
};

RangeMap range_map(const Image& img) {
    double lo = img.v[0], hi = img.v[0];
    for (double x : img.v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    RangeMap m;
    m.lo = lo;
    m.scale = hi - lo > 1e-300 ? 1.0 / (hi - lo) : 0.0;
    return m;
}

double region_mean(const Image& img, const TargetRegion& t, const RangeMap& m) {
    if (t.pixels.empty()) throw std::invalid_argument("region_mean: empty target " + t.label);
    double acc = 0.0;
    for (auto [r, c] : t.pixels) {
        if (r < 0 || r >= img.n || c < 0 || c >= img.n)
            throw std::invalid_argument("region_mean: target pixel out of bounds");
        acc += m(img.at(r, c));
    }
    return acc / static_cast<double>(t.pixels.size());
}

}  // namespace

Comparison compare_targets(const Image& img, const TargetRegion& a, const TargetRegion& b,
                           double threshold) {
    RangeMap m = range_map(img);
    Comparison out;
    out.mean_a = region_mean(img, a, m);
    out.mean_b = region_mean(img, b, m);
    double diff = out.mean_a - out.mean_b;
    out.margin = std::abs(diff);
    if (out.margin > threshold)
        out.verdict = diff < 0.0 ? Verdict::ADarker : Verdict::ALighter;
    else
        out.verdict = Verdict::NoEffect;
    return out;
}

double grating_amplitude(const Image& img, const std::vector<TargetRegion>& bar_cells) {
    int r_lo = img.n, r_hi = -1;
    for (const auto& t : bar_cells)
        for (auto [r, c] : t.pixels) {
            r_lo = std::min(r_lo, r);
            r_hi = std::max(r_hi, r);
        }
    if (r_hi < r_lo) throw std::invalid_argument("grating_amplitude: no bar pixels");

    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (int c = 0; c < img.n; ++c) {
        double acc = 0.0;
        for (int r = r_lo; r <= r_hi; ++r) acc += img.at(r, c);
        acc /= static_cast<double>(r_hi - r_lo + 1);
        if (first) {
            lo = hi = acc;
            first = false;
        } else {
            lo = std::min(lo, acc);
            hi = std::max(hi, acc);
        }
    }
    return hi - lo;
}

std::vector<CounterphaseResult> counterphase_check(const Image& img, const Stimulus& stim,
                                                   double threshold) {
    RangeMap m = range_map(img);

    std::vector<const TargetRegion*> bars;
    double bar_mean = 0.0, bg_mean = 0.0;
    size_t bar_count = 0, bg_count = 0;
    for (const auto& t : stim.targets) {
        bool is_bar = t.label.rfind("bar-cell-", 0) == 0;
        bool is_bg = t.label.rfind("bg-cell-", 0) == 0;
        if (is_bar) bars.push_back(&t);
        if (!is_bar && !is_bg) continue;
        for (auto [r, c] : t.pixels) {
            double x = m(img.at(r, c));
            if (is_bar) {
                bar_mean += x;
                ++bar_count;
            } else {
                bg_mean += x;
                ++bg_count;
            }
        }
    }
    if (bar_count == 0 || bg_count == 0)
        throw std::invalid_argument("counterphase_check: stimulus lacks grating cells");
    bar_mean /= static_cast<double>(bar_count);
    bg_mean /= static_cast<double>(bg_count);

    std::vector<CounterphaseResult> out;
    for (const TargetRegion* bar : bars) {
        const TargetRegion& bg = stim.target(bar->reference);
        CounterphaseResult r;
        r.bar_label = bar->label;
        r.bg_label = bg.label;
        r.bar_dev = region_mean(img, *bar, m) - bar_mean;
        r.bg_dev = region_mean(img, bg, m) - bg_mean;
        r.counterphase =
            std::abs(r.bar_dev) > threshold && r.bar_dev * r.bg_dev < 0.0;
        out.push_back(r);
    }
    return out;
}

OffsetResult poggendorff_offset(const Image& img, const Stimulus& stim, int band_rows,
                                double window_frac, double noise_floor) {
    const double theta = stim.meta("theta");
    const double s = stim.meta("stripe_px");
    const int r0 = static_cast<int>(stim.meta("bar_row0"));
    const int r1 = static_cast<int>(stim.meta("bar_row1"));
    const double hw = stim.meta("bar_halfwidth");
    const long long idx = static_cast<long long>(stim.meta("marked_index"));
    const double sin_t = std::sin(theta), cos_t = std::cos(theta);
    const double stripe_cols = s / sin_t;

    RangeMap m = range_map(img);
    auto geo_at = [&](double r) { return ((idx + 0.5) * s - r * cos_t) / sin_t; };
    auto sample = [&](int r, double c) {
        // bilinear along the column axis
        int c0 = static_cast<int>(std::floor(c));
        double frac = c - c0;
        c0 = std::max(0, std::min(img.n - 2, c0));
        return m((1.0 - frac) * img.at(r, c0) + frac * img.at(r, c0 + 1));
    };

    // Skew profile: average the bar interior along the geometric stripe
    // direction. A band continuing the marked stripe is parallel to it, so
    // it shows up as a dip at its lateral offset; averaging the whole
    // interior suppresses the boundary-ring structure that does not cross
    // the bar. The band must clear the noise floor on both interior halves
    // separately, which distinguishes an inpainting failure (edge-only
    // response) from a perceived continuation.
    const int margin = std::max(band_rows, (r1 - r0) / 4);
    const int row_lo = r0 + margin, row_hi = r1 - margin;
    const int row_mid = (row_lo + row_hi) / 2;
    OffsetResult out;
    if (row_hi - row_lo < 2) return out;

    const double half_span = std::max(window_frac * 2.0 * hw, 1.6 * stripe_cols);
    const double step = 0.25;
    const int half_samples = static_cast<int>(std::floor(half_span / step));
    const int samples = 2 * half_samples + 1;  // symmetric grid through zero
    auto delta_at = [&](int i) { return (i - half_samples) * step; };
    std::vector<double> full(samples, 0.0), upper(samples, 0.0), lower(samples, 0.0);
    for (int i = 0; i < samples; ++i) {
        double delta = delta_at(i);
        for (int r = row_lo; r < row_hi; ++r) {
            double c = geo_at(r) + delta;
            if (c < 0.0 || c > img.n - 1.0) continue;
            double v = sample(r, c);
            full[i] += v;
            (r < row_mid ? upper[i] : lower[i]) += v;
        }
        full[i] /= (row_hi - row_lo);
        upper[i] /= std::max(1, row_mid - row_lo);
        lower[i] /= std::max(1, row_hi - row_mid);
    }

    auto range_of = [](const std::vector<double>& p) {
        double lo = p[0], hi = p[0];
        for (double x : p) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        return hi - lo;
    };
    out.band_range = std::min(range_of(upper), range_of(lower));
    if (out.band_range < noise_floor) return out;

    // deepest dip of the full-interior profile, then the deficit centroid
    // within half a stripe of it
    int deepest = 0;
    for (int i = 1; i < samples; ++i)
        if (full[i] < full[deepest]) deepest = i;
    double baseline = 0.0;
    for (double x : full) baseline += x;
    baseline /= samples;

    const int reach = static_cast<int>(0.5 * stripe_cols / step);
    double wsum = 0.0, dsum = 0.0;
    for (int i = std::max(0, deepest - reach); i < std::min(samples, deepest + reach + 1);
         ++i) {
        double w = std::max(0.0, baseline - full[i]);
        wsum += w;
        dsum += w * delta_at(i);
    }
    if (wsum <= 0.0) return out;
    out.completed = true;
    out.offset_px = dsum / wsum;
    return out;
}

}  // namespace nf

// SPDX-License-Identifier: Apache-2.0
#include "nfield/stimuli.hpp"

#include <algorithm>
#include <cmath>

namespace nf {

std::string relation_name(Relation r) {
    switch (r) {
        case Relation::DarkerThan: return "darker-than";
        case Relation::LighterThan: return "lighter-than";
        case Relation::CounterphaseWith: return "counterphase-with";
    }
    return "?";
}

double Stimulus::meta(const std::string& key) const {
    auto it = metadata.find(key);
    if (it == metadata.end())
        throw std::invalid_argument("Stimulus: missing metadata key " + key);
    return it->second;
}

const TargetRegion& Stimulus::target(const std::string& label) const {
    for (const auto& t : targets)
        if (t.label == label) return t;
    throw std::invalid_argument("Stimulus: missing target " + label);
}

namespace {

// Nearest even divisor of n (ties towards the smaller one) so square waves
// tile the periodic grid exactly.
int snap_even_divisor(int n, int requested) {
    int best = 0;
    for (int d = 2; d <= n; d += 2) {
        if (n % d != 0) continue;
        if (best == 0 || std::abs(d - requested) < std::abs(best - requested)) best = d;
    }
    if (best == 0) throw std::invalid_argument("stimuli: grid has no even divisor");
    return best;
}

std::vector<std::pair<int, int>> rect_pixels(int r0, int r1, int c0, int c1) {
    std::vector<std::pair<int, int>> px;
    px.reserve(static_cast<size_t>(r1 - r0) * (c1 - c0));
    for (int r = r0; r < r1; ++r)
        for (int c = c0; c < c1; ++c) px.emplace_back(r, c);
    return px;
}

double snap_trig(double x) { return std::abs(x) < 1e-12 ? 0.0 : x; }

// Stripe index of a binary grating whose stripe lines make angle `theta`
// with the horizontal axis, slanting up-right on screen; stripe width s
// in pixels.
long long stripe_index(int row, int col, double sin_t, double cos_t, double s) {
    double proj = col * sin_t + row * cos_t;
    return static_cast<long long>(std::floor(proj / s));
}

}  // namespace

Stimulus make_white(int n, int period) {
    if (n < 64) throw std::invalid_argument("make_white: grid too small for the stripes");
    // The assimilation percept needs the interaction width to span at
    // least a stripe period, so the default grating is finer than the
    // oriented stimuli below.
    period = snap_even_divisor(n, period > 0 ? period : 12);
    const int s = period / 2;

    Stimulus out;
    out.name = "white";
    out.image = Image(n, 0.0, true);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) out.image.at(r, c) = (c / s) % 2 == 0 ? 0.0 : 1.0;

    // Patch spans one stripe horizontally, a few stripe widths vertically.
    const int half_h = s;
    const int r0 = n / 2 - half_h, r1 = n / 2 + half_h;
    auto patch_stripe = [&](int near_col, int parity) {
        int idx = near_col / s;
        if (idx % 2 != parity) ++idx;
        return idx;
    };
    const int left_idx = patch_stripe(n / 4, 1);    // on a white stripe
    const int right_idx = patch_stripe(3 * n / 4, 0);  // on a black stripe

    auto paint = [&](int idx) {
        for (int r = r0; r < r1; ++r)
            for (int c = idx * s; c < (idx + 1) * s; ++c) out.image.at(r, c) = 0.5;
    };
    paint(left_idx);
    paint(right_idx);

    out.targets.push_back({"left", rect_pixels(r0, r1, left_idx * s, (left_idx + 1) * s),
                           Relation::DarkerThan, "right"});
    out.targets.push_back({"right", rect_pixels(r0, r1, right_idx * s, (right_idx + 1) * s),
                           Relation::LighterThan, "left"});
    out.metadata["period_px"] = period;
    out.metadata["stripe_px"] = s;
    out.metadata["patch_rows"] = r1 - r0;
    return out;
}

Stimulus make_sbc(int n, int square_side) {
    if (n < 16) throw std::invalid_argument("make_sbc: grid too small");
    int side = square_side > 0 ? square_side : std::max(8, (n / 5) & ~1);
    if (side >= n / 2) throw std::invalid_argument("make_sbc: square does not fit its half");

    Stimulus out;
    out.name = "sbc";
    out.image = Image(n, 0.0, true);
    for (int r = 0; r < n; ++r)
        for (int c = n / 2; c < n; ++c) out.image.at(r, c) = 1.0;

    auto paint_square = [&](int cc) {
        int r0 = n / 2 - side / 2, c0 = cc - side / 2;
        for (int r = r0; r < r0 + side; ++r)
            for (int c = c0; c < c0 + side; ++c) out.image.at(r, c) = 0.5;
        return rect_pixels(r0, r0 + side, c0, c0 + side);
    };
    auto left_px = paint_square(n / 4);
    auto right_px = paint_square(3 * n / 4);

    out.targets.push_back({"left", std::move(left_px), Relation::LighterThan, "right"});
    out.targets.push_back({"right", std::move(right_px), Relation::DarkerThan, "left"});
    out.metadata["square_px"] = side;
    return out;
}

Stimulus make_luminance(int n, int radius) {
    if (n < 16) throw std::invalid_argument("make_luminance: grid too small");
    int rad = radius > 0 ? radius : std::min(12, n / 8);
    if (rad < 2 || rad > n / 4) throw std::invalid_argument("make_luminance: bad disc radius");

    Stimulus out;
    out.name = "luminance";
    out.image = Image(n, 0.0, true);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            out.image.at(r, c) = static_cast<double>(c) / (n - 1);

    auto paint_disc = [&](int cr, int cc) {
        std::vector<std::pair<int, int>> px;
        for (int r = cr - rad; r <= cr + rad; ++r)
            for (int c = cc - rad; c <= cc + rad; ++c)
                if ((r - cr) * (r - cr) + (c - cc) * (c - cc) <= rad * rad) {
                    out.image.at(r, c) = 0.5;
                    px.emplace_back(r, c);
                }
        return px;
    };
    struct Spot {
        const char* label;
        const char* ref;
        Relation rel;
        int cr, cc;
    };
    const Spot spots[] = {
        {"top-left", "top-right", Relation::LighterThan, n / 4, n / 4},
        {"top-right", "top-left", Relation::DarkerThan, n / 4, 3 * n / 4},
        {"bottom-left", "bottom-right", Relation::LighterThan, 3 * n / 4, n / 4},
        {"bottom-right", "bottom-left", Relation::DarkerThan, 3 * n / 4, 3 * n / 4},
    };
    for (const auto& sp : spots)
        out.targets.push_back({sp.label, paint_disc(sp.cr, sp.cc), sp.rel, sp.ref});
    out.metadata["radius_px"] = rad;
    return out;
}

Stimulus make_grating_induction(int n, double theta_rel, int bar_halfwidth, int period) {
    if (n < 32) throw std::invalid_argument("make_grating_induction: grid too small");
    if (!(theta_rel > 0.0) || theta_rel > 0.5 * kPi + 1e-12)
        throw std::invalid_argument("make_grating_induction: theta must lie in (0, pi/2]");
    int hw = bar_halfwidth > 0 ? bar_halfwidth : std::min(20, n / 5);
    if (2 * hw >= n) throw std::invalid_argument("make_grating_induction: bar wider than image");

    const double sin_t = snap_trig(std::sin(theta_rel));
    const double cos_t = snap_trig(std::cos(theta_rel));
    const bool axis_aligned = cos_t == 0.0;
    int per = period > 0 ? period : 24;
    if (axis_aligned) per = snap_even_divisor(n, per);
    const double s = per / 2.0;

    Stimulus out;
    out.name = "grating";
    out.image = Image(n, 0.0, true);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            long long idx = stripe_index(r, c, sin_t, cos_t, s);
            out.image.at(r, c) = ((idx % 2) + 2) % 2 == 0 ? 0.0 : 1.0;
        }

    const int r0 = n / 2 - hw, r1 = n / 2 + hw;
    for (int r = r0; r < r1; ++r)
        for (int c = 0; c < n; ++c) out.image.at(r, c) = 0.5;

    // Bar cells grouped by the stripe index of the underlying grating and
    // paired with the abutting background band just above the bar. Only
    // cells of full size are emitted (oblique stripes are clipped at the
    // image edges).
    const int band = std::min(hw, 4);
    std::map<long long, std::vector<std::pair<int, int>>> bar_cells, bg_cells;
    for (int r = r0; r < r1; ++r)
        for (int c = 0; c < n; ++c)
            bar_cells[stripe_index(r, c, sin_t, cos_t, s)].emplace_back(r, c);
    for (int r = r0 - band; r < r0; ++r)
        for (int c = 0; c < n; ++c)
            bg_cells[stripe_index(r, c, sin_t, cos_t, s)].emplace_back(r, c);

    size_t full_bar = 0;
    for (const auto& [idx, px] : bar_cells) full_bar = std::max(full_bar, px.size());
    int cells = 0;
    for (auto& [idx, px] : bar_cells) {
        auto bg = bg_cells.find(idx);
        // full-size bar cells only; oblique stripes are clipped at the
        // image edges and those fragments would skew the cell statistics
        if (px.size() != full_bar || bg == bg_cells.end() || bg->second.empty()) continue;
        std::string bar_label = "bar-cell-" + std::to_string(idx);
        std::string bg_label = "bg-cell-" + std::to_string(idx);
        out.targets.push_back({bar_label, px, Relation::CounterphaseWith, bg_label});
        out.targets.push_back({bg_label, bg->second, Relation::CounterphaseWith, bar_label});
        ++cells;
    }

    out.metadata["theta"] = theta_rel;
    out.metadata["period_px"] = per;
    out.metadata["stripe_px"] = s;
    out.metadata["bar_row0"] = r0;
    out.metadata["bar_row1"] = r1;
    out.metadata["bar_halfwidth"] = hw;
    out.metadata["band_rows"] = band;
    out.metadata["cells"] = cells;
    out.metadata["cells_exact"] = axis_aligned ? 1.0 : 0.0;
    return out;
}

Stimulus make_poggendorff(int n, int bar_halfwidth, double stripe_angle, int period) {
    if (n < 48) throw std::invalid_argument("make_poggendorff: grid too small");
    int hw = bar_halfwidth > 0 ? bar_halfwidth : std::min(24, n / 4);
    if (2 * hw >= n - 8) throw std::invalid_argument("make_poggendorff: bar wider than image");
    if (!(stripe_angle > 0.05) || stripe_angle > 0.5 * kPi - 0.05)
        throw std::invalid_argument("make_poggendorff: stripe angle must be oblique");
    const int per = period > 0 ? period : 24;
    const double s = per / 2.0;
    const double sin_t = std::sin(stripe_angle);
    const double cos_t = std::cos(stripe_angle);

    Stimulus out;
    out.name = "poggendorff";
    out.image = Image(n, 0.0, true);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            long long idx = stripe_index(r, c, sin_t, cos_t, s);
            out.image.at(r, c) = ((idx % 2) + 2) % 2 == 0 ? 0.0 : 1.0;
        }
    const int r0 = n / 2 - hw, r1 = n / 2 + hw;
    for (int r = r0; r < r1; ++r)
        for (int c = 0; c < n; ++c) out.image.at(r, c) = 0.5;

    // Marked stripe: the black stripe whose centre at the bar's bottom edge
    // lies nearest to the middle column. Black stripes carry even index.
    const int r_bot = r1;
    auto centre_col = [&](long long idx, double row) {
        return ((idx + 0.5) * s - row * cos_t) / sin_t;
    };
    long long best_idx = 0;
    double best_dist = 1e300;
    long long idx_lo = stripe_index(r_bot, 0, sin_t, cos_t, s) - 2;
    long long idx_hi = stripe_index(r_bot, n - 1, sin_t, cos_t, s) + 2;
    for (long long idx = idx_lo; idx <= idx_hi; ++idx) {
        if (((idx % 2) + 2) % 2 != 0) continue;
        double d = std::abs(centre_col(idx, r_bot) - 0.5 * n);
        if (d < best_dist) {
            best_dist = d;
            best_idx = idx;
        }
    }

    const int seg = std::min(8, n - r1);
    std::vector<std::pair<int, int>> lower_px, upper_px;
    for (int r = r1; r < r1 + seg; ++r)
        for (int c = 0; c < n; ++c)
            if (stripe_index(r, c, sin_t, cos_t, s) == best_idx) lower_px.emplace_back(r, c);
    for (int r = std::max(0, r0 - seg); r < r0; ++r)
        for (int c = 0; c < n; ++c)
            if (stripe_index(r, c, sin_t, cos_t, s) == best_idx) upper_px.emplace_back(r, c);

    out.targets.push_back(
        {"marked-lower", std::move(lower_px), Relation::CounterphaseWith, "upper-geometric"});
    out.targets.push_back(
        {"upper-geometric", std::move(upper_px), Relation::CounterphaseWith, "marked-lower"});

    out.metadata["theta"] = stripe_angle;
    out.metadata["period_px"] = per;
    out.metadata["stripe_px"] = s;
    out.metadata["bar_row0"] = r0;
    out.metadata["bar_row1"] = r1;
    out.metadata["bar_halfwidth"] = hw;
    out.metadata["marked_index"] = static_cast<double>(best_idx);
    out.metadata["geo_col_top"] = centre_col(best_idx, r0);
    out.metadata["geo_col_bottom"] = centre_col(best_idx, r_bot);
    return out;
}

Stimulus make_stimulus(const std::string& name, int n, double theta, int period,
                       int bar_halfwidth, int radius, int square_side) {
    if (name == "white") return make_white(n, period);
    if (name == "sbc") return make_sbc(n, square_side);
    if (name == "luminance") return make_luminance(n, radius);
    if (name == "grating") return make_grating_induction(n, theta, bar_halfwidth, period);
    if (name == "poggendorff") {
        double angle = theta == 0.5 * kPi ? 0.25 * kPi : theta;
        return make_poggendorff(n, bar_halfwidth, angle, period);
    }
    throw std::invalid_argument("make_stimulus: unknown stimulus " + name);
}

std::vector<std::string> stimulus_names() {
    return {"white", "sbc", "luminance", "grating", "poggendorff"};
}

}  // namespace nf

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "nfield/grid.hpp"
#include "nfield/stimuli.hpp"

namespace nf {

enum class Axis { Row, Column };

struct Profile {
    Axis axis = Axis::Row;
    int index = 0;
    std::vector<double> values;
};

/// Raw pixel row or column.
Profile line_profile(const Image& img, Axis axis, int index);

enum class Verdict { ADarker, ALighter, NoEffect };

std::string verdict_name(Verdict v);

struct Comparison {
    Verdict verdict = Verdict::NoEffect;
    double margin = 0.0;  // |mean(a) - mean(b)| after range normalisation
    double mean_a = 0.0;
    double mean_b = 0.0;
};

/// Strict comparison of region means. The image is min-max normalised
/// first, which makes the verdict (and the margin against the threshold)
/// invariant under affine rescaling of the input; the default threshold is
/// 1e-4 in the normalised [0,1] units.
Comparison compare_targets(const Image& img, const TargetRegion& a, const TargetRegion& b,
                           double threshold = 1e-4);

/// Peak-to-trough range of the per-column mean over the bar rows (rows are
/// taken from the cells' pixel span).
double grating_amplitude(const Image& img, const std::vector<TargetRegion>& bar_cells);

struct CounterphaseResult {
    std::string bar_label;
    std::string bg_label;
    double bar_dev = 0.0;  // cell mean minus bar mean, normalised units
    double bg_dev = 0.0;
    bool counterphase = false;
};

/// Per-cell counterphase verdicts for a grating-induction stimulus: the
/// deviation of each bar cell must oppose the abutting background stripe's
/// deviation with margin above the threshold.
std::vector<CounterphaseResult> counterphase_check(const Image& img, const Stimulus& stim,
                                                   double threshold = 1e-4);

struct OffsetResult {
    bool completed = false;
    double offset_px = 0.0;  // found column minus geometric column; negative = left
    double band_range = 0.0;  // profile range inside the search window
};

/// Locates the induced dark band continuing the marked lower stripe inside
/// the top boundary rows of the occluder bar, searching a window of
/// +-window_frac * bar width around the geometric continuation column, and
/// returns its centroid offset. Ranges below the noise floor report
/// no-completion.
OffsetResult poggendorff_offset(const Image& img, const Stimulus& stim, int band_rows = 3,
                                double window_frac = 0.25, double noise_floor = 1e-3);

}  // namespace nf

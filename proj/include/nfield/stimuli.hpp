// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nfield/grid.hpp"

namespace nf {

enum class Relation { DarkerThan, LighterThan, CounterphaseWith };

std::string relation_name(Relation r);

/// Pixel set whose output ordering relative to a paired region is the
/// unit of illusion verdicts.
struct TargetRegion {
    std::string label;
    std::vector<std::pair<int, int>> pixels;  // (row, col)
    Relation expected;
    std::string reference;  // label of the paired region
};

struct Stimulus {
    std::string name;
    Image image;
    std::vector<TargetRegion> targets;
    std::map<std::string, double> metadata;

    double meta(const std::string& key) const;
    const TargetRegion& target(const std::string& label) const;
};

// All generators are deterministic pure functions of their parameters.
// Spatial defaults (pass 0) follow the 200 px renders: stripe period 24,
// disc radius 12, grating bar half-width 8, occluder bar half-width 24;
// they are clamped on small grids so every generator stays usable at the
// desk scales the test suite runs at. Square-wave periods used in
// axis-aligned patterns snap to the nearest even divisor of N so the
// pattern tiles the periodic domain without a seam.

/// White's stimulus: vertical black/white square wave, one grey patch on a
/// white stripe (left) and one on a black stripe (right). Expected
/// percept: left darker than right.
Stimulus make_white(int n, int period = 0);

/// Simultaneous Brightness Contrast: black left half, white right half,
/// identical grey squares centred in each. Expected: left lighter.
Stimulus make_sbc(int n, int square_side = 0);

/// Luminance stimulus: horizontal 0..1 ramp with four identical grey
/// discs; each left disc is expected lighter than its right counterpart.
Stimulus make_luminance(int n, int radius = 0);

/// Grating induction: binary grating whose stripes make angle `theta_rel`
/// with a horizontal grey bar through the centre. Bar cells abutting each
/// background stripe are expected counterphase with it.
Stimulus make_grating_induction(int n, double theta_rel, int bar_halfwidth = 0,
                                int period = 0);

/// Poggendorff grating: oblique binary grating occluded by a wide
/// horizontal grey bar. Metadata records the marked lower black stripe and
/// its geometric continuation column at the bar's top edge.
Stimulus make_poggendorff(int n, int bar_halfwidth = 0, double stripe_angle = 0.25 * kPi,
                          int period = 0);

/// Generator lookup used by the CLI; theta applies to the grating stimulus.
Stimulus make_stimulus(const std::string& name, int n, double theta = 0.5 * kPi,
                       int period = 0, int bar_halfwidth = 0, int radius = 0,
                       int square_side = 0);

std::vector<std::string> stimulus_names();

}  // namespace nf

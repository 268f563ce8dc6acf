// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nfield/analysis.hpp"
#include "nfield/dynamics.hpp"
#include "nfield/stimuli.hpp"

namespace nf {

/// One reproducible experiment: a stimulus, a model, and the emission
/// flags. Paper-pinned defaults: N=200, K=30, bw=4, nu=1/2, tau=1e-2,
/// dt=0.1, M=11.
struct ExperimentConfig {
    std::string stimulus = "white";
    int n = 200;
    double theta = 0.5 * kPi;  // grating / occluder stripe angle
    int period = 0;            // 0 selects the stimulus default
    int bar_halfwidth = 0;
    int radius = 0;
    int square_side = 0;

    std::string model = "lhe3d";
    ModelParams params;
    int orientations = 30;
    int bw = 4;
    std::string interaction = "fast";  // fast | naive

    std::filesystem::path out_dir = ".";
    bool emit_png = true;
    bool emit_pgm = false;
    bool emit_csv = true;
    bool emit_trace = true;

    Stimulus build_stimulus() const;
    Model parse_model_or_throw() const;
    InteractionMode interaction_mode() const;
    std::string tag() const;  // file-name stem, e.g. "white_lhe3d"
};

struct VerdictRow {
    std::string kind;  // compare | counterphase | amplitude | offset
    std::string a, b;
    std::string expected;
    std::string got;
    double value = 0.0;
    bool agree = false;
};

struct ExperimentResult {
    Stimulus stimulus;
    RunResult run;
    std::vector<VerdictRow> rows;
    std::optional<double> amplitude;    // grating stimuli
    std::optional<OffsetResult> offset;  // poggendorff
};

/// Runs the experiment and evaluates the stimulus's verdict rows.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Serialisations shared by the CLI and the tests (deterministic,
/// full-precision number formatting).
std::string trace_csv(const EvolutionTrace& trace);
std::string summary_csv(const std::vector<VerdictRow>& rows);
std::string profile_csv(const Profile& profile);
std::string manifest_text(const ExperimentConfig& cfg, const ExperimentResult& res);
std::string targets_sidecar(const Stimulus& stim);

/// Writes the experiment artifacts under cfg.out_dir; returns the paths.
std::vector<std::filesystem::path> write_experiment(const ExperimentConfig& cfg,
                                                    const ExperimentResult& res);

/// Subcommand bodies; return process exit codes (0 ok, 2 usage,
/// 3 non-convergence, 4 invariant failure).
int cmd_gen(const ExperimentConfig& cfg);
int cmd_run(const ExperimentConfig& cfg);
int cmd_sweep(ExperimentConfig cfg, const std::string& parameter,
              const std::vector<double>& values);
int cmd_check(const std::optional<std::filesystem::path>& bank_file);

}  // namespace nf

// SPDX-License-Identifier: Apache-2.0
//
// nfield: generate illusion stimuli, evolve them under the WC / LHE
// neural-field models, and emit images, traces, and verdicts.
//
// Subcommands: gen | run | sweep | check.
// Exit codes: 0 ok, 2 usage, 3 non-convergence, 4 invariant failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <optional>
#include <string>

#include "nfield/runner.hpp"

namespace {

double parse_theta(const std::string& text) {
    if (text == "pi/2") return 0.5 * nf::kPi;
    if (text == "pi/3") return nf::kPi / 3.0;
    if (text == "pi/4") return 0.25 * nf::kPi;
    if (text == "pi/6") return nf::kPi / 6.0;
    size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size()) throw CLI::ValidationError("theta", "cannot parse angle " + text);
    return v;
}

struct CliOptions {
    nf::ExperimentConfig cfg;
    std::string theta_text = "pi/2";
    std::string out_dir;

    void finalize() {
        cfg.theta = parse_theta(theta_text);
        if (!out_dir.empty()) {
            cfg.out_dir = out_dir;
        } else if (const char* env = std::getenv("NFIELD_OUT")) {
            cfg.out_dir = env;
        } else {
            cfg.out_dir = ".";
        }
    }
};

void add_stimulus_options(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("stimulus", o.cfg.stimulus, "stimulus name")
        ->required()
        ->check(CLI::IsMember(nf::stimulus_names()));
    cmd->add_option("--n", o.cfg.n, "grid side in pixels");
    cmd->add_option("--theta", o.theta_text, "grating orientation (pi/2, pi/3, pi/4, pi/6 or radians)");
    cmd->add_option("--period", o.cfg.period, "stripe period in pixels (0 = default)");
    cmd->add_option("--bar-halfwidth", o.cfg.bar_halfwidth, "bar half-width in pixels (0 = default)");
    cmd->add_option("--radius", o.cfg.radius, "disc radius in pixels (0 = default)");
    cmd->add_option("--square-side", o.cfg.square_side, "square side in pixels (0 = default)");
    cmd->add_option("--out", o.out_dir, "output directory (default $NFIELD_OUT or .)");
    cmd->add_flag("--pgm", o.cfg.emit_pgm, "also write ASCII PGM images");
}

void add_model_options(CLI::App* cmd, CliOptions& o) {
    nf::ModelParams& p = o.cfg.params;
    cmd->add_option("--model", o.cfg.model, "wc2d | wc3d | lhe2d | lhe3d");
    cmd->add_option("--lambda", p.lambda, "fidelity weight");
    cmd->add_option("--nu", p.nu, "interaction weight");
    cmd->add_option("--alpha", p.alpha, "sigmoid slope");
    cmd->add_option("--sigma-mu", p.sigma_mu, "local mean std (px)");
    cmd->add_option("--sigma-omega", p.sigma_omega, "interaction std (px)");
    cmd->add_option("--sigma-orient", p.sigma_orient, "interaction std over channels");
    cmd->add_option("--dt", p.dt, "time step");
    cmd->add_option("--tau", p.tau, "stopping tolerance");
    cmd->add_option("--max-iters", p.max_iters, "iteration cap");
    cmd->add_option("--poly-degree", p.poly_degree, "odd sigmoid expansion degree");
    cmd->add_option("--beta", [&p](const CLI::results_t& r) {
        p.beta_override = std::stod(r[0]);
        return true;
    }, "raw decay override (default 1+lambda)");
    cmd->add_option("--orientations,--k", o.cfg.orientations, "orientation channels K");
    cmd->add_option("--bw", o.cfg.bw, "cake angular window order");
    cmd->add_option("--interaction", o.cfg.interaction, "fast | naive")
        ->check(CLI::IsMember({"fast", "naive"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"neural-field contrast perception simulator"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config with [section] headers");

    CliOptions gen_o, run_o, sweep_o;
    std::string sweep_param = "sigma_omega";
    std::vector<double> sweep_values;
    std::string bank_path;

    CLI::App* gen = app.add_subcommand("gen", "generate a stimulus with its target sidecar");
    add_stimulus_options(gen, gen_o);

    CLI::App* runc = app.add_subcommand("run", "evolve a stimulus and emit outputs");
    add_stimulus_options(runc, run_o);
    add_model_options(runc, run_o);

    CLI::App* sweep = app.add_subcommand("sweep", "run once per parameter value");
    add_stimulus_options(sweep, sweep_o);
    add_model_options(sweep, sweep_o);
    sweep->add_option("--param", sweep_param, "sigma_omega | sigma_mu | lambda");
    sweep->add_option("--values", sweep_values, "parameter values")->required();

    CLI::App* check = app.add_subcommand("check", "run the fast invariant suite");
    check->add_option("--bank", bank_path, "filter bank file to verify");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) {
            gen_o.finalize();
            return nf::cmd_gen(gen_o.cfg);
        }
        if (runc->parsed()) {
            run_o.finalize();
            return nf::cmd_run(run_o.cfg);
        }
        if (sweep->parsed()) {
            sweep_o.finalize();
            return nf::cmd_sweep(sweep_o.cfg, sweep_param, sweep_values);
        }
        if (check->parsed()) {
            std::optional<std::filesystem::path> bank;
            if (!bank_path.empty()) bank = bank_path;
            return nf::cmd_check(bank);
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}

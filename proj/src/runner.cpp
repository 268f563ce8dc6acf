// SPDX-License-Identifier: Apache-2.0
#include "nfield/runner.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "nfield/io.hpp"
#include "nfield/lifting.hpp"

namespace nf {
namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_short(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed on " + path.string());
}

}  // namespace

Stimulus ExperimentConfig::build_stimulus() const {
    return make_stimulus(stimulus, n, theta, period, bar_halfwidth, radius, square_side);
}

Model ExperimentConfig::parse_model_or_throw() const {
    auto m = parse_model(model);
    if (!m) throw std::invalid_argument("unknown model " + model);
    return *m;
}

InteractionMode ExperimentConfig::interaction_mode() const {
    if (interaction == "fast") return InteractionMode::Fast;
    if (interaction == "naive") return InteractionMode::Naive;
    throw std::invalid_argument("unknown interaction mode " + interaction);
}

std::string ExperimentConfig::tag() const { return stimulus + "_" + model; }

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    ExperimentResult res;
    res.stimulus = cfg.build_stimulus();

    RunOptions opts;
    opts.orientations = cfg.orientations;
    opts.bw = cfg.bw;
    opts.interaction = cfg.interaction_mode();
    res.run = run(cfg.parse_model_or_throw(), res.stimulus.image, cfg.params, opts);

    const Image& out = res.run.output;
    // Mean-comparison pairs, evaluated once per unordered pair.
    for (const auto& t : res.stimulus.targets) {
        if (t.expected == Relation::CounterphaseWith) continue;
        if (t.label >= t.reference) continue;
        Comparison cmp = compare_targets(out, t, res.stimulus.target(t.reference));
        VerdictRow row;
        row.kind = "compare";
        row.a = t.label;
        row.b = t.reference;
        row.expected = t.expected == Relation::DarkerThan ? "a-darker" : "a-lighter";
        row.got = verdict_name(cmp.verdict);
        row.value = cmp.margin;
        row.agree = row.got == row.expected;
        res.rows.push_back(row);
    }

    if (cfg.stimulus == "grating") {
        std::vector<TargetRegion> cells;
        for (const auto& t : res.stimulus.targets)
            if (t.label.rfind("bar-cell-", 0) == 0) cells.push_back(t);
        for (const auto& c : counterphase_check(out, res.stimulus)) {
            VerdictRow row;
            row.kind = "counterphase";
            row.a = c.bar_label;
            row.b = c.bg_label;
            row.expected = "counterphase";
            row.got = c.counterphase ? "counterphase" : "in-phase-or-flat";
            row.value = c.bar_dev;
            row.agree = c.counterphase;
            res.rows.push_back(row);
        }
        res.amplitude = grating_amplitude(out, cells);
        VerdictRow amp;
        amp.kind = "amplitude";
        amp.a = "bar";
        amp.value = *res.amplitude;
        amp.agree = *res.amplitude > 0.0;
        amp.expected = "positive";
        amp.got = amp.agree ? "positive" : "flat";
        res.rows.push_back(amp);
    }

    if (cfg.stimulus == "poggendorff") {
        res.offset = poggendorff_offset(out, res.stimulus);
        VerdictRow row;
        row.kind = "offset";
        row.a = "marked-lower";
        row.b = "upper-geometric";
        row.expected = "flushed-left";
        if (!res.offset->completed) {
            row.got = "no-completion";
            row.value = 0.0;
            row.agree = false;
        } else {
            row.value = res.offset->offset_px;
            row.got = res.offset->offset_px < 0.0 ? "flushed-left" : "flushed-right-or-geometric";
            row.agree = res.offset->offset_px < 0.0;
        }
        res.rows.push_back(row);
    }
    return res;
}

std::string trace_csv(const EvolutionTrace& trace) {
    std::ostringstream out;
    out << "iteration,relative_update,energy\n";
    const bool has_energy = !trace.energy.empty();
    if (has_energy) out << "0,," << fmt(trace.energy[0]) << "\n";
    for (int i = 0; i < trace.iterations; ++i) {
        out << (i + 1) << "," << fmt(trace.relative_update[i]) << ",";
        if (has_energy) out << fmt(trace.energy[i + 1]);
        out << "\n";
    }
    return out.str();
}

std::string summary_csv(const std::vector<VerdictRow>& rows) {
    std::ostringstream out;
    out << "kind,a,b,expected,got,value,agree\n";
    for (const auto& r : rows)
        out << r.kind << "," << r.a << "," << r.b << "," << r.expected << "," << r.got << ","
            << fmt(r.value) << "," << (r.agree ? 1 : 0) << "\n";
    return out.str();
}

std::string profile_csv(const Profile& profile) {
    std::ostringstream out;
    out << "index,value\n";
    for (size_t i = 0; i < profile.values.size(); ++i)
        out << i << "," << fmt(profile.values[i]) << "\n";
    return out.str();
}

std::string manifest_text(const ExperimentConfig& cfg, const ExperimentResult& res) {
    std::ostringstream out;
    out << "[experiment]\n";
    out << "stimulus=" << cfg.stimulus << "\n";
    out << "model=" << cfg.model << "\n";
    out << "n=" << cfg.n << "\n";
    out << "theta=" << fmt(cfg.theta) << "\n";
    out << "period=" << cfg.period << "\n";
    out << "bar_halfwidth=" << cfg.bar_halfwidth << "\n";
    out << "radius=" << cfg.radius << "\n";
    out << "square_side=" << cfg.square_side << "\n";
    out << "orientations=" << cfg.orientations << "\n";
    out << "bw=" << cfg.bw << "\n";
    out << "interaction=" << cfg.interaction << "\n";
    out << "[params]\n";
    const ModelParams& p = cfg.params;
    out << "lambda=" << fmt(p.lambda) << "\n";
    out << "nu=" << fmt(p.nu) << "\n";
    out << "alpha=" << fmt(p.alpha) << "\n";
    out << "beta=" << fmt(p.beta()) << "\n";
    out << "sigma_mu=" << fmt(p.sigma_mu) << "\n";
    out << "sigma_omega=" << fmt(p.sigma_omega) << "\n";
    out << "sigma_orient=" << fmt(p.sigma_orient) << "\n";
    out << "dt=" << fmt(p.dt) << "\n";
    out << "tau=" << fmt(p.tau) << "\n";
    out << "max_iters=" << p.max_iters << "\n";
    out << "poly_degree=" << p.poly_degree << "\n";
    out << "[stimulus_metadata]\n";
    for (const auto& [k, v] : res.stimulus.metadata) out << k << "=" << fmt(v) << "\n";
    out << "[result]\n";
    out << "converged=" << (res.run.trace.converged ? 1 : 0) << "\n";
    out << "iterations=" << res.run.trace.iterations << "\n";
    out << "dt_final=" << fmt(res.run.trace.dt_final) << "\n";
    out << "dt_halvings=" << res.run.trace.dt_halvings << "\n";
    out << "poly_fit_error=" << fmt(res.run.poly_fit_error) << "\n";
    out << "fit_box=" << fmt(res.run.fit_box) << "\n";
    out << "display_scale=" << fmt(res.run.display.scale) << "\n";
    out << "display_offset=" << fmt(res.run.display.offset) << "\n";
    return out.str();
}

std::string targets_sidecar(const Stimulus& stim) {
    std::ostringstream out;
    out << "# target regions for stimulus " << stim.name << "\n";
    out << "# label rmin rmax cmin cmax relation reference\n";
    for (const auto& t : stim.targets) {
        int rmin = 1 << 30, rmax = -1, cmin = 1 << 30, cmax = -1;
        for (auto [r, c] : t.pixels) {
            rmin = std::min(rmin, r);
            rmax = std::max(rmax, r);
            cmin = std::min(cmin, c);
            cmax = std::max(cmax, c);
        }
        out << t.label << " " << rmin << " " << rmax << " " << cmin << " " << cmax << " "
            << relation_name(t.expected) << " " << t.reference << "\n";
    }
    out << "# metadata\n";
    for (const auto& [k, v] : stim.metadata) out << "# " << k << "=" << fmt(v) << "\n";
    return out.str();
}

std::vector<std::filesystem::path> write_experiment(const ExperimentConfig& cfg,
                                                    const ExperimentResult& res) {
    std::filesystem::create_directories(cfg.out_dir);
    std::vector<std::filesystem::path> written;
    const std::string tag = cfg.tag();

    if (cfg.emit_png) {
        auto p = cfg.out_dir / (tag + ".png");
        io::write_png(p, res.run.output);
        written.push_back(p);
    }
    if (cfg.emit_pgm) {
        auto p = cfg.out_dir / (tag + ".pgm");
        io::write_pgm(p, res.run.output);
        written.push_back(p);
    }
    if (cfg.emit_trace) {
        auto p = cfg.out_dir / (tag + "_trace.csv");
        write_text(p, trace_csv(res.run.trace));
        written.push_back(p);
    }
    if (cfg.emit_csv) {
        auto p = cfg.out_dir / (tag + "_summary.csv");
        write_text(p, summary_csv(res.rows));
        written.push_back(p);
        auto q = cfg.out_dir / (tag + "_profile.csv");
        write_text(q, profile_csv(line_profile(res.run.output, Axis::Row, cfg.n / 2)));
        written.push_back(q);
    }
    auto m = cfg.out_dir / (tag + "_manifest.txt");
    write_text(m, manifest_text(cfg, res));
    written.push_back(m);
    return written;
}

int cmd_gen(const ExperimentConfig& cfg) {
    Stimulus stim = cfg.build_stimulus();
    std::filesystem::create_directories(cfg.out_dir);
    if (cfg.emit_png) io::write_png(cfg.out_dir / (stim.name + ".png"), stim.image);
    if (cfg.emit_pgm) io::write_pgm(cfg.out_dir / (stim.name + ".pgm"), stim.image);
    write_text(cfg.out_dir / (stim.name + ".targets"), targets_sidecar(stim));
    std::printf("wrote %s stimulus (n=%d) to %s\n", stim.name.c_str(), cfg.n,
                cfg.out_dir.string().c_str());
    return 0;
}

int cmd_run(const ExperimentConfig& cfg) {
    ExperimentResult res = run_experiment(cfg);
    write_experiment(cfg, res);
    for (const auto& r : res.rows)
        std::printf("%-12s %-18s %-18s expected=%-14s got=%-24s value=%.6g %s\n",
                    r.kind.c_str(), r.a.c_str(), r.b.c_str(), r.expected.c_str(),
                    r.got.c_str(), r.value, r.agree ? "[agree]" : "[differ]");
    std::printf("%s: %s after %d iterations\n", cfg.tag().c_str(),
                res.run.trace.converged ? "converged" : "NOT converged",
                res.run.trace.iterations);
    return res.run.trace.converged ? 0 : 3;
}

int cmd_sweep(ExperimentConfig cfg, const std::string& parameter,
              const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("sweep: empty value list");
    std::ostringstream csv;
    csv << parameter << ",converged,iterations,agree,pairs,offset,classification\n";
    int exit_code = 0;
    for (double v : values) {
        if (parameter == "sigma_omega")
            cfg.params.sigma_omega = v;
        else if (parameter == "sigma_mu")
            cfg.params.sigma_mu = v;
        else if (parameter == "lambda")
            cfg.params.lambda = v;
        else
            throw std::invalid_argument("sweep: unsupported parameter " + parameter);

        ExperimentConfig step = cfg;
        step.out_dir = cfg.out_dir / (parameter + "_" + fmt_short(v));
        ExperimentResult res = run_experiment(step);
        write_experiment(step, res);
        if (!res.run.trace.converged) exit_code = 3;

        int agree = 0, pairs = 0;
        for (const auto& r : res.rows) {
            if (r.kind == "amplitude") continue;
            ++pairs;
            agree += r.agree ? 1 : 0;
        }
        std::string offset_txt, cls;
        if (res.offset) {
            if (!res.offset->completed) {
                cls = "no-completion";
            } else {
                offset_txt = fmt(res.offset->offset_px);
                cls = std::abs(res.offset->offset_px) < 1.0
                          ? "geometric"
                          : (res.offset->offset_px < 0.0 ? "perceptual-left" : "perceptual-right");
            }
        }
        csv << fmt_short(v) << "," << (res.run.trace.converged ? 1 : 0) << ","
            << res.run.trace.iterations << "," << agree << "," << pairs << "," << offset_txt
            << "," << cls << "\n";
        std::printf("%s=%s: %s%s\n", parameter.c_str(), fmt_short(v).c_str(),
                    cls.empty() ? "done" : cls.c_str(),
                    offset_txt.empty() ? "" : (" offset=" + offset_txt).c_str());
    }
    std::filesystem::create_directories(cfg.out_dir);
    write_text(cfg.out_dir / (cfg.tag() + "_sweep_" + parameter + ".csv"), csv.str());
    return exit_code;
}

namespace {

struct CheckReport {
    int failures = 0;
    void line(bool ok, const std::string& name, const std::string& detail) {
        std::printf("%s  %-34s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
        if (!ok) ++failures;
    }
};

Image random_image(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    Image img(n, 0.0, true);
    for (double& x : img.v) x = dist(rng);
    return img;
}

double reconstruction_error(const Image& f, const CakeFilterBank& bank) {
    Image back = project(lift(f, bank));
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < f.size(); ++i) {
        double d = back.v[i] - f.v[i];
        num += d * d;
        den += f.v[i] * f.v[i];
    }
    return std::sqrt(num) / std::sqrt(std::max(den, 1e-300));
}

}  // namespace

int cmd_check(const std::optional<std::filesystem::path>& bank_file) {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    CheckReport rep;

    {
        double worst = 0.0;
        CakeFilterBank bank = build_cake_bank(32, 8, 4);
        for (unsigned seed = 1; seed <= 5; ++seed)
            worst = std::max(worst, reconstruction_error(random_image(32, seed), bank));
        Stimulus white = make_white(64);
        worst = std::max(worst,
                         reconstruction_error(white.image, build_cake_bank(64, 12, 4)));
        rep.line(worst <= 1e-10, "reconstruction", "max rel err " + fmt_short(worst));
    }

    if (bank_file) {
        CakeFilterBank bank = load_bank(*bank_file);
        double err = reconstruction_error(random_image(bank.n, 77), bank);
        rep.line(err <= 1e-10, "reconstruction (loaded bank)", "rel err " + fmt_short(err));
    }

    {
        // Spectral convolution identities on a desk-scale grid.
        Kernel2D w = gaussian2d(2.0, 16);
        Image delta(16);
        delta.v[0] = 1.0;
        Image conv = conv2_periodic(delta, w);
        double worst = 0.0;
        for (size_t i = 0; i < conv.size(); ++i)
            worst = std::max(worst, std::abs(conv.v[i] - w.w[i]));
        Image constant(16, 0.5);
        Image cc = conv2_periodic(constant, w);
        for (double x : cc.v) worst = std::max(worst, std::abs(x - 0.5));
        rep.line(worst <= 1e-12, "convolution identities", "max abs err " + fmt_short(worst));
    }

    {
        // Fast interaction against the direct-summation reference, 8x8x4.
        Kernel3D w = gaussian3d(2.0, 1.0, 8, 4);
        double worst = 0.0;
        for (unsigned seed = 3; seed <= 4; ++seed) {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> dist(0.0, 1.0);
            OrientationVolume f(8, 4);
            for (double& x : f.v) x = dist(rng);
            OrientationVolume fast = interaction_fast(f, w, 5.0, 11);
            OrientationVolume naive = interaction_naive(f, w, 5.0);
            for (size_t i = 0; i < f.size(); ++i)
                worst = std::max(worst, std::abs(fast.v[i] - naive.v[i]));
        }
        rep.line(worst <= 5e-2, "interaction oracle equivalence", "max abs err " + fmt_short(worst));
    }

    {
        // Energy descent along desk-scale LHE runs, both interaction paths.
        ModelParams p;
        p.sigma_mu = 2.0;
        p.sigma_omega = 3.0;
        bool ok = true;
        double worst_rise = 0.0;
        for (auto mode : {InteractionMode::Fast, InteractionMode::Naive}) {
            RunOptions opts;
            opts.interaction = mode;
            Image f0 = random_image(16, 21);
            RunResult r = run(Model::LHE2D, f0, p, opts);
            for (size_t i = 1; i < r.trace.energy.size(); ++i) {
                double slack = 1e-12 * std::max(1.0, std::abs(r.trace.energy[i - 1]));
                double rise = r.trace.energy[i] - r.trace.energy[i - 1];
                worst_rise = std::max(worst_rise, rise);
                if (rise > slack) ok = false;
            }
        }
        rep.line(ok, "energy descent", "max rise " + fmt_short(worst_rise));
    }

    {
        // Jacobian dichotomy: symmetric for LHE, asymmetric for the crafted
        // mixed-regime WC state.
        ModelParams p;
        Kernel2D w = gaussian2d(1.0, 4);
        double worst = 0.0;
        for (unsigned seed = 40; seed < 45; ++seed) {
            Image s = make_probe_state(4, p, seed);
            worst = std::max(worst, jacobian_probe(ProbeModel::LHE, s, w, p));
        }
        rep.line(worst <= 1e-12, "jacobian symmetry (LHE)", "max asym " + fmt_short(worst));

        Kernel2D w2;
        w2.n = 2;
        w2.w = {0.4, 0.3, 0.2, 0.1};
        Image mixed(2);
        mixed.v = {0.05, 0.5, 0.5, 0.5};
        double asym = jacobian_probe(ProbeModel::WC, mixed, w2, p);
        double expected = p.nu * p.alpha * 0.3;
        rep.line(asym >= 0.9 * expected, "jacobian asymmetry (WC witness)",
                 "asym " + fmt_short(asym) + " expected " + fmt_short(expected));
    }

    double secs = std::chrono::duration<double>(clock::now() - t0).count();
    std::printf("%s  (%.2f s)\n", rep.failures == 0 ? "all checks passed" : "CHECK FAILURES",
                secs);
    return rep.failures == 0 ? 0 : 4;
}

}  // namespace nf

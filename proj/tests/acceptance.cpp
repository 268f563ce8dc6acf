// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance suite: one test case per criterion, each printing
// a PASS/FAIL line with its measured runtime.

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "nfield/io.hpp"
#include "nfield/runner.hpp"
#include "ref/reference.hpp"

using namespace nf;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double secs() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(const char* name, bool ok, double secs, const std::string& detail) {
    std::printf("[%s] %s (%.1f s) %s\n", name, ok ? "PASS" : "FAIL", secs, detail.c_str());
    std::fflush(stdout);
}

Image random_image(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    Image img(n, 0.0, true);
    for (double& x : img.v) x = dist(rng);
    return img;
}

OrientationVolume random_volume(int n, int k, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    OrientationVolume vol(n, k);
    for (double& x : vol.v) x = dist(rng);
    return vol;
}

double rel_l2(const Image& a, const Image& b) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a.v[i] - b.v[i];
        num += d * d;
        den += b.v[i] * b.v[i];
    }
    return std::sqrt(num) / std::sqrt(std::max(den, 1e-300));
}

// Serialised outputs of one experiment, the unit of the determinism check.
struct Artifact {
    std::vector<uint8_t> png;
    std::string trace;
    std::string summary;
    ExperimentResult res;
};

Artifact run_cfg(const ExperimentConfig& cfg) {
    Artifact a;
    a.res = run_experiment(cfg);
    a.png = io::quantized_bytes(a.res.run.output);
    a.trace = trace_csv(a.res.run.trace);
    a.summary = summary_csv(a.res.rows);
    return a;
}

std::vector<ExperimentConfig>& pinned_configs() {
    static std::vector<ExperimentConfig> configs;
    return configs;
}
std::vector<Artifact>& pinned_artifacts() {
    static std::vector<Artifact> artifacts;
    return artifacts;
}

Artifact& remember(const ExperimentConfig& cfg) {
    pinned_configs().push_back(cfg);
    pinned_artifacts().push_back(run_cfg(cfg));
    return pinned_artifacts().back();
}

ExperimentConfig base_cfg(const std::string& stimulus, const std::string& model, int n,
                          double sigma_mu, double sigma_omega, double lambda) {
    ExperimentConfig cfg;
    cfg.stimulus = stimulus;
    cfg.model = model;
    cfg.n = n;
    cfg.orientations = 12;
    cfg.params.sigma_mu = sigma_mu;
    cfg.params.sigma_omega = sigma_omega;
    cfg.params.lambda = lambda;
    return cfg;
}

bool row_agrees(const ExperimentResult& res, const std::string& a) {
    for (const auto& row : res.rows)
        if (row.kind == "compare" && row.a == a) return row.agree && row.value > 1e-4;
    return false;
}

}  // namespace

TEST_CASE("criterion 1: reconstruction") {
    Timer t;
    double worst = 0.0;
    CakeFilterBank bank = build_cake_bank(64, 12, 4);
    for (unsigned seed = 1; seed <= 20; ++seed) {
        Image f = random_image(64, seed);
        worst = std::max(worst, rel_l2(project(lift(f, bank)), f));
    }
    for (const auto& name : stimulus_names()) {
        Stimulus s = make_stimulus(name, 64);
        worst = std::max(worst, rel_l2(project(lift(s.image, bank)), s.image));
    }
    bool ok = worst <= 1e-10 && t.secs() < 5.0;
    report("criterion 1", ok, t.secs(), "max rel err " + std::to_string(worst));
    CHECK(worst <= 1e-10);
    CHECK(t.secs() < 5.0);
}

TEST_CASE("criterion 2: oracle equivalence") {
    Timer t;
    Kernel3D w3 = gaussian3d(2.0, 1.0, 8, 4);
    double worst_int = 0.0;
    for (unsigned seed = 1; seed <= 10; ++seed) {
        OrientationVolume f = random_volume(8, 4, seed);
        OrientationVolume fast = interaction_fast(f, w3, 5.0, 11);
        OrientationVolume naive = interaction_naive(f, w3, 5.0);
        for (size_t i = 0; i < f.size(); ++i)
            worst_int = std::max(worst_int, std::abs(fast.v[i] - naive.v[i]));
    }

    double worst_conv = 0.0;
    {
        Image f = random_image(16, 33);
        Kernel2D w = gaussian2d(2.5, 16);
        Image a = conv2_periodic(f, w);
        Image b = ref::conv2_direct(f, w);
        for (size_t i = 0; i < f.size(); ++i)
            worst_conv = std::max(worst_conv, std::abs(a.v[i] - b.v[i]));
        OrientationVolume g = random_volume(8, 4, 34);
        OrientationVolume c = conv3_periodic(g, w3);
        OrientationVolume d = ref::conv3_direct(g, w3);
        for (size_t i = 0; i < g.size(); ++i)
            worst_conv = std::max(worst_conv, std::abs(c.v[i] - d.v[i]));
    }

    bool ok = worst_int <= 5e-2 && worst_conv <= 1e-10 && t.secs() < 10.0;
    report("criterion 2", ok, t.secs(),
           "interaction err " + std::to_string(worst_int) + ", conv err " +
               std::to_string(worst_conv));
    CHECK(worst_int <= 5e-2);
    CHECK(worst_conv <= 1e-10);
    CHECK(t.secs() < 10.0);
}

TEST_CASE("criterion 3: energy descent on all stimuli") {
    Timer t;
    bool monotone = true, converged = true;
    double worst_rise = 0.0;
    for (const auto& name : stimulus_names()) {
        for (const char* model : {"lhe2d", "lhe3d"}) {
            ExperimentConfig cfg = base_cfg(name, model, 64, 3.0, 8.0, 0.5);
            ExperimentResult res = run_experiment(cfg);
            const auto& e = res.run.trace.energy;
            REQUIRE(!e.empty());
            for (size_t i = 1; i < e.size(); ++i) {
                double slack = 1e-12 * std::max(1.0, std::abs(e[i - 1]));
                worst_rise = std::max(worst_rise, e[i] - e[i - 1]);
                if (e[i] > e[i - 1] + slack) monotone = false;
            }
            if (!res.run.trace.converged || res.run.trace.iterations > 2000)
                converged = false;
        }
    }
    bool ok = monotone && converged && t.secs() < 120.0;
    report("criterion 3", ok, t.secs(), "max energy rise " + std::to_string(worst_rise));
    CHECK(monotone);
    CHECK(converged);
    CHECK(t.secs() < 120.0);
}

TEST_CASE("criterion 4: Jacobian dichotomy") {
    Timer t;
    ModelParams p;
    Kernel2D w = gaussian2d(1.0, 4);
    double worst_lhe = 0.0;
    for (unsigned seed = 500; seed < 550; ++seed) {
        Image s = make_probe_state(4, p, seed);
        worst_lhe = std::max(worst_lhe, jacobian_probe(ProbeModel::LHE, s, w, p));
    }

    Kernel2D w2;
    w2.n = 2;
    w2.w = {0.4, 0.3, 0.2, 0.1};
    Image mixed(2);
    mixed.v = {0.05, 0.5, 0.5, 0.5};
    double asym = jacobian_probe(ProbeModel::WC, mixed, w2, p);
    double expected = p.nu * p.alpha * 0.3;

    // finite differences at a shared probe state
    double worst_fd = 0.0;
    {
        const double step = 1e-6;
        Image s = make_probe_state(4, p, 777);
        for (auto model : {ProbeModel::LHE, ProbeModel::WC}) {
            auto jac = rhs_jacobian(model, s, w, p);
            auto rhs_at = [&](const Image& state) {
                Image out(4);
                for (int r = 0; r < 4; ++r)
                    for (int c = 0; c < 4; ++c) {
                        double inter = 0.0;
                        for (int rp = 0; rp < 4; ++rp)
                            for (int cp = 0; cp < 4; ++cp) {
                                double arg = model == ProbeModel::LHE
                                                 ? state.at(r, c) - state.at(rp, cp)
                                                 : state.at(rp, cp);
                                inter += w.at((r - rp + 4) % 4, (c - cp + 4) % 4) *
                                         sigmoid(arg, p.alpha);
                            }
                        out.at(r, c) = -p.beta() * state.at(r, c) + p.nu * inter;
                    }
                return out;
            };
            for (size_t j = 0; j < s.size(); ++j) {
                Image plus = s, minus = s;
                plus.v[j] += step;
                minus.v[j] -= step;
                Image fp = rhs_at(plus), fm = rhs_at(minus);
                for (size_t i = 0; i < s.size(); ++i) {
                    double fd = (fp.v[i] - fm.v[i]) / (2.0 * step);
                    worst_fd = std::max(worst_fd, std::abs(fd - jac[i * s.size() + j]));
                }
            }
        }
    }

    bool ok = worst_lhe <= 1e-12 && asym >= 0.9 * expected && worst_fd <= 1e-5 &&
              t.secs() < 10.0;
    report("criterion 4", ok, t.secs(),
           "lhe asym " + std::to_string(worst_lhe) + ", wc asym " + std::to_string(asym) +
               ", fd err " + std::to_string(worst_fd));
    CHECK(worst_lhe <= 1e-12);
    CHECK(asym >= 0.9 * expected);
    CHECK(worst_fd <= 1e-5);
    CHECK(t.secs() < 10.0);
}

TEST_CASE("criterion 5: non-oriented illusions") {
    Timer t;
    bool all = true;
    std::string detail;
    for (const char* model : {"lhe2d", "lhe3d"}) {
        {
            Artifact& a = remember(base_cfg("white", model, 100, 3.0, 8.0, 0.5));
            bool ok = row_agrees(a.res, "left");
            all = all && ok;
            detail += std::string(model) + "/white=" + (ok ? "ok " : "BAD ");
        }
        {
            Artifact& a = remember(base_cfg("sbc", model, 100, 3.0, 8.0, 0.5));
            bool ok = row_agrees(a.res, "left");
            all = all && ok;
            detail += std::string(model) + "/sbc=" + (ok ? "ok " : "BAD ");
        }
        {
            Artifact& a = remember(base_cfg("luminance", model, 100, 3.0, 8.0, 0.5));
            bool ok = row_agrees(a.res, "bottom-left") && row_agrees(a.res, "top-left");
            all = all && ok;
            detail += std::string(model) + "/luminance=" + (ok ? "ok " : "BAD ");
        }
    }
    bool ok = all && t.secs() < 180.0;
    report("criterion 5", ok, t.secs(), detail);
    CHECK(all);
    CHECK(t.secs() < 180.0);
}

TEST_CASE("criterion 6: grating induction") {
    Timer t;
    ExperimentConfig pi2_3d = base_cfg("grating", "lhe3d", 100, 10.0, 5.0, 0.5);
    pi2_3d.theta = 0.5 * kPi;
    ExperimentConfig pi3_3d = pi2_3d;
    pi3_3d.theta = kPi / 3.0;
    ExperimentConfig pi2_2d = pi2_3d;
    pi2_2d.model = "lhe2d";

    Artifact& a2 = remember(pi2_3d);
    Artifact& a3 = remember(pi3_3d);
    Artifact& a2d = remember(pi2_2d);

    int cells = 0, counterphase_cells = 0;
    for (const auto& row : a2.res.rows) {
        if (row.kind != "counterphase") continue;
        ++cells;
        counterphase_cells += row.agree ? 1 : 0;
    }
    bool cp_ok = cells > 0 && counterphase_cells == cells;
    double amp2 = a2.res.amplitude.value_or(0.0);
    double amp3 = a3.res.amplitude.value_or(0.0);
    double amp2d = a2d.res.amplitude.value_or(0.0);
    bool order_ok = amp2 > amp3 && amp3 > 0.0 && amp2d < amp3;

    bool ok = cp_ok && order_ok && t.secs() < 180.0;
    report("criterion 6", ok, t.secs(),
           "counterphase " + std::to_string(counterphase_cells) + "/" + std::to_string(cells) +
               ", amp(pi/2)=" + std::to_string(amp2) + ", amp(pi/3)=" + std::to_string(amp3) +
               ", amp2d=" + std::to_string(amp2d));
    CHECK(cp_ok);
    CHECK(order_ok);
    CHECK(t.secs() < 180.0);
}

TEST_CASE("criterion 7: Poggendorff completion") {
    Timer t;
    ExperimentConfig lhe = base_cfg("poggendorff", "lhe3d", 100, 3.0, 10.0, 0.5);
    ExperimentConfig wc = lhe;
    wc.model = "wc3d";

    Artifact& al = remember(lhe);
    Artifact& aw = remember(wc);

    REQUIRE(al.res.offset.has_value());
    REQUIRE(aw.res.offset.has_value());
    bool lhe_ok = al.res.offset->completed && al.res.offset->offset_px < 0.0;
    double lhe_mag = std::abs(al.res.offset->offset_px);
    bool wc_ok = !aw.res.offset->completed ||
                 std::abs(aw.res.offset->offset_px) < 0.5 * lhe_mag;

    bool ok = lhe_ok && wc_ok && t.secs() < 120.0;
    report("criterion 7", ok, t.secs(),
           "lhe offset " + std::to_string(al.res.offset->offset_px) + ", wc " +
               (aw.res.offset->completed ? std::to_string(aw.res.offset->offset_px)
                                         : std::string("no-completion")));
    CHECK(lhe_ok);
    CHECK(wc_ok);
    CHECK(t.secs() < 120.0);
}

TEST_CASE("criterion 8: interaction-width threshold sweep") {
    Timer t;
    const double values[] = {5.0, 6.0, 7.0, 10.0};
    std::vector<OffsetResult> offsets;
    for (double v : values) {
        ExperimentConfig cfg = base_cfg("poggendorff", "lhe3d", 100, 2.0, v, 0.8);
        Artifact& a = remember(cfg);
        REQUIRE(a.res.offset.has_value());
        offsets.push_back(*a.res.offset);
    }

    bool first_geometric = !offsets[0].completed || std::abs(offsets[0].offset_px) < 1.0;
    bool rest_perceptual = true;
    for (size_t i = 1; i < offsets.size(); ++i)
        rest_perceptual = rest_perceptual && offsets[i].completed && offsets[i].offset_px < 0.0;
    bool monotone = true;
    for (size_t i = 2; i < offsets.size(); ++i)
        monotone = monotone &&
                   std::abs(offsets[i].offset_px) >= std::abs(offsets[i - 1].offset_px) - 1e-9;

    std::string detail;
    for (size_t i = 0; i < offsets.size(); ++i)
        detail += "s" + std::to_string(static_cast<int>(values[i])) + "=" +
                  (offsets[i].completed ? std::to_string(offsets[i].offset_px)
                                        : std::string("none")) +
                  " ";
    bool ok = first_geometric && rest_perceptual && monotone && t.secs() < 240.0;
    report("criterion 8", ok, t.secs(), detail);
    CHECK(first_geometric);
    CHECK(rest_perceptual);
    CHECK(monotone);
    CHECK(t.secs() < 240.0);
}

TEST_CASE("criterion 9: determinism of criteria 5-8") {
    Timer t;
    REQUIRE(!pinned_configs().empty());
    bool identical = true;
    for (size_t i = 0; i < pinned_configs().size(); ++i) {
        Artifact again = run_cfg(pinned_configs()[i]);
        const Artifact& first = pinned_artifacts()[i];
        if (again.png != first.png || again.trace != first.trace ||
            again.summary != first.summary)
            identical = false;
    }
    report("criterion 9", identical, t.secs(),
           std::to_string(pinned_configs().size()) + " experiments repeated");
    CHECK(identical);
}

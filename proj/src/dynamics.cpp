// SPDX-License-Identifier: Apache-2.0
#include "nfield/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace nf {

void ModelParams::validate() const {
    if (!(alpha > 1.0)) throw std::invalid_argument("ModelParams: alpha must exceed 1");
    if (!(dt > 0.0)) throw std::invalid_argument("ModelParams: dt must be positive");
    if (!(tau > 0.0)) throw std::invalid_argument("ModelParams: tau must be positive");
    if (!(sigma_mu > 0.0) || !(sigma_omega > 0.0) || !(sigma_orient > 0.0))
        throw std::invalid_argument("ModelParams: kernel widths must be positive");
    if (max_iters < 1) throw std::invalid_argument("ModelParams: max_iters must be positive");
    if (poly_degree < 3 || poly_degree % 2 == 0)
        throw std::invalid_argument("ModelParams: poly_degree must be odd and >= 3");
    if (beta_override && !(*beta_override > 0.0))
        throw std::invalid_argument("ModelParams: beta override must be positive");
}

bool is_lhe(Model m) { return m == Model::LHE2D || m == Model::LHE3D; }
bool is_3d(Model m) { return m == Model::WC3D || m == Model::LHE3D; }

std::string model_name(Model m) {
    switch (m) {
        case Model::WC2D: return "wc2d";
        case Model::WC3D: return "wc3d";
        case Model::LHE2D: return "lhe2d";
        case Model::LHE3D: return "lhe3d";
    }
    return "?";
}

std::optional<Model> parse_model(const std::string& name) {
    if (name == "wc2d") return Model::WC2D;
    if (name == "wc3d") return Model::WC3D;
    if (name == "lhe2d") return Model::LHE2D;
    if (name == "lhe3d") return Model::LHE3D;
    return std::nullopt;
}

Image external_drive(const Image& f0, const Image& mu, const ModelParams& p) {
    if (f0.n != mu.n) throw std::invalid_argument("external_drive: shape mismatch");
    Image h(f0.n);
    const double shift = 0.5 * (1.0 + p.lambda);
    for (size_t i = 0; i < h.size(); ++i) h.v[i] = mu.v[i] + p.lambda * f0.v[i] - shift;
    return h;
}

OrientationVolume external_drive(const OrientationVolume& f0_lift,
                                 const OrientationVolume& mu_lift, const ModelParams& p) {
    if (f0_lift.n != mu_lift.n || f0_lift.k != mu_lift.k)
        throw std::invalid_argument("external_drive: shape mismatch");
    OrientationVolume h(f0_lift.n, f0_lift.k);
    const double shift = 0.5 * (1.0 + p.lambda);
    for (size_t i = 0; i < h.size(); ++i)
        h.v[i] = mu_lift.v[i] + p.lambda * f0_lift.v[i] - shift;
    return h;
}

Image rhs_lhe2d(const Image& f, const Image& f0, const Image& mu, const ModelParams& p) {
    if (f.n != f0.n || f.n != mu.n) throw std::invalid_argument("rhs_lhe2d: shape mismatch");
    Kernel2D w = gaussian2d(p.sigma_omega, f.n);
    Image r = interaction_naive(f, w, p.alpha);
    Image out(f.n);
    const double beta = p.beta();
    for (size_t i = 0; i < out.size(); ++i)
        out.v[i] = -beta * f.v[i] + p.nu * r.v[i] + mu.v[i] + p.lambda * f0.v[i];
    return out;
}

OrientationVolume rhs_lhe3d(const OrientationVolume& f, const OrientationVolume& f0_lift,
                            const OrientationVolume& mu_lift, const ModelParams& p) {
    if (f.n != f0_lift.n || f.k != f0_lift.k || f.n != mu_lift.n || f.k != mu_lift.k)
        throw std::invalid_argument("rhs_lhe3d: shape mismatch");
    Kernel3D w = gaussian3d(p.sigma_omega, p.sigma_orient, f.n, f.k);
    OrientationVolume r = interaction_naive(f, w, p.alpha);
    OrientationVolume out(f.n, f.k);
    const double beta = p.beta();
    for (size_t i = 0; i < out.size(); ++i)
        out.v[i] = -beta * f.v[i] + p.nu * r.v[i] + mu_lift.v[i] + p.lambda * f0_lift.v[i];
    return out;
}

Image rhs_wc(const Image& a, const Image& h, const ModelParams& p) {
    if (a.n != h.n) throw std::invalid_argument("rhs_wc: shape mismatch");
    Kernel2D w = gaussian2d(p.sigma_omega, a.n);
    Image s(a.n);
    for (size_t i = 0; i < s.size(); ++i) s.v[i] = sigmoid(a.v[i], p.alpha);
    Image conv = conv2_periodic(s, w);
    Image out(a.n);
    const double beta = p.beta();
    for (size_t i = 0; i < out.size(); ++i)
        out.v[i] = -beta * a.v[i] + p.nu * conv.v[i] + h.v[i];
    return out;
}

OrientationVolume rhs_wc(const OrientationVolume& a, const OrientationVolume& h,
                         const ModelParams& p) {
    if (a.n != h.n || a.k != h.k) throw std::invalid_argument("rhs_wc: shape mismatch");
    Kernel3D w = gaussian3d(p.sigma_omega, p.sigma_orient, a.n, a.k);
    OrientationVolume s(a.n, a.k);
    for (size_t i = 0; i < s.size(); ++i) s.v[i] = sigmoid(a.v[i], p.alpha);
    OrientationVolume conv = conv3_periodic(s, w);
    OrientationVolume out(a.n, a.k);
    const double beta = p.beta();
    for (size_t i = 0; i < out.size(); ++i)
        out.v[i] = -beta * a.v[i] + p.nu * conv.v[i] + h.v[i];
    return out;
}

Image step_explicit(const Image& state, const Image& rhs_value, double dt) {
    if (state.n != rhs_value.n) throw std::invalid_argument("step_explicit: shape mismatch");
    Image out(state.n);
    for (size_t i = 0; i < out.size(); ++i) out.v[i] = state.v[i] + dt * rhs_value.v[i];
    return out;
}

OrientationVolume step_explicit(const OrientationVolume& state,
                                const OrientationVolume& rhs_value, double dt) {
    if (state.n != rhs_value.n || state.k != rhs_value.k)
        throw std::invalid_argument("step_explicit: shape mismatch");
    OrientationVolume out(state.n, state.k);
    for (size_t i = 0; i < out.size(); ++i) out.v[i] = state.v[i] + dt * rhs_value.v[i];
    return out;
}

namespace {

double quadratic_terms(const std::vector<double>& a, const std::vector<double>& h,
                       double beta) {
    double e1 = 0.0, e2 = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        e1 += a[i] * a[i];
        double d = a[i] - h[i];
        e2 += d * d;
    }
    return 0.5 * (beta - 1.0) * e1 + 0.5 * e2;
}

// sum_{p,q} W[p-q] Prim(a[p]-a[q]) by direct summation; per-site partials
// are reduced serially so the result does not depend on the thread count.
double pair_primitive_sum(const Image& a, const Kernel2D& w, double alpha) {
    const int n = a.n;
    std::vector<double> partial(a.size(), 0.0);
#pragma omp parallel for
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const double here = a.at(r, c);
            double acc = 0.0;
            for (int rp = 0; rp < n; ++rp)
                for (int cp = 0; cp < n; ++cp)
                    acc += w.at((r - rp + n) % n, (c - cp + n) % n) *
                           sigma_primitive(here - a.at(rp, cp), alpha);
            partial[static_cast<size_t>(r) * n + c] = acc;
        }
    double pair = 0.0;
    for (double x : partial) pair += x;
    return pair;
}

double pair_primitive_sum(const OrientationVolume& a, const Kernel3D& w, double alpha) {
    const int n = a.n, k = a.k;
    std::vector<double> partial(a.size(), 0.0);
#pragma omp parallel for
    for (int ch = 0; ch < k; ++ch)
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                const double here = a.at(ch, r, c);
                double acc = 0.0;
                for (int chp = 0; chp < k; ++chp)
                    for (int rp = 0; rp < n; ++rp)
                        for (int cp = 0; cp < n; ++cp)
                            acc += w.at((ch - chp + k) % k, (r - rp + n) % n,
                                        (c - cp + n) % n) *
                                   sigma_primitive(here - a.at(chp, rp, cp), alpha);
                partial[(static_cast<size_t>(ch) * n + r) * n + c] = acc;
            }
    double pair = 0.0;
    for (double x : partial) pair += x;
    return pair;
}

}  // namespace

double energy_lhe(const Image& a, const Image& h, const Kernel2D& w, const ModelParams& p) {
    if (a.n != h.n || a.n != w.n) throw std::invalid_argument("energy_lhe: shape mismatch");
    return quadratic_terms(a.v, h.v, p.beta()) -
           0.5 * p.nu * pair_primitive_sum(a, w, p.alpha);
}

double energy_lhe(const OrientationVolume& a, const OrientationVolume& h, const Kernel3D& w,
                  const ModelParams& p) {
    if (a.n != h.n || a.k != h.k || a.n != w.n || a.k != w.k)
        throw std::invalid_argument("energy_lhe: shape mismatch");
    return quadratic_terms(a.v, h.v, p.beta()) -
           0.5 * p.nu * pair_primitive_sum(a, w, p.alpha);
}

namespace {

// Internal solver machinery on flat arrays. The rhs functor fills `rhs`
// and, when `pair` is non-null, the pairwise primitive sum entering the
// LHE energy.
using RhsFn = std::function<void(const std::vector<double>&, std::vector<double>&, double*)>;

struct BoxExceeded {
    double needed;
};

double vec_mean(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    return m / static_cast<double>(v.size());
}

double vec_box(const std::vector<double>& v) {
    double mean = vec_mean(v);
    double b = 0.0;
    for (double x : v) b = std::max(b, std::abs(x - mean));
    return b;
}

double vec_max_abs(const std::vector<double>& v) {
    double b = 0.0;
    for (double x : v) b = std::max(b, std::abs(x));
    return b;
}

EvolutionTrace iterate(std::vector<double>& a, const std::vector<double>& h,
                       const RhsFn& rhs_fn, const ModelParams& p, bool lhe) {
    const size_t count = a.size();
    const double beta = p.beta();
    EvolutionTrace trace;
    trace.dt_final = p.dt;

    std::vector<double> rhs(count), a_next(count), rhs_next(count);
    double pair = 0.0;
    rhs_fn(a, rhs, lhe ? &pair : nullptr);
    double e_prev = 0.0;
    if (lhe) {
        e_prev = quadratic_terms(a, h, beta) - 0.5 * p.nu * pair;
        trace.energy.push_back(e_prev);
    }

    double dt = p.dt;
    for (int iter = 1; iter <= p.max_iters; ++iter) {
        double e_next = 0.0;
        for (;;) {
#pragma omp parallel for
            for (long long i = 0; i < static_cast<long long>(count); ++i)
                a_next[i] = a[i] + dt * rhs[i];
            double pair_next = 0.0;
            rhs_fn(a_next, rhs_next, lhe ? &pair_next : nullptr);
            if (!lhe) break;
            e_next = quadratic_terms(a_next, h, beta) - 0.5 * p.nu * pair_next;
            double slack = 1e-12 * std::max(1.0, std::abs(e_prev));
            if (e_next <= e_prev + slack || trace.dt_halvings >= 4) break;
            dt *= 0.5;
            ++trace.dt_halvings;
        }

        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < count; ++i) {
            double d = a_next[i] - a[i];
            num += d * d;
            double s = a[i] + 0.5;  // stimulus convention F = a + 1/2
            den += s * s;
        }
        num = std::sqrt(num);
        den = std::sqrt(den);
        double rel = den > 1e-30 ? num / den : num;

        a.swap(a_next);
        rhs.swap(rhs_next);
        trace.relative_update.push_back(rel);
        if (lhe) {
            trace.energy.push_back(e_next);
            e_prev = e_next;
        }
        trace.iterations = iter;
        trace.dt_final = dt;
        if (rel <= p.tau) {
            trace.converged = true;
            break;
        }
    }
    return trace;
}

struct SolveOutcome {
    std::vector<double> state;
    EvolutionTrace trace;
    double fit_error = 0.0;
    double fit_box = 0.0;
};

// Fit box covering the whole trajectory: the iteration contracts toward
// states bounded by (|h|_inf + |nu|)/beta, with a small allowance for the
// polynomial overshooting the unit saturation.
double initial_fit_box(const std::vector<double>& a0, const std::vector<double>& h,
                       const ModelParams& p) {
    double bound = (vec_max_abs(h) + 1.1 * std::abs(p.nu)) / p.beta();
    return 1.25 * std::max({vec_box(a0), bound, 0.05});
}

template <typename State, typename Kern>
SolveOutcome solve_lhe(const State& a0, const State& h, const Kern& w, const ModelParams& p,
                       InteractionMode mode) {
    SolveOutcome out;
    if (mode == InteractionMode::Naive) {
        RhsFn fn = [&](const std::vector<double>& av, std::vector<double>& rhs, double* pair) {
            State a = a0;  // reuse shape
            a.v = av;
            State r = interaction_naive(a, w, p.alpha);
            const double beta = p.beta();
            for (size_t i = 0; i < rhs.size(); ++i)
                rhs[i] = -beta * av[i] + p.nu * r.v[i] + h.v[i];
            if (pair) *pair = pair_primitive_sum(a, w, p.alpha);
        };
        std::vector<double> state = a0.v;
        out.trace = iterate(state, h.v, fn, p, true);
        out.state = std::move(state);
        return out;
    }

    double box = initial_fit_box(a0.v, h.v, p);
    for (;;) {
        OddPolynomial poly = fit_sigmoid_poly(p.alpha, p.poly_degree, 2.0 * box);
        FastInteraction plan(w, poly);
        RhsFn fn = [&](const std::vector<double>& av, std::vector<double>& rhs, double* pair) {
            double b = vec_box(av);
            if (b > box) throw BoxExceeded{b};
            State a = a0;
            a.v = av;
            State r = plan.apply(a, pair);
            const double beta = p.beta();
            for (size_t i = 0; i < rhs.size(); ++i)
                rhs[i] = -beta * av[i] + p.nu * r.v[i] + h.v[i];
        };
        try {
            std::vector<double> state = a0.v;
            out.trace = iterate(state, h.v, fn, p, true);
            out.state = std::move(state);
            out.fit_error = poly.fit_error;
            out.fit_box = box;
            return out;
        } catch (const BoxExceeded& e) {
            box = 1.5 * std::max(box, e.needed);
        }
    }
}

template <typename State, typename Kern>
SolveOutcome solve_wc(const State& a0, const State& h, const Kern& w, const ModelParams& p) {
    SolveOutcome out;
    RhsFn fn = [&](const std::vector<double>& av, std::vector<double>& rhs, double*) {
        State s = a0;
        for (size_t i = 0; i < av.size(); ++i) s.v[i] = sigmoid(av[i], p.alpha);
        State conv = [&] {
            if constexpr (std::is_same_v<State, Image>)
                return conv2_periodic(s, w);
            else
                return conv3_periodic(s, w);
        }();
        const double beta = p.beta();
        for (size_t i = 0; i < rhs.size(); ++i)
            rhs[i] = -beta * av[i] + p.nu * conv.v[i] + h.v[i];
    };
    std::vector<double> state = a0.v;
    out.trace = iterate(state, h.v, fn, p, false);
    out.state = std::move(state);
    return out;
}

}  // namespace

RunResult run(Model model, const Image& f0, const ModelParams& p, const RunOptions& opts) {
    p.validate();
    Image stimulus = f0;
    stimulus.nominal = true;
    stimulus.validate();
    Image mu = local_mean(stimulus, p.sigma_mu);

    RunResult result;
    if (!is_3d(model)) {
        Image h = external_drive(stimulus, mu, p);
        Image a0(f0.n);
        for (size_t i = 0; i < a0.size(); ++i) a0.v[i] = f0.v[i] - 0.5;
        Kernel2D w = gaussian2d(p.sigma_omega, f0.n);

        SolveOutcome sol = is_lhe(model) ? solve_lhe(a0, h, w, p, opts.interaction)
                                         : solve_wc(a0, h, w, p);
        result.trace = std::move(sol.trace);
        result.poly_fit_error = sol.fit_error;
        result.fit_box = sol.fit_box;
        result.output = Image(f0.n);
        for (size_t i = 0; i < sol.state.size(); ++i) result.output.v[i] = sol.state[i] + 0.5;
        result.display = AffineMap{1.0, 0.0};
        return result;
    }

    const int k = opts.orientations;
    CakeFilterBank bank = build_cake_bank(f0.n, k, opts.bw);
    OrientationVolume f0_lift = lift(stimulus, bank);
    OrientationVolume mu_lift = lift(mu, bank);
    OrientationVolume h = external_drive(f0_lift, mu_lift, p);
    OrientationVolume a0(f0.n, k);
    for (size_t i = 0; i < a0.size(); ++i) a0.v[i] = f0_lift.v[i] - 0.5;
    Kernel3D w = gaussian3d(p.sigma_omega, p.sigma_orient, f0.n, k);

    SolveOutcome sol = is_lhe(model) ? solve_lhe(a0, h, w, p, opts.interaction)
                                     : solve_wc(a0, h, w, p);
    result.trace = std::move(sol.trace);
    result.poly_fit_error = sol.fit_error;
    result.fit_box = sol.fit_box;

    OrientationVolume final_state(f0.n, k);
    final_state.v = std::move(sol.state);
    for (double& x : final_state.v) x += 0.5;  // back to the stimulus convention
    Image projected = project(final_state);

    double lo = projected.v[0], hi = projected.v[0];
    for (double x : projected.v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    result.output = Image(f0.n);
    if (hi - lo > 1e-15) {
        result.display = AffineMap{1.0 / (hi - lo), -lo / (hi - lo)};
        for (size_t i = 0; i < projected.size(); ++i)
            result.output.v[i] = (projected.v[i] - lo) / (hi - lo);
    } else {
        result.display = AffineMap{0.0, 0.5};
        for (double& x : result.output.v) x = 0.5;
    }
    result.output.nominal = true;
    return result;
}

namespace {

double sigmoid_slope(double x, double alpha, double margin) {
    if (std::abs(std::abs(x) - 1.0 / alpha) < margin)
        throw DegenerateState("state too close to a sigmoid kink");
    return std::abs(x) < 1.0 / alpha ? alpha : 0.0;
}

}  // namespace

std::vector<double> rhs_jacobian(ProbeModel model, const Image& state, const Kernel2D& w,
                                 const ModelParams& p, double kink_margin) {
    if (state.n != w.n) throw std::invalid_argument("rhs_jacobian: shape mismatch");
    const int n = state.n;
    const size_t count = state.size();
    if (count > 64) throw std::invalid_argument("rhs_jacobian: state too large for probe");

    const double beta = p.beta();
    std::vector<double> jac(count * count, 0.0);

    auto wrap = [n](int z, int q) {
        int rz = z / n, cz = z % n, rq = q / n, cq = q % n;
        return std::make_pair((rz - rq + n) % n, (cz - cq + n) % n);
    };

    if (model == ProbeModel::WC) {
        for (size_t z = 0; z < count; ++z)
            for (size_t q = 0; q < count; ++q) {
                auto [dr, dc] = wrap(static_cast<int>(z), static_cast<int>(q));
                double slope = sigmoid_slope(state.v[q], p.alpha, kink_margin);
                double val = p.nu * w.at(dr, dc) * slope;
                if (z == q) val -= beta;
                jac[z * count + q] = val;
            }
        return jac;
    }

    // LHE: d/da_q [ sum_q' W[z-q'] sig(a_z - a_q') ]
    for (size_t z = 0; z < count; ++z) {
        double diag = 0.0;
        for (size_t q = 0; q < count; ++q) {
            auto [dr, dc] = wrap(static_cast<int>(z), static_cast<int>(q));
            double slope = sigmoid_slope(state.v[z] - state.v[q], p.alpha, kink_margin);
            diag += w.at(dr, dc) * slope;
            jac[z * count + q] -= p.nu * w.at(dr, dc) * slope;
        }
        jac[z * count + z] += p.nu * diag - beta;
    }
    return jac;
}

double jacobian_probe(ProbeModel model, const Image& state, const Kernel2D& w,
                      const ModelParams& p, double kink_margin) {
    auto jac = rhs_jacobian(model, state, w, p, kink_margin);
    const size_t count = state.size();
    double asym = 0.0;
    for (size_t z = 0; z < count; ++z)
        for (size_t q = z + 1; q < count; ++q)
            asym = std::max(asym, std::abs(jac[z * count + q] - jac[q * count + z]));
    return asym;
}

Image make_probe_state(int n, const ModelParams& p, unsigned seed, double kink_margin) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-0.45, 0.45);
    const double kink = 1.0 / p.alpha;
    for (int attempt = 0; attempt < 256; ++attempt) {
        Image s(n);
        for (double& x : s.v) x = dist(rng);
        bool ok = true;
        for (size_t i = 0; i < s.size() && ok; ++i) {
            if (std::abs(std::abs(s.v[i]) - kink) < kink_margin) ok = false;
            for (size_t j = 0; j < s.size() && ok; ++j)
                if (i != j && std::abs(std::abs(s.v[i] - s.v[j]) - kink) < kink_margin)
                    ok = false;
        }
        if (ok) return s;
    }
    throw DegenerateState("make_probe_state: could not sample away from sigmoid kinks");
}

}  // namespace nf

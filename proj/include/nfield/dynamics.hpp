// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfield/grid.hpp"
#include "nfield/interaction.hpp"
#include "nfield/lifting.hpp"
#include "nfield/sigmoid.hpp"

namespace nf {

/// Scalars of the evolution models. beta is derived as 1 + lambda; the
/// raw override exists for plain Wilson-Cowan experiments that decouple
/// the decay rate from the fidelity weight.
struct ModelParams {
    double lambda = 0.5;
    double nu = 0.5;
    double alpha = 5.0;
    double sigma_mu = 3.0;
    double sigma_omega = 8.0;
    double sigma_orient = 1.0;
    double dt = 0.1;
    double tau = 1e-2;
    int max_iters = 2000;
    int poly_degree = 11;
    std::optional<double> beta_override;

    double beta() const { return beta_override ? *beta_override : 1.0 + lambda; }
    void validate() const;
};

enum class Model { WC2D, WC3D, LHE2D, LHE3D };

bool is_lhe(Model m);
bool is_3d(Model m);
std::string model_name(Model m);
std::optional<Model> parse_model(const std::string& name);

enum class InteractionMode { Fast, Naive };

struct EvolutionTrace {
    int iterations = 0;
    bool converged = false;
    std::vector<double> relative_update;  // one entry per iteration
    std::vector<double> energy;           // iterate energies, LHE models only (E_0 first)
    double dt_final = 0.0;
    int dt_halvings = 0;
};

/// Affine display map applied to a projected output: shown = scale*x + offset.
struct AffineMap {
    double scale = 1.0;
    double offset = 0.0;
};

struct RunResult {
    Image output;
    EvolutionTrace trace;
    AffineMap display;
    double poly_fit_error = 0.0;  // fast interaction path only
    double fit_box = 0.0;         // half-width B of the state box used for the fit
};

struct RunOptions {
    int orientations = 30;  // K, 3D models only
    int bw = 4;             // cake window order, 3D models only
    InteractionMode interaction = InteractionMode::Fast;
};

/// External drive h = mu + lambda*f0 - (1+lambda)/2, in the activation
/// convention a = f - 1/2 used internally by every model.
Image external_drive(const Image& f0, const Image& mu, const ModelParams& p);
OrientationVolume external_drive(const OrientationVolume& f0_lift,
                                 const OrientationVolume& mu_lift, const ModelParams& p);

/// Right-hand sides assembled with the exact sigmoid (reference form, in
/// the stimulus convention of the respective equations).
Image rhs_lhe2d(const Image& f, const Image& f0, const Image& mu, const ModelParams& p);
OrientationVolume rhs_lhe3d(const OrientationVolume& f, const OrientationVolume& f0_lift,
                            const OrientationVolume& mu_lift, const ModelParams& p);

/// Wilson-Cowan right-hand side: the sigmoid acts on the neighbour state
/// alone, so the interaction is the plain convolution W * sigmoid(state).
Image rhs_wc(const Image& a, const Image& h, const ModelParams& p);
OrientationVolume rhs_wc(const OrientationVolume& a, const OrientationVolume& h,
                         const ModelParams& p);

/// Forward Euler update; intermediate states are not clamped.
Image step_explicit(const Image& state, const Image& rhs_value, double dt);
OrientationVolume step_explicit(const OrientationVolume& state,
                                const OrientationVolume& rhs_value, double dt);

/// LHE energy with the exact piecewise primitive (activation convention):
///   E(a) = (beta-1)/2 |a|^2 + 1/2 |a-h|^2
///          - nu/2 sum_{p,q} W[p-q] Prim(a[p]-a[q]).
/// Quadratic in the grid size; the solver's fast path evaluates the same
/// functional with the polynomial primitive instead.
double energy_lhe(const Image& a, const Image& h, const Kernel2D& w, const ModelParams& p);
double energy_lhe(const OrientationVolume& a, const OrientationVolume& h, const Kernel3D& w,
                  const ModelParams& p);

/// Evolves a stimulus under the chosen model: assembles the drive,
/// lifts for 3D models, iterates explicit Euler with the relative-update
/// stopping rule, projects, and (3D) rescales the projection to [0,1],
/// recording the affine map used.
RunResult run(Model model, const Image& f0, const ModelParams& p, const RunOptions& opts = {});

/// Thrown when a probe state sits too close to the sigmoid kinks for the
/// piecewise derivative to be well defined.
struct DegenerateState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ProbeModel { WC, LHE };

/// Dense Jacobian of the discrete right-hand side at `state` (row-major,
/// size count^2), assembled analytically from the piecewise-linear sigmoid.
std::vector<double> rhs_jacobian(ProbeModel model, const Image& state, const Kernel2D& w,
                                 const ModelParams& p, double kink_margin = 1e-3);

/// Max-norm asymmetry |J - J^T| of the analytic Jacobian; zero (to round-off)
/// for the LHE form, generically positive for the WC form in mixed
/// saturation regimes.
double jacobian_probe(ProbeModel model, const Image& state, const Kernel2D& w,
                      const ModelParams& p, double kink_margin = 1e-3);

/// Random probe state away from the sigmoid kinks; resamples a bounded
/// number of times and throws DegenerateState if that fails.
Image make_probe_state(int n, const ModelParams& p, unsigned seed, double kink_margin = 1e-3);

}  // namespace nf

#ifndef LIYLAB_ESTIMATES_HPP
#define LIYLAB_ESTIMATES_HPP

#include <limits>
#include <string>
#include <vector>

#include "liylab/flow.hpp"
#include "liylab/solver.hpp"

namespace liylab {

// Li-Yau quantity, identity-chain residuals, gradient-estimate monitor and
// Harnack checker for f = log u along the flow.

struct LiYauParams {
    double alpha = 2.0;
    double p = 4.0;
    double q = 4.0;  // may be +infinity (1/q -> 0), the alpha = 1 limit
    double slack = 1.05;

    /// alpha >= 1, p,q > 0, |1/p + 1/q - 1/alpha| <= 1e-12.
    void validate() const;
    /// alpha = 1 runs the Lemma-mode degeneration (p = 1, q = inf gives the
    /// sharp classical n/(2t) comparison bound).
    bool lemma_mode() const { return alpha == 1.0; }
};

/// F = t (|grad f|^2 - alpha f_t - alpha R - alpha a f) from given fields.
/// Linear in the time label by construction.
ScalarField assemble_F(double t, const ScalarField& grad_sq,
                       const ScalarField& f_t, const ScalarField& f,
                       const ScalarField& R, double a, double alpha);

/// F at a snapshot (t > 0 required).
ScalarField compute_F(const SolutionHistory& hist, const LiYauParams& params,
                      int idx);

/// Max-norm residuals of the identity chain at one snapshot:
///   grad_evolution       (|grad f|^2)_t = -2 h(grad f, grad f) + 2 <grad f_t, grad f>
///   laplacian_evolution  (Lap f)_t = Lap(f_t) - 2 <h, Hess f> - 2 <div h, grad f> + <grad H, grad f>
///   bochner              Lap |grad f|^2 = 2 |Hess f|^2 + 2 <grad f, grad Lap f> + 2 Ric(grad f, grad f)
///   f_quantity           Lap F - F_t = assembled right-hand side (exact
///                        pre-inequality form; see assemble_identity_rhs)
struct IdentityResiduals {
    double t = 0.0;
    double grad_evolution = 0.0;
    double laplacian_evolution = 0.0;
    double bochner = 0.0;
    double f_quantity = 0.0;
    double max() const;
};

/// The exact equality the estimate machinery rests on, assembled from the
/// evolution identities and the Bochner formula:
///   Lap F - F_t = -F/t + a F - 2 <grad f, grad F>
///     + t [ 2 |Hess f|^2 - 2 alpha <h, Hess f> + 2 Ric(grad f, grad f)
///           - 2 (alpha-1) h(grad f, grad f) - (alpha-1) a |grad f|^2
///           - 2 (alpha-1) <grad f, grad R> - alpha Lap R
///           - 2 alpha <div h, grad f> + alpha <grad H, grad f> ]
/// (all contractions with g). The finite-difference left side is the
/// independent arbiter of this assembly.
ScalarField assemble_identity_rhs(const SolutionHistory& hist, int idx,
                                  double alpha, const ScalarField& F);

IdentityResiduals identity_residuals(const SolutionHistory& hist, int idx,
                                     double alpha = 2.0);

struct LiYauSample {
    double t = 0.0;
    double sup_lhs = 0.0;          // sup_x (|grad f|^2 - a f_t - a a f - a R)
    double classical_bound = 0.0;  // alpha n p / (2t) * (1 - a t)
    double calibrated_running = 0.0;
    double structure_value = 0.0;  // t * sup_lhs - alpha n p / 2 * (1 - a t)
};

struct LiYauMonitorResult {
    std::vector<LiYauSample> samples;
    double calibrated_C = -std::numeric_limits<double>::infinity();
    double structure_max = -std::numeric_limits<double>::infinity();
    double t_at_structure_max = 0.0;
    bool finite = true;
    bool stabilized = false;        // running max settles in the final 20%
    double stabilization_change = 0.0;
    bool attained_away_from_zero = false;
    bool bound_satisfied = true;    // rowwise sup <= classical bound * slack
    BoundConstants bounds_with_safety;  // measured bounds * 1.05, as context
};

/// Monitors start at t >= 5 * record spacing (startup finite-difference
/// noise); pass first_idx >= 1 to override.
LiYauMonitorResult liyau_monitor(const SolutionHistory& hist,
                                 const LiYauParams& params,
                                 const BoundConstants& bounds,
                                 int first_idx = -1);

struct HarnackQuery {
    std::string id;
    GridPoint x1, x2;
    double t1 = 0.0, t2 = 0.0;
    std::vector<GridPoint> path;  // from x2 to x1; filled from the geodesic
                                  // shortest path when empty
};

struct HarnackResult {
    double lhs = 0.0, rhs = 0.0;
    double path_length = 0.0;
    bool pass = false;
};

/// Corollary-style two-point inequality:
///   u(x1,t1) / u(x2,t2)^{e^{-a(t2-t1)}}
///     <= (t2/t1)^{alpha n} exp( alpha L^2 / (4(t2-t1)) + C12 (t2-t1) )
/// with L the metric length of the path at time t1 (constant-speed
/// parametrization). Degenerate query (x1 = x2, t1 = t2) gives LHS = RHS = 1.
HarnackResult harnack_check(const SolutionHistory& hist,
                            const LiYauParams& params, const HarnackQuery& q,
                            double C12);

}  // namespace liylab

#endif

#ifndef LIYLAB_FLOW_HPP
#define LIYLAB_FLOW_HPP

#include <span>
#include <vector>

#include "liylab/fields.hpp"
#include "liylab/generators.hpp"
#include "liylab/geometry.hpp"

namespace liylab {

// Metric evolution d/dt g = 2 h restricted to the conformal family
// (h = psi * g, so d/dt phi = psi). General symmetric h would leave the
// family and is rejected rather than projected.

enum class FlowKind { static_metric, ricci_surface, prescribed };

const char* flow_kind_name(FlowKind k);
FlowKind flow_kind_from_name(const std::string& name);

struct FlowSpec {
    FlowKind kind = FlowKind::static_metric;
    GeneratorSpec psi;  // conformal rate of the prescribed h = psi * g
};

/// Measured sup bounds over a space-time history, per the hypotheses
/// Ric >= -k1 g, -k2 g <= h <= k3 g, |nabla h| <= k4.
struct BoundConstants {
    double k1 = 0.0, k2 = 0.0, k3 = 0.0, k4 = 0.0;
    double sup_R = 0.0, sup_gradR = 0.0, sup_lapR = 0.0;
};

/// h = -Ric = -K g on surfaces; zero tensor in 1-D.
TensorField ricci_flow_tensor(const MetricField& m);

/// Extracts psi from h = psi * g. Throws UnsupportedTensorError when the
/// eigenvalues of h g^{-1} split by more than 1e-12 (relative).
ScalarField conformal_rate(const MetricField& m, const TensorField& h);

/// One step with h (hence psi) frozen over the step; exact for constant psi.
MetricField step_metric(const MetricField& m, const TensorField& h, double dt);

/// One RK4 step with the conformal rate re-evaluated at stage times/metrics.
MetricField advance_metric(const MetricField& m, const FlowSpec& spec, double t,
                           double dt);

/// Stability bound for curvature-driven stepping: 0.2 h_min^2 e^{2 min phi}.
double flow_cfl_bound(const MetricField& m);

struct FlowHistoryEntry {
    double t = 0.0;
    const MetricField* metric = nullptr;
    const TensorField* h = nullptr;
    const ScalarField* potential = nullptr;
};

/// Streaming accumulator for the measured bound constants; sups only ever
/// grow, which makes the monotonicity invariant structural.
class BoundsAccumulator {
  public:
    void add(const MetricField& m, const TensorField& h,
             const ScalarField& potential);
    const BoundConstants& current() const { return b_; }

  private:
    BoundConstants b_;
};

BoundConstants extract_bounds(std::span<const FlowHistoryEntry> history);

struct EquivalenceVerdict {
    bool pass = false;
    double margin = 0.0;       // min slack across both inequalities, <0 = fail
    double worst_ratio = 1.0;  // ratio farthest from 1
};

/// Checks pointwise e^{-2 k1 T} <= e^{2 (phi_t - phi_0)} <= e^{2 k2 T} with
/// tolerance factor (1 + 10 dt^4 + 1e-9). Ricci-type flows with measured
/// bounds -k1 g <= Ric <= k2 g.
EquivalenceVerdict metric_equivalence_check(const MetricField& g0,
                                            const MetricField& gt, double k1,
                                            double k2, double T, double dt);

}  // namespace liylab

#endif

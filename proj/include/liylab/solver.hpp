#ifndef LIYLAB_SOLVER_HPP
#define LIYLAB_SOLVER_HPP

#include <vector>

#include "liylab/fields.hpp"
#include "liylab/flow.hpp"
#include "liylab/generators.hpp"

namespace liylab {

// Positivity-preserving RK4 solver for
//     (d/dt - Lap_g(t) + R) u = -a u log u
// coupled to the conformal metric flow d/dt g = 2 h.

constexpr double kUFloor = 1e-12;   // positivity floor for u
constexpr double kPhiGuard = 10.0;  // stop before conformal blowup

struct PDEProblem {
    ManifoldGrid grid;
    ScalarField phi0;
    FlowSpec flow;
    double a = 0.0;
    GeneratorSpec potential;  // R(x,t), evaluated at stage times
    ScalarField u0;
    double t_end = 0.0;
    double dt = 0.0;
    int record_stride = 1;  // snapshot every record_stride-th step

    /// Combined explicit stability bound 0.2 h_min^2 e^{2 min phi0} / (2 d).
    double cfl_bound() const;
    /// Throws std::invalid_argument with a named constraint on violation.
    void validate() const;
    int step_count() const;
};

/// One RK4 step of u' = Lap_g u - R u - a u log u with the metric and R
/// frozen. Output clamped at the positivity floor; clamp count via pointer.
ScalarField step_u(const ScalarField& u, const MetricField& m,
                   const ScalarField& R, double a, double dt,
                   long* clamp_count = nullptr);

/// Immutable record of a coupled run. Snapshot fields are stored; all
/// derived quantities (f = log u, |grad f|^2, Lap f, f_t, h, R) are
/// recomputed on demand from the snapshots.
class SolutionHistory {
  public:
    SolutionHistory() = default;

    int size() const { return static_cast<int>(times_.size()); }
    double time(int idx) const { return times_.at(idx); }
    const std::vector<double>& times() const { return times_; }
    double record_dt() const { return record_dt_; }
    double solver_dt() const { return solver_dt_; }
    double a_coefficient() const { return a_; }
    const GeneratorSpec& potential_spec() const { return potential_; }
    const FlowSpec& flow_spec() const { return flow_; }
    const ManifoldGrid& grid() const { return grid_; }
    long clamp_count() const { return clamp_count_; }
    int solver_steps() const { return solver_steps_; }
    double max_abs_phi() const { return max_abs_phi_; }

    const ScalarField& u(int idx) const { return u_.at(idx); }
    const MetricField& metric(int idx) const {
        return static_metric_ ? metrics_.front() : metrics_.at(idx);
    }

    ScalarField f(int idx) const;             // log u
    ScalarField f_t(int idx) const;           // 4th-order time differences
    ScalarField grad_norm_sq_f(int idx) const;
    ScalarField lap_f(int idx) const;
    ScalarField potential_field(int idx) const;
    ScalarField psi_field(int idx) const;     // conformal rate of h at idx
    TensorField h_field(int idx) const;       // flow tensor at idx

    /// Index whose time matches t to 1e-9 absolute/relative; domain_error
    /// when t is off the snapshot lattice.
    int index_of_time(double t) const;

    /// 4th-order time derivative of an arbitrary per-snapshot field series
    /// (5-point stencils, one-sided at the record edges). The getter maps a
    /// snapshot index to the field.
    template <typename Getter>
    ScalarField time_derivative(Getter&& get, int idx) const {
        if (!uniform_times_)
            throw std::domain_error(
                "SolutionHistory: time derivatives need uniformly spaced "
                "snapshots");
        const int n = size();
        if (n < 5)
            throw std::domain_error(
                "SolutionHistory: time derivatives need at least 5 snapshots");
        if (idx < 0 || idx >= n)
            throw std::domain_error("snapshot index out of range");
        static const double c_center[5] = {1, -8, 0, 8, -1};
        static const double c_edge0[5] = {-25, 48, -36, 16, -3};
        static const double c_edge1[5] = {-3, -10, 18, -6, 1};
        static const double c_edge_n[5] = {3, -16, 36, -48, 25};
        static const double c_edge_n1[5] = {-1, 6, -18, 10, 3};
        int base;
        const double* c;
        if (idx >= 2 && idx <= n - 3) {
            base = idx - 2;
            c = c_center;
        } else if (idx == 0) {
            base = 0;
            c = c_edge0;
        } else if (idx == 1) {
            base = 0;
            c = c_edge1;
        } else {
            base = n - 5;
            c = (idx == n - 1) ? c_edge_n : c_edge_n1;
        }
        const double scale = 1.0 / (12.0 * record_dt_);
        ScalarField out(grid_, 0.0);
        for (int k = 0; k < 5; ++k) {
            if (c[k] == 0.0) continue;
            const ScalarField fk = get(base + k);
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] += c[k] * scale * fk[i];
        }
        return out;
    }

    /// Assemble a history from externally computed snapshots (oracle
    /// solutions, tests). Times must be strictly increasing; f_t is only
    /// available when they are uniformly spaced.
    static SolutionHistory from_snapshots(const ManifoldGrid& grid,
                                          std::vector<double> times,
                                          std::vector<ScalarField> u,
                                          std::vector<MetricField> metrics,
                                          double a = 0.0,
                                          GeneratorSpec potential = {},
                                          FlowSpec flow = {});

    friend SolutionHistory solve(const PDEProblem& p);

  private:
    ManifoldGrid grid_;
    double a_ = 0.0;
    GeneratorSpec potential_;
    FlowSpec flow_;
    double solver_dt_ = 0.0;
    double record_dt_ = 0.0;
    bool uniform_times_ = true;
    bool static_metric_ = true;
    std::vector<double> times_;
    std::vector<ScalarField> u_;
    std::vector<MetricField> metrics_;
    long clamp_count_ = 0;
    int solver_steps_ = 0;
    double max_abs_phi_ = 0.0;
};

/// Co-evolves metric and u; snapshots at t = 0 and every record_stride-th
/// step. Throws BlowupError naming the first non-finite point and time.
SolutionHistory solve(const PDEProblem& p);

}  // namespace liylab

#endif

#include "liylab/solver.hpp"

#include <algorithm>
#include <cmath>

#include "liylab/geometry.hpp"

namespace liylab {

namespace {

/// du/dt = Lap_g u - R u - a u log u. Stage inputs are floored inside the
/// log so a transient dip below the floor cannot emit NaN.
ScalarField pde_rhs(const ScalarField& u, const MetricField& m,
                    const ScalarField& R, double a) {
    ScalarField out = laplace_beltrami(m, u);
    const std::size_t n = u.size();
    if (a == 0.0) {
        for (std::size_t i = 0; i < n; ++i) out[i] -= R[i] * u[i];
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double uc = std::max(u[i], kUFloor);
            out[i] -= R[i] * u[i] + a * uc * std::log(uc);
        }
    }
    return out;
}

void check_stage(const ScalarField& s, double t, const char* what) {
    if (s.all_finite()) return;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!std::isfinite(s[i])) {
            const GridPoint p = s.grid().point(i);
            throw BlowupError(std::string(what) +
                                  ": non-finite value at grid point (" +
                                  std::to_string(p.ix) + "," +
                                  std::to_string(p.iy) + "), t = " +
                                  std::to_string(t),
                              t, p.ix, p.iy);
        }
    }
}

long clamp_floor(ScalarField& u) {
    long clamped = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < kUFloor) {
            u[i] = kUFloor;
            ++clamped;
        }
    }
    return clamped;
}

ScalarField flow_rate_for(const FlowSpec& spec, const ScalarField& phi,
                          double t) {
    switch (spec.kind) {
        case FlowKind::static_metric:
            return ScalarField(phi.grid(), 0.0);
        case FlowKind::ricci_surface: {
            if (phi.grid().dim() == 1) return ScalarField(phi.grid(), 0.0);
            ScalarField r = flat_laplacian(phi);
            for (std::size_t i = 0; i < r.size(); ++i)
                r[i] *= std::exp(-2.0 * phi[i]);
            return r;
        }
        case FlowKind::prescribed:
            return evaluate(spec.psi, phi.grid(), t);
    }
    return ScalarField(phi.grid(), 0.0);
}

}  // namespace

double PDEProblem::cfl_bound() const {
    const double h = grid.min_spacing();
    return 0.2 * h * h * std::exp(2.0 * phi0.min()) / (2.0 * grid.dim());
}

int PDEProblem::step_count() const {
    return static_cast<int>(std::llround(t_end / dt));
}

void PDEProblem::validate() const {
    if (phi0.grid() != grid || u0.grid() != grid)
        throw GridMismatchError("PDEProblem: phi0/u0 not on the problem grid");
    if (!phi0.all_finite())
        throw DataError("PDEProblem: phi0 must be finite");
    if (!u0.all_finite())
        throw DataError("PDEProblem: u0 must be finite");
    if (u0.min() < kUFloor)
        throw std::invalid_argument(
            "PDEProblem: u0 must be >= the positivity floor " +
            std::to_string(kUFloor) + " everywhere (min u0 = " +
            std::to_string(u0.min()) + ")");
    if (!(dt > 0.0) || !(t_end > 0.0))
        throw std::invalid_argument("PDEProblem: dt and t_end must be positive");
    const double bound = cfl_bound();
    if (dt > bound * (1.0 + 1e-12))
        throw std::invalid_argument(
            "PDEProblem: dt = " + std::to_string(dt) +
            " violates the stability bound 0.2 h^2 e^{2 min phi} / (2 dim) = " +
            std::to_string(bound));
    const double steps = t_end / dt;
    if (std::abs(steps - std::llround(steps)) > 1e-9 * std::max(1.0, steps))
        throw std::invalid_argument(
            "PDEProblem: t_end must be an integer multiple of dt (t_end/dt = " +
            std::to_string(steps) + ")");
    if (record_stride < 1)
        throw std::invalid_argument("PDEProblem: record_stride must be >= 1");
    if (std::llround(steps) % record_stride != 0)
        throw std::invalid_argument(
            "PDEProblem: step count " + std::to_string(std::llround(steps)) +
            " must be divisible by record_stride " +
            std::to_string(record_stride));
}

ScalarField step_u(const ScalarField& u, const MetricField& m,
                   const ScalarField& R, double a, double dt,
                   long* clamp_count) {
    require_same_grid(u.grid(), m.grid(), "step_u");
    require_same_grid(u.grid(), R.grid(), "step_u");
    const std::size_t n = u.size();
    const ScalarField k1 = pde_rhs(u, m, R, a);
    check_stage(k1, 0.0, "step_u");
    ScalarField s(u.grid());
    for (std::size_t i = 0; i < n; ++i) s[i] = u[i] + 0.5 * dt * k1[i];
    const ScalarField k2 = pde_rhs(s, m, R, a);
    check_stage(k2, 0.0, "step_u");
    for (std::size_t i = 0; i < n; ++i) s[i] = u[i] + 0.5 * dt * k2[i];
    const ScalarField k3 = pde_rhs(s, m, R, a);
    check_stage(k3, 0.0, "step_u");
    for (std::size_t i = 0; i < n; ++i) s[i] = u[i] + dt * k3[i];
    const ScalarField k4 = pde_rhs(s, m, R, a);
    check_stage(k4, 0.0, "step_u");
    ScalarField out = u;
    for (std::size_t i = 0; i < n; ++i)
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    const long c = clamp_floor(out);
    if (clamp_count) *clamp_count += c;
    return out;
}

SolutionHistory solve(const PDEProblem& p) {
    p.validate();
    const int nsteps = p.step_count();
    const std::size_t n = p.grid.point_count();
    const bool static_flow = p.flow.kind == FlowKind::static_metric ||
                             (p.flow.kind == FlowKind::ricci_surface &&
                              p.grid.dim() == 1);

    SolutionHistory hist;
    hist.grid_ = p.grid;
    hist.a_ = p.a;
    hist.potential_ = p.potential;
    hist.flow_ = p.flow;
    hist.solver_dt_ = p.dt;
    hist.record_dt_ = p.dt * p.record_stride;
    hist.static_metric_ = static_flow;

    ScalarField u = p.u0;
    ScalarField phi = p.phi0;
    MetricField m(phi);
    hist.times_.push_back(0.0);
    hist.u_.push_back(u);
    hist.metrics_.push_back(m);
    hist.max_abs_phi_ = phi.max_abs();

    const double dt = p.dt;
    ScalarField stage_u(p.grid), stage_phi(p.grid);
    for (int step = 0; step < nsteps; ++step) {
        const double t = step * dt;
        // joint RK4 over (phi, u); metric stages stay consistent with u stages
        const ScalarField R1 = evaluate(p.potential, p.grid, t);
        const ScalarField ku1 = pde_rhs(u, m, R1, p.a);
        check_stage(ku1, t, "solve");
        const ScalarField kp1 = flow_rate_for(p.flow, phi, t);

        for (std::size_t i = 0; i < n; ++i) {
            stage_u[i] = u[i] + 0.5 * dt * ku1[i];
            stage_phi[i] = phi[i] + 0.5 * dt * kp1[i];
        }
        MetricField m2 = static_flow ? m : MetricField(stage_phi);
        const ScalarField R2 = evaluate(p.potential, p.grid, t + 0.5 * dt);
        const ScalarField ku2 = pde_rhs(stage_u, m2, R2, p.a);
        check_stage(ku2, t + 0.5 * dt, "solve");
        const ScalarField kp2 = flow_rate_for(p.flow, stage_phi, t + 0.5 * dt);

        for (std::size_t i = 0; i < n; ++i) {
            stage_u[i] = u[i] + 0.5 * dt * ku2[i];
            stage_phi[i] = phi[i] + 0.5 * dt * kp2[i];
        }
        MetricField m3 = static_flow ? m : MetricField(stage_phi);
        const ScalarField ku3 = pde_rhs(stage_u, m3, R2, p.a);
        check_stage(ku3, t + 0.5 * dt, "solve");
        const ScalarField kp3 = flow_rate_for(p.flow, stage_phi, t + 0.5 * dt);

        for (std::size_t i = 0; i < n; ++i) {
            stage_u[i] = u[i] + dt * ku3[i];
            stage_phi[i] = phi[i] + dt * kp3[i];
        }
        MetricField m4 = static_flow ? m : MetricField(stage_phi);
        const ScalarField R4 = evaluate(p.potential, p.grid, t + dt);
        const ScalarField ku4 = pde_rhs(stage_u, m4, R4, p.a);
        check_stage(ku4, t + dt, "solve");
        const ScalarField kp4 = flow_rate_for(p.flow, stage_phi, t + dt);

        for (std::size_t i = 0; i < n; ++i) {
            u[i] += dt / 6.0 * (ku1[i] + 2.0 * ku2[i] + 2.0 * ku3[i] + ku4[i]);
            phi[i] += dt / 6.0 * (kp1[i] + 2.0 * kp2[i] + 2.0 * kp3[i] + kp4[i]);
        }
        hist.clamp_count_ += clamp_floor(u);
        check_stage(u, t + dt, "solve");
        if (!static_flow) {
            check_stage(phi, t + dt, "solve(metric)");
            const double sup_phi = phi.max_abs();
            hist.max_abs_phi_ = std::max(hist.max_abs_phi_, sup_phi);
            if (sup_phi > kPhiGuard)
                throw BlowupError(
                    "solve: conformal factor guard sup|phi| <= " +
                        std::to_string(kPhiGuard) + " tripped at t = " +
                        std::to_string(t + dt),
                    t + dt, 0, 0);
            m = MetricField(phi);
        }
        if ((step + 1) % p.record_stride == 0) {
            hist.times_.push_back((step + 1) * dt);
            hist.u_.push_back(u);
            if (!static_flow) hist.metrics_.push_back(m);
        }
    }
    hist.solver_steps_ = nsteps;
    return hist;
}

// ---------------------------------------------------------------------------
// SolutionHistory
// ---------------------------------------------------------------------------

ScalarField SolutionHistory::f(int idx) const {
    const ScalarField& ui = u_.at(idx);
    ScalarField out(grid_);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::log(std::max(ui[i], kUFloor));
    return out;
}

ScalarField SolutionHistory::f_t(int idx) const {
    return time_derivative([this](int k) { return f(k); }, idx);
}

ScalarField SolutionHistory::grad_norm_sq_f(int idx) const {
    return grad_norm_sq(metric(idx), f(idx));
}

ScalarField SolutionHistory::lap_f(int idx) const {
    return laplace_beltrami(metric(idx), f(idx));
}

ScalarField SolutionHistory::potential_field(int idx) const {
    return evaluate(potential_, grid_, times_.at(idx));
}

ScalarField SolutionHistory::psi_field(int idx) const {
    switch (flow_.kind) {
        case FlowKind::static_metric:
            return ScalarField(grid_, 0.0);
        case FlowKind::ricci_surface: {
            ScalarField k = gauss_curvature(metric(idx));
            for (std::size_t i = 0; i < k.size(); ++i) k[i] = -k[i];
            return k;
        }
        case FlowKind::prescribed:
            return evaluate(flow_.psi, grid_, times_.at(idx));
    }
    return ScalarField(grid_, 0.0);
}

TensorField SolutionHistory::h_field(int idx) const {
    const ScalarField psi = psi_field(idx);
    const MetricField& m = metric(idx);
    TensorField out(grid_);
    const auto& conf = m.conf();
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double v = psi[i] * conf[i];
        out.comp(TensorField::XX)[i] = v;
        if (grid_.dim() == 2) out.comp(TensorField::YY)[i] = v;
    }
    return out;
}

int SolutionHistory::index_of_time(double t) const {
    for (int i = 0; i < size(); ++i)
        if (std::abs(times_[i] - t) <= 1e-9 * std::max(1.0, std::abs(t)))
            return i;
    throw std::domain_error("SolutionHistory: t = " + std::to_string(t) +
                            " is not on the snapshot lattice");
}

SolutionHistory SolutionHistory::from_snapshots(
    const ManifoldGrid& grid, std::vector<double> times,
    std::vector<ScalarField> u, std::vector<MetricField> metrics, double a,
    GeneratorSpec potential, FlowSpec flow) {
    if (times.empty() || times.size() != u.size())
        throw std::invalid_argument("from_snapshots: times/u size mismatch");
    if (metrics.empty())
        throw std::invalid_argument("from_snapshots: at least one metric needed");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument(
                "from_snapshots: times must be strictly increasing");
    SolutionHistory h;
    h.grid_ = grid;
    h.a_ = a;
    h.potential_ = potential;
    h.flow_ = flow;
    h.static_metric_ = metrics.size() == 1;
    if (!h.static_metric_ && metrics.size() != times.size())
        throw std::invalid_argument(
            "from_snapshots: need one metric or one per snapshot");
    h.times_ = std::move(times);
    h.u_ = std::move(u);
    h.metrics_ = std::move(metrics);
    if (h.times_.size() >= 2) {
        const double d0 = h.times_[1] - h.times_[0];
        h.record_dt_ = d0;
        h.solver_dt_ = d0;
        for (std::size_t i = 1; i + 1 < h.times_.size(); ++i)
            if (std::abs((h.times_[i + 1] - h.times_[i]) - d0) > 1e-12)
                h.uniform_times_ = false;
    }
    return h;
}

}  // namespace liylab

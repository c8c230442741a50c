#include "liylab/estimates.hpp"

#include <algorithm>
#include <cmath>

#include "liylab/geometry.hpp"

namespace liylab {

void LiYauParams::validate() const {
    if (!(alpha >= 1.0))
        throw std::invalid_argument("LiYauParams: alpha must be >= 1, got " +
                                    std::to_string(alpha));
    if (!(p > 0.0))
        throw std::invalid_argument("LiYauParams: p must be > 0");
    if (!(q > 0.0))  // +inf passes, by design
        throw std::invalid_argument("LiYauParams: q must be > 0");
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    const double gap = std::abs(1.0 / p + inv_q - 1.0 / alpha);
    if (gap > 1e-12)
        throw std::invalid_argument(
            "LiYauParams: 1/p + 1/q must equal 1/alpha to 1e-12 (|1/p + 1/q - "
            "1/alpha| = " +
            std::to_string(gap) + ")");
    if (!(slack >= 1.0))
        throw std::invalid_argument("LiYauParams: slack must be >= 1");
}

ScalarField assemble_F(double t, const ScalarField& grad_sq,
                       const ScalarField& f_t, const ScalarField& f,
                       const ScalarField& R, double a, double alpha) {
    ScalarField out(grad_sq.grid());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = t * (grad_sq[i] - alpha * f_t[i] - alpha * R[i] -
                      alpha * a * f[i]);
    return out;
}

ScalarField compute_F(const SolutionHistory& hist, const LiYauParams& params,
                      int idx) {
    params.validate();
    const double t = hist.time(idx);
    if (!(t > 0.0))
        throw std::domain_error("compute_F: needs a snapshot with t > 0");
    return assemble_F(t, hist.grad_norm_sq_f(idx), hist.f_t(idx), hist.f(idx),
                      hist.potential_field(idx), hist.a_coefficient(),
                      params.alpha);
}

double IdentityResiduals::max() const {
    return std::max(std::max(grad_evolution, laplacian_evolution),
                    std::max(bochner, f_quantity));
}

namespace {

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

ScalarField assemble_identity_rhs(const SolutionHistory& hist, int idx,
                                  double alpha, const ScalarField& F) {
    const double t = hist.time(idx);
    const double a = hist.a_coefficient();
    const MetricField& m = hist.metric(idx);
    const ScalarField f = hist.f(idx);
    const ScalarField R = hist.potential_field(idx);
    const TensorField h = hist.h_field(idx);

    const VectorField grad_f = gradient(m, f);          // contravariant
    const ScalarField grad_sq = hist.grad_norm_sq_f(idx);
    const TensorField hess = hessian(m, f);
    const ScalarField hess_sq = tensor_norm_sq(m, hess);
    const ScalarField h_dot_hess = tensor_dot(m, h, hess);
    const ScalarField ric_ff = tensor_apply(ricci(m), grad_f);
    const ScalarField h_ff = tensor_apply(h, grad_f);
    const ScalarField grad_R_dot = form_dot(flat_gradient(R), grad_f);
    const ScalarField lap_R = laplace_beltrami(m, R);
    const ScalarField divh_dot = form_dot(div_tensor(m, h), grad_f);
    const ScalarField gradH_dot =
        form_dot(flat_gradient(trace(m, h)), grad_f);
    const ScalarField gradF_dot = form_dot(flat_gradient(F), grad_f);

    ScalarField rhs(hist.grid());
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        const double spatial =
            2.0 * hess_sq[i] - 2.0 * alpha * h_dot_hess[i] + 2.0 * ric_ff[i] -
            2.0 * (alpha - 1.0) * h_ff[i] - (alpha - 1.0) * a * grad_sq[i] -
            2.0 * (alpha - 1.0) * grad_R_dot[i] - alpha * lap_R[i] -
            2.0 * alpha * divh_dot[i] + alpha * gradH_dot[i];
        rhs[i] = -F[i] / t + a * F[i] - 2.0 * gradF_dot[i] + t * spatial;
    }
    return rhs;
}

IdentityResiduals identity_residuals(const SolutionHistory& hist, int idx,
                                     double alpha) {
    const int n = hist.size();
    if (idx < 2 || idx > n - 3)
        throw std::domain_error(
            "identity_residuals: snapshot must be interior in time "
            "(index in [2, size-3])");
    const double t = hist.time(idx);
    if (!(t > 0.0))
        throw std::domain_error("identity_residuals: needs t > 0");

    IdentityResiduals res;
    res.t = t;
    const MetricField& m = hist.metric(idx);
    const ScalarField f = hist.f(idx);
    const ScalarField ft = hist.f_t(idx);
    const VectorField grad_f = gradient(m, f);
    const TensorField h = hist.h_field(idx);

    // --- (i) evolution of |grad f|^2 ---
    {
        ScalarField lhs = hist.time_derivative(
            [&](int k) { return hist.grad_norm_sq_f(k); }, idx);
        const ScalarField h_ff = tensor_apply(h, grad_f);
        const ScalarField gft_dot = form_dot(flat_gradient(ft), grad_f);
        ScalarField rhs(hist.grid());
        for (std::size_t i = 0; i < rhs.size(); ++i)
            rhs[i] = -2.0 * h_ff[i] + 2.0 * gft_dot[i];
        res.grad_evolution = max_abs_diff(lhs, rhs);
    }

    // --- (ii) evolution of Lap f ---
    {
        ScalarField lhs = hist.time_derivative(
            [&](int k) { return hist.lap_f(k); }, idx);
        const ScalarField lap_ft = laplace_beltrami(m, ft);
        const ScalarField h_dot_hess = tensor_dot(m, h, hessian(m, f));
        const ScalarField divh_dot = form_dot(div_tensor(m, h), grad_f);
        const ScalarField gradH_dot =
            form_dot(flat_gradient(trace(m, h)), grad_f);
        ScalarField rhs(hist.grid());
        for (std::size_t i = 0; i < rhs.size(); ++i)
            rhs[i] = lap_ft[i] - 2.0 * h_dot_hess[i] - 2.0 * divh_dot[i] +
                     gradH_dot[i];
        res.laplacian_evolution = max_abs_diff(lhs, rhs);
    }

    // --- (iii) Bochner formula ---
    {
        const ScalarField grad_sq = hist.grad_norm_sq_f(idx);
        const ScalarField lhs = laplace_beltrami(m, grad_sq);
        const ScalarField hess_sq = tensor_norm_sq(m, hessian(m, f));
        const ScalarField glap_dot =
            form_dot(flat_gradient(hist.lap_f(idx)), grad_f);
        const ScalarField ric_ff = tensor_apply(ricci(m), grad_f);
        ScalarField rhs(hist.grid());
        for (std::size_t i = 0; i < rhs.size(); ++i)
            rhs[i] = 2.0 * hess_sq[i] + 2.0 * glap_dot[i] + 2.0 * ric_ff[i];
        res.bochner = max_abs_diff(lhs, rhs);
    }

    // --- (iv) the exact pre-inequality identity for F ---
    {
        LiYauParams pr;
        pr.alpha = alpha;
        pr.p = 2.0 * alpha;
        pr.q = 2.0 * alpha;
        const ScalarField F = compute_F(hist, pr, idx);
        const ScalarField lapF = laplace_beltrami(m, F);
        const ScalarField Ft = hist.time_derivative(
            [&](int k) {
                // F(0) = 0 by the t-prefactor; compute_F itself needs t > 0
                if (!(hist.time(k) > 0.0)) return ScalarField(hist.grid(), 0.0);
                return compute_F(hist, pr, k);
            },
            idx);
        const ScalarField rhs = assemble_identity_rhs(hist, idx, alpha, F);
        ScalarField lhs(hist.grid());
        for (std::size_t i = 0; i < lhs.size(); ++i)
            lhs[i] = lapF[i] - Ft[i];
        res.f_quantity = max_abs_diff(lhs, rhs);
    }
    return res;
}

LiYauMonitorResult liyau_monitor(const SolutionHistory& hist,
                                 const LiYauParams& params,
                                 const BoundConstants& bounds, int first_idx) {
    params.validate();
    LiYauMonitorResult out;
    out.bounds_with_safety = bounds;
    out.bounds_with_safety.k1 *= 1.05;
    out.bounds_with_safety.k2 *= 1.05;
    out.bounds_with_safety.k3 *= 1.05;
    out.bounds_with_safety.k4 *= 1.05;

    const double a = hist.a_coefficient();
    const double n_dim = hist.grid().dim();
    const double anp2 = params.alpha * n_dim * params.p / 2.0;
    const double t_min = 5.0 * hist.record_dt();
    int start = first_idx;
    if (start < 0) {
        start = 1;
        while (start < hist.size() && hist.time(start) < t_min) ++start;
    }
    start = std::max(start, 1);

    double running_C = -std::numeric_limits<double>::infinity();
    double running_S = -std::numeric_limits<double>::infinity();
    for (int idx = start; idx < hist.size(); ++idx) {
        const double t = hist.time(idx);
        const ScalarField grad_sq = hist.grad_norm_sq_f(idx);
        const ScalarField ft = hist.f_t(idx);
        const ScalarField f = hist.f(idx);
        const ScalarField R = hist.potential_field(idx);
        double sup = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < grad_sq.size(); ++i)
            sup = std::max(sup, grad_sq[i] - params.alpha * ft[i] -
                                    params.alpha * a * f[i] -
                                    params.alpha * R[i]);
        LiYauSample s;
        s.t = t;
        s.sup_lhs = sup;
        s.classical_bound = anp2 / t * (1.0 - a * t);
        s.structure_value = t * sup - anp2 * (1.0 - a * t);
        running_C = std::max(running_C, sup - s.classical_bound);
        s.calibrated_running = running_C;
        if (s.structure_value > running_S) {
            running_S = s.structure_value;
            out.t_at_structure_max = t;
        }
        if (!std::isfinite(sup)) out.finite = false;
        const bool row_ok = s.classical_bound >= 0.0
                                ? sup <= s.classical_bound * params.slack
                                : sup <= s.classical_bound / params.slack;
        if (!row_ok) out.bound_satisfied = false;
        out.samples.push_back(s);
    }
    out.calibrated_C = running_C;
    out.structure_max = running_S;

    // stabilization: the running max of the structure series must move by
    // < 1% over the final 20% of the monitored window
    if (out.samples.size() >= 5) {
        const std::size_t cut =
            out.samples.size() - 1 - (out.samples.size() - 1) / 5;
        double m80 = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i <= cut; ++i)
            m80 = std::max(m80, out.samples[i].structure_value);
        const double change = std::abs(out.structure_max - m80) /
                              std::max(1e-12, std::abs(m80));
        out.stabilization_change = change;
        out.stabilized = out.finite && change < 0.01;
    }
    out.attained_away_from_zero =
        !out.samples.empty() && out.t_at_structure_max > out.samples.front().t;
    return out;
}

HarnackResult harnack_check(const SolutionHistory& hist,
                            const LiYauParams& params, const HarnackQuery& q,
                            double C12) {
    params.validate();
    if (C12 < 0.0)
        throw std::invalid_argument("harnack_check: C12 must be >= 0");
    if (!(q.t1 > 0.0) || q.t1 > q.t2)
        throw std::domain_error("harnack_check: need 0 < t1 <= t2");
    const int i1 = hist.index_of_time(q.t1);
    const int i2 = hist.index_of_time(q.t2);
    const ManifoldGrid& g = hist.grid();

    std::vector<GridPoint> path = q.path;
    if (path.empty()) {
        // default: geodesic shortest path, stored x2 -> x1
        GeodesicPath gp = geodesic_path(hist.metric(i1), q.x2, q.x1);
        path = std::move(gp.points);
    }
    if (!(path.front() == GridPoint{ManifoldGrid::wrap(q.x2.ix, g.nx()),
                                    g.dim() == 2
                                        ? ManifoldGrid::wrap(q.x2.iy, g.ny())
                                        : 0}) ||
        !(path.back() == GridPoint{ManifoldGrid::wrap(q.x1.ix, g.nx()),
                                   g.dim() == 2
                                       ? ManifoldGrid::wrap(q.x1.iy, g.ny())
                                       : 0}))
        throw std::invalid_argument(
            "harnack_check: path endpoints must be x2 ... x1");

    // metric length of the polyline in the metric at t1
    const MetricField& m = hist.metric(i1);
    const ScalarField& phi = m.phi();
    double length = 0.0;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        int dx = ManifoldGrid::wrap(path[k + 1].ix - path[k].ix, g.nx());
        if (dx > g.nx() / 2) dx -= g.nx();
        int dy = 0;
        if (g.dim() == 2) {
            dy = ManifoldGrid::wrap(path[k + 1].iy - path[k].iy, g.ny());
            if (dy > g.ny() / 2) dy -= g.ny();
        }
        if (std::abs(dx) > 1 || std::abs(dy) > 1)
            throw std::invalid_argument(
                "harnack_check: consecutive path points must be grid-adjacent");
        const double flat = std::sqrt(dx * dx * g.spacing(0) * g.spacing(0) +
                                      dy * dy * g.spacing(1) * g.spacing(1));
        const std::size_t pa = g.index(path[k].ix, path[k].iy);
        const std::size_t pb = g.index(path[k + 1].ix, path[k + 1].iy);
        length += flat * std::exp(0.5 * (phi[pa] + phi[pb]));
    }

    HarnackResult r;
    r.path_length = length;
    const double a = hist.a_coefficient();
    const double dt = q.t2 - q.t1;
    const double u1 = hist.u(i1)[g.index(q.x1.ix, q.x1.iy)];
    const double u2 = hist.u(i2)[g.index(q.x2.ix, q.x2.iy)];
    r.lhs = u1 / std::pow(u2, std::exp(-a * dt));
    if (dt > 0.0) {
        r.rhs = std::pow(q.t2 / q.t1, params.alpha * g.dim()) *
                std::exp(params.alpha * length * length / (4.0 * dt) + C12 * dt);
    } else {
        r.rhs = length == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    r.pass = r.lhs <= r.rhs * (1.0 + 1e-6);
    return r;
}

}  // namespace liylab

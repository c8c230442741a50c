#include "liylab/flow.hpp"

#include <algorithm>
#include <cmath>

namespace liylab {

const char* flow_kind_name(FlowKind k) {
    switch (k) {
        case FlowKind::static_metric: return "static";
        case FlowKind::ricci_surface: return "ricci_surface";
        case FlowKind::prescribed: return "prescribed";
    }
    return "?";
}

FlowKind flow_kind_from_name(const std::string& name) {
    if (name == "static") return FlowKind::static_metric;
    if (name == "ricci_surface") return FlowKind::ricci_surface;
    if (name == "prescribed") return FlowKind::prescribed;
    throw std::invalid_argument("unknown flow kind '" + name +
                                "' (known: static, ricci_surface, prescribed)");
}

TensorField ricci_flow_tensor(const MetricField& m) {
    TensorField out(m.grid());
    if (m.grid().dim() == 1) return out;
    const ScalarField k = gauss_curvature(m);
    const auto& conf = m.conf();
    for (std::size_t i = 0; i < k.size(); ++i) {
        const double v = -k[i] * conf[i];
        out.comp(TensorField::XX)[i] = v;
        out.comp(TensorField::YY)[i] = v;
    }
    return out;
}

ScalarField conformal_rate(const MetricField& m, const TensorField& h) {
    require_same_grid(m.grid(), h.grid(), "conformal_rate");
    const auto& inv = m.inv_conf();
    ScalarField psi(m.grid());
    if (m.grid().dim() == 1) {
        for (std::size_t i = 0; i < psi.size(); ++i)
            psi[i] = inv[i] * h.comp(TensorField::XX)[i];
        return psi;
    }
    double scale = 1.0, worst = 0.0;
    std::size_t worst_at = 0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double axx = inv[i] * h.comp(TensorField::XX)[i];
        const double axy = inv[i] * h.comp(TensorField::XY)[i];
        const double ayy = inv[i] * h.comp(TensorField::YY)[i];
        const double spread =
            std::sqrt((axx - ayy) * (axx - ayy) + 4.0 * axy * axy);
        scale = std::max(scale, std::abs(axx) + std::abs(ayy));
        if (spread > worst) {
            worst = spread;
            worst_at = i;
        }
        psi[i] = 0.5 * (axx + ayy);
    }
    if (worst > 1e-12 * scale) {
        const GridPoint p = m.grid().point(worst_at);
        throw UnsupportedTensorError(
            "step_metric: h is not conformal (eigenvalue anisotropy " +
            std::to_string(worst / scale) + " at point (" + std::to_string(p.ix) +
            "," + std::to_string(p.iy) +
            "); only h = psi * g is supported by the conformal family)");
    }
    return psi;
}

MetricField step_metric(const MetricField& m, const TensorField& h, double dt) {
    const ScalarField psi = conformal_rate(m, h);
    ScalarField phi = m.phi();
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] += dt * psi[i];
    return MetricField(std::move(phi));
}

namespace {

ScalarField flow_rate(const FlowSpec& spec, const ScalarField& phi, double t) {
    switch (spec.kind) {
        case FlowKind::static_metric:
            return ScalarField(phi.grid(), 0.0);
        case FlowKind::ricci_surface: {
            // psi = -K = e^{-2 phi} lap0 phi (zero in 1-D)
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

MetricField advance_metric(const MetricField& m, const FlowSpec& spec, double t,
                           double dt) {
    const ScalarField& phi = m.phi();
    const std::size_t n = phi.size();
    const ScalarField k1 = flow_rate(spec, phi, t);
    ScalarField s(phi.grid());
    for (std::size_t i = 0; i < n; ++i) s[i] = phi[i] + 0.5 * dt * k1[i];
    const ScalarField k2 = flow_rate(spec, s, t + 0.5 * dt);
    for (std::size_t i = 0; i < n; ++i) s[i] = phi[i] + 0.5 * dt * k2[i];
    const ScalarField k3 = flow_rate(spec, s, t + 0.5 * dt);
    for (std::size_t i = 0; i < n; ++i) s[i] = phi[i] + dt * k3[i];
    const ScalarField k4 = flow_rate(spec, s, t + dt);
    ScalarField out = phi;
    for (std::size_t i = 0; i < n; ++i)
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return MetricField(std::move(out));
}

double flow_cfl_bound(const MetricField& m) {
    const double h = m.grid().min_spacing();
    return 0.2 * h * h * std::exp(2.0 * m.phi().min());
}

void BoundsAccumulator::add(const MetricField& m, const TensorField& h,
                            const ScalarField& potential) {
    const ManifoldGrid& g = m.grid();
    // k1: Ric = K g in 2-D, so Ric >= -k1 g iff K >= -k1; zero in 1-D.
    if (g.dim() == 2) {
        const ScalarField k = gauss_curvature(m);
        b_.k1 = std::max(b_.k1, -k.min());
    }
    // k2/k3: eigenvalue range of h g^{-1}.
    const auto& inv = m.inv_conf();
    if (g.dim() == 1) {
        for (std::size_t i = 0; i < inv.size(); ++i) {
            const double lam = inv[i] * h.comp(TensorField::XX)[i];
            b_.k2 = std::max(b_.k2, -lam);
            b_.k3 = std::max(b_.k3, lam);
        }
    } else {
        for (std::size_t i = 0; i < inv.size(); ++i) {
            const double axx = inv[i] * h.comp(TensorField::XX)[i];
            const double axy = inv[i] * h.comp(TensorField::XY)[i];
            const double ayy = inv[i] * h.comp(TensorField::YY)[i];
            const double mid = 0.5 * (axx + ayy);
            const double rad =
                std::sqrt(0.25 * (axx - ayy) * (axx - ayy) + axy * axy);
            b_.k2 = std::max(b_.k2, -(mid - rad));
            b_.k3 = std::max(b_.k3, mid + rad);
        }
    }
    // k4: sup |nabla h|_g.
    const ScalarField nh2 = tensor_grad_norm_sq(m, h);
    b_.k4 = std::max(b_.k4, std::sqrt(std::max(0.0, nh2.max())));
    // potential bounds
    b_.sup_R = std::max(b_.sup_R, potential.max_abs());
    const ScalarField gr = grad_norm_sq(m, potential);
    b_.sup_gradR = std::max(b_.sup_gradR, std::sqrt(std::max(0.0, gr.max())));
    b_.sup_lapR =
        std::max(b_.sup_lapR, laplace_beltrami(m, potential).max_abs());
}

BoundConstants extract_bounds(std::span<const FlowHistoryEntry> history) {
    if (history.empty())
        throw std::invalid_argument("extract_bounds: empty history");
    BoundsAccumulator acc;
    for (const auto& e : history) acc.add(*e.metric, *e.h, *e.potential);
    return acc.current();
}

EquivalenceVerdict metric_equivalence_check(const MetricField& g0,
                                            const MetricField& gt, double k1,
                                            double k2, double T, double dt) {
    require_same_grid(g0.grid(), gt.grid(), "metric_equivalence_check");
    const double tol = 1.0 + 10.0 * dt * dt * dt * dt + 1e-9;
    const double lower = std::exp(-2.0 * k1 * T);
    const double upper = std::exp(2.0 * k2 * T);
    EquivalenceVerdict v;
    v.pass = true;
    v.margin = std::numeric_limits<double>::infinity();
    v.worst_ratio = 1.0;
    const ScalarField& p0 = g0.phi();
    const ScalarField& pt = gt.phi();
    for (std::size_t i = 0; i < p0.size(); ++i) {
        const double r = std::exp(2.0 * (pt[i] - p0[i]));
        const double slack = std::min(upper * tol - r, r - lower / tol);
        if (slack < v.margin) v.margin = slack;
        if (std::abs(std::log(r)) > std::abs(std::log(v.worst_ratio)))
            v.worst_ratio = r;
    }
    v.pass = v.margin >= 0.0;
    return v;
}

}  // namespace liylab

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "liylab/flow.hpp"
#include "oracles.hpp"

using namespace liylab;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

TensorField scaled_metric_tensor(const MetricField& m, double c) {
    TensorField h(m.grid());
    for (std::size_t i = 0; i < m.grid().point_count(); ++i) {
        h.comp(TensorField::XX)[i] = c * m.conf()[i];
        if (m.grid().dim() == 2) h.comp(TensorField::YY)[i] = c * m.conf()[i];
    }
    return h;
}

double analytic_neg_k_max(double x, double amp) {
    // -K for phi = amp sin(2 pi x): -amp (2 pi)^2 sin e^{-2 amp sin}
    const double s = std::sin(kTwoPi * x);
    return -amp * kTwoPi * kTwoPi * s * std::exp(-2.0 * amp * s);
}

}  // namespace

TEST_CASE("step_metric: zero flow is bit-exact, constant flow is exact") {
    const ManifoldGrid g = ManifoldGrid::torus(16, 16);
    std::mt19937 rng(2);
    const MetricField m(oracle::random_smooth_field(g, rng, 0.3));

    const MetricField same = step_metric(m, TensorField(g), 0.01);
    for (std::size_t i = 0; i < g.point_count(); ++i)
        CHECK(same.phi()[i] == m.phi()[i]);  // bit-for-bit

    // h = c g: phi advances by c dt exactly, any number of steps
    const double c = 0.8;
    MetricField cur = m;
    for (int s = 0; s < 10; ++s)
        cur = step_metric(cur, scaled_metric_tensor(cur, c), 0.01);
    for (std::size_t i = 0; i < g.point_count(); ++i)
        CHECK(cur.phi()[i] ==
              doctest::Approx(m.phi()[i] + c * 0.1).epsilon(1e-13));
}

TEST_CASE("step_metric rejects non-conformal h") {
    const ManifoldGrid g = ManifoldGrid::torus(16, 16);
    const MetricField m = MetricField::flat(g);
    TensorField h(g);
    for (std::size_t i = 0; i < g.point_count(); ++i) {
        h.comp(TensorField::XX)[i] = 1.0;
        h.comp(TensorField::YY)[i] = -1.0;  // traceless, leaves the family
    }
    CHECK_THROWS_AS(step_metric(m, h, 0.01), UnsupportedTensorError);
    // tiny anisotropy below the 1e-12 gate is accepted
    for (std::size_t i = 0; i < g.point_count(); ++i) {
        h.comp(TensorField::XX)[i] = 1.0;
        h.comp(TensorField::YY)[i] = 1.0 + 1e-14;
    }
    CHECK_NOTHROW(step_metric(m, h, 0.01));
}

TEST_CASE("ricci_flow_tensor: flat fixed point, sign, analytic cross-check") {
    const ManifoldGrid g = ManifoldGrid::torus(48, 48);
    CHECK(ricci_flow_tensor(MetricField::flat(g)).max_abs() <= 1e-12);
    CHECK(ricci_flow_tensor(MetricField::flat(ManifoldGrid::circle(32)))
              .max_abs() == 0.0);

    ScalarField phi(g);
    for (int iy = 0; iy < 48; ++iy)
        for (int ix = 0; ix < 48; ++ix)
            phi[g.index(ix, iy)] = 0.1 * std::sin(kTwoPi * g.coord(0, ix));
    const MetricField m(phi);
    const TensorField h = ricci_flow_tensor(m);
    const ScalarField k = gauss_curvature(m);
    for (std::size_t i = 0; i < g.point_count(); ++i) {
        CHECK(h.comp(TensorField::XX)[i] ==
              doctest::Approx(-k[i] * m.conf()[i]).epsilon(1e-12));
        // where K > 0 the eigenvalue of h g^{-1} is negative (shrinking)
        if (k[i] > 1e-6)
            CHECK(h.comp(TensorField::XX)[i] * m.inv_conf()[i] < 0.0);
    }
    // trace H = -2K
    const ScalarField tr = trace(m, h);
    for (std::size_t i = 0; i < g.point_count(); ++i)
        CHECK(tr[i] == doctest::Approx(-2.0 * k[i]).epsilon(1e-11));

    // flat torus under ricci_surface stays put
    FlowSpec spec;
    spec.kind = FlowKind::ricci_surface;
    const MetricField flat = MetricField::flat(g);
    const MetricField stepped = advance_metric(flat, spec, 0.0, 1e-4);
    CHECK(stepped.phi().max_abs() <= 1e-14);
}

TEST_CASE("advance_metric: prescribed constant rate is RK4-exact") {
    const ManifoldGrid g = ManifoldGrid::circle(64);
    std::mt19937 rng(4);
    const MetricField m0(oracle::random_smooth_field(g, rng, 0.2));
    FlowSpec spec;
    spec.kind = FlowKind::prescribed;
    spec.psi = constant_gen(0.35);
    MetricField m = m0;
    double t = 0.0;
    const double dt = 1e-3;
    for (int s = 0; s < 200; ++s, t += dt) m = advance_metric(m, spec, t, dt);
    for (std::size_t i = 0; i < g.point_count(); ++i)
        CHECK(std::abs(m.phi()[i] - m0.phi()[i] - 0.35 * 0.2) <= 1e-12);
}

TEST_CASE("extract_bounds: static flat, constant conformal flow, analytic k1") {
    const ManifoldGrid g = ManifoldGrid::torus(32, 32);
    const MetricField flat = MetricField::flat(g);
    const ScalarField zero(g, 0.0);
    const TensorField zt(g);

    std::vector<FlowHistoryEntry> hist;
    hist.push_back({0.0, &flat, &zt, &zero});
    hist.push_back({0.1, &flat, &zt, &zero});
    const BoundConstants b0 = extract_bounds(hist);
    CHECK(b0.k1 == 0.0);
    CHECK(b0.k2 == 0.0);
    CHECK(b0.k3 == 0.0);
    CHECK(b0.k4 == 0.0);
    CHECK(b0.sup_R == 0.0);
    CHECK(b0.sup_gradR == 0.0);
    CHECK(b0.sup_lapR == 0.0);

    CHECK_THROWS_AS(extract_bounds(std::span<const FlowHistoryEntry>{}),
                    std::invalid_argument);

    // h = c g with c > 0 on a flat metric: k2 = 0, k3 = c, k4 = 0 exactly
    const double c = 0.7;
    const TensorField cg = scaled_metric_tensor(flat, c);
    std::vector<FlowHistoryEntry> hist2;
    hist2.push_back({0.0, &flat, &cg, &zero});
    const BoundConstants b1 = extract_bounds(hist2);
    CHECK(b1.k2 == 0.0);
    CHECK(b1.k3 == doctest::Approx(c).epsilon(1e-14));
    CHECK(b1.k4 <= 1e-12);

    // phi = 0.1 sin(2 pi x): k1 equals the dense-sampled analytic extremum
    const ManifoldGrid g64 = ManifoldGrid::torus(64, 64);
    ScalarField phi(g64);
    for (int iy = 0; iy < 64; ++iy)
        for (int ix = 0; ix < 64; ++ix)
            phi[g64.index(ix, iy)] = 0.1 * std::sin(kTwoPi * g64.coord(0, ix));
    const MetricField m(phi);
    const TensorField h = ricci_flow_tensor(m);
    const ScalarField zero64(g64, 0.0);
    std::vector<FlowHistoryEntry> hist3;
    hist3.push_back({0.0, &m, &h, &zero64});
    const BoundConstants b2 = extract_bounds(hist3);
    const double want_k1 = oracle::dense_max(1.0, 200000, analytic_neg_k_max, 0.1);
    CHECK(b2.k1 == doctest::Approx(want_k1).epsilon(5e-3));
}

TEST_CASE("extract_bounds: appending history never decreases a constant") {
    const ManifoldGrid g = ManifoldGrid::circle(64);
    std::mt19937 rng(11);
    BoundsAccumulator acc;
    BoundConstants prev;
    for (int step = 0; step < 8; ++step) {
        const MetricField m(oracle::random_smooth_field(g, rng, 0.2));
        TensorField h = scaled_metric_tensor(m, -0.3 + 0.17 * step);
        const ScalarField pot = oracle::random_smooth_field(g, rng, 0.5);
        acc.add(m, h, pot);
        const BoundConstants cur = acc.current();
        CHECK(cur.k1 >= prev.k1);
        CHECK(cur.k2 >= prev.k2);
        CHECK(cur.k3 >= prev.k3);
        CHECK(cur.k4 >= prev.k4);
        CHECK(cur.sup_R >= prev.sup_R);
        CHECK(cur.sup_gradR >= prev.sup_gradR);
        CHECK(cur.sup_lapR >= prev.sup_lapR);
        CHECK(cur.k1 >= 0.0);
        CHECK(cur.k2 >= 0.0);
        CHECK(cur.k3 >= 0.0);
        CHECK(cur.k4 >= 0.0);
        prev = cur;
    }
}

TEST_CASE("metric_equivalence_check: static, boundary case, ricci run") {
    const ManifoldGrid g = ManifoldGrid::torus(24, 24);
    std::mt19937 rng(5);
    const MetricField m(oracle::random_smooth_field(g, rng, 0.2));

    // static: ratio 1 inside [e^{-2k1T}, e^{2k2T}]
    const EquivalenceVerdict v0 =
        metric_equivalence_check(m, m, 0.5, 0.5, 0.1, 1e-3);
    CHECK(v0.pass);
    CHECK(v0.worst_ratio == doctest::Approx(1.0));

    // h = c g treated as Ricci-like with k2 = c: ratio exactly e^{2cT},
    // passes at the tolerance boundary
    const double c = 0.6, T = 0.2;
    ScalarField phi_t = m.phi();
    for (std::size_t i = 0; i < phi_t.size(); ++i) phi_t[i] += c * T;
    const EquivalenceVerdict v1 =
        metric_equivalence_check(m, MetricField(phi_t), 0.0, c, T, 1e-3);
    CHECK(v1.pass);
    CHECK(v1.worst_ratio == doctest::Approx(std::exp(2.0 * c * T)));
    // and fails when the claimed bound is below the actual growth
    const EquivalenceVerdict v2 =
        metric_equivalence_check(m, MetricField(phi_t), 0.0, 0.9 * c, T, 1e-3);
    CHECK_FALSE(v2.pass);
    CHECK(v2.margin < 0.0);

    // a real Ricci-surface run with measured bounds
    const ManifoldGrid g48 = ManifoldGrid::torus(48, 48);
    ScalarField phi0(g48);
    for (int iy = 0; iy < 48; ++iy)
        for (int ix = 0; ix < 48; ++ix)
            phi0[g48.index(ix, iy)] = 0.1 * std::sin(kTwoPi * g48.coord(0, ix));
    FlowSpec spec;
    spec.kind = FlowKind::ricci_surface;
    MetricField cur(phi0);
    const double dt = 1.5e-5, t_end = 0.05;
    const int steps = static_cast<int>(t_end / dt + 0.5);
    BoundsAccumulator acc;
    const ScalarField zero(g48, 0.0);
    acc.add(cur, ricci_flow_tensor(cur), zero);
    double t = 0.0;
    for (int s = 0; s < steps; ++s, t += dt) {
        cur = advance_metric(cur, spec, t, dt);
        if (s % 250 == 0) acc.add(cur, ricci_flow_tensor(cur), zero);
    }
    acc.add(cur, ricci_flow_tensor(cur), zero);
    const BoundConstants b = acc.current();
    const EquivalenceVerdict v3 = metric_equivalence_check(
        MetricField(phi0), cur, b.k1, b.k2, t_end, dt);
    CHECK(v3.pass);
    CHECK(v3.margin >= 0.0);
}

TEST_CASE("ricci flow conserves total curvature and fixes the flat torus") {
    // discrete Gauss-Bonnet: integral of K dV_g vanishes identically
    const ManifoldGrid g = ManifoldGrid::torus(32, 32);
    std::mt19937 rng(29);
    for (int trial = 0; trial < 4; ++trial) {
        const MetricField m(oracle::random_smooth_field(g, rng, 0.3));
        const ScalarField k = gauss_curvature(m);
        double total = 0.0;
        const double cell = g.spacing(0) * g.spacing(1);
        for (std::size_t i = 0; i < k.size(); ++i)
            total += k[i] * m.conf()[i] * cell;
        CHECK(std::abs(total) <= 1e-12);
    }

    // flat torus: ricci_surface leaves the mean (and everything) unchanged
    FlowSpec spec;
    spec.kind = FlowKind::ricci_surface;
    MetricField cur = MetricField::flat(g);
    double t = 0.0;
    const double dt = 5e-5;
    for (int s = 0; s < 200; ++s, t += dt) cur = advance_metric(cur, spec, t, dt);
    double mean = 0.0;
    for (std::size_t i = 0; i < g.point_count(); ++i) mean += cur.phi()[i];
    mean /= static_cast<double>(g.point_count());
    CHECK(std::abs(mean) <= 1e-6 * t);
}

TEST_CASE("flow_cfl_bound scales with spacing^2 and e^{2 min phi}") {
    const ManifoldGrid g = ManifoldGrid::circle(128);
    const double flat_bound = flow_cfl_bound(MetricField::flat(g));
    CHECK(flat_bound == doctest::Approx(0.2 / (128.0 * 128.0)).epsilon(1e-12));
    const MetricField sunk(ScalarField(g, -1.0));
    CHECK(flow_cfl_bound(sunk) ==
          doctest::Approx(flat_bound * std::exp(-2.0)).epsilon(1e-12));
}

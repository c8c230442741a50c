#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "liylab/geometry.hpp"
#include "liylab/solver.hpp"
#include "oracles.hpp"

using namespace liylab;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

PDEProblem heat_problem(int n, double dt, double t_end, int stride = 1) {
    PDEProblem p;
    p.grid = ManifoldGrid::circle(n);
    p.phi0 = ScalarField(p.grid, 0.0);
    p.u0 = ScalarField(p.grid, 1.0);
    p.dt = dt;
    p.t_end = t_end;
    p.record_stride = stride;
    return p;
}

double mass(const SolutionHistory& h, int idx) {
    const ManifoldGrid& g = h.grid();
    const double cell =
        g.dim() == 1 ? g.spacing(0) : g.spacing(0) * g.spacing(1);
    const auto& conf = h.metric(idx).conf();
    double s = 0.0;
    for (std::size_t i = 0; i < g.point_count(); ++i) {
        const double vol = g.dim() == 1 ? std::exp(0.5 * std::log(conf[i]))
                                        : conf[i];  // e^{d phi}
        s += h.u(idx)[i] * vol * cell;
    }
    return s;
}

}  // namespace

TEST_CASE("constants are fixed points: a=0 heat and u0=1 for any a") {
    PDEProblem p = heat_problem(32, 5e-5, 0.02);
    ScalarField u0(p.grid, 2.5);
    p.u0 = u0;
    SolutionHistory h = solve(p);
    for (std::size_t i = 0; i < u0.size(); ++i)
        CHECK(std::abs(h.u(h.size() - 1)[i] - 2.5) <= 1e-14);

    p.a = 3.0;  // u = 1 solves u' = -a u log u
    p.u0 = ScalarField(p.grid, 1.0);
    h = solve(p);
    for (std::size_t i = 0; i < u0.size(); ++i)
        CHECK(std::abs(h.u(h.size() - 1)[i] - 1.0) <= 1e-14);
    CHECK(h.clamp_count() == 0);
}

TEST_CASE("Fourier mode decay matches the closed form, refining >= 3.5x") {
    double errs[2];
    const int res[2] = {128, 256};
    const double dts[2] = {5e-6, 1.25e-6};
    const double t_end = 0.01;
    for (int k = 0; k < 2; ++k) {
        PDEProblem p = heat_problem(res[k], dts[k], t_end);
        p.record_stride = static_cast<int>(t_end / dts[k] + 0.5);  // final only
        ScalarField u0(p.grid);
        for (int i = 0; i < p.grid.nx(); ++i)
            u0[i] = 1.0 + 0.5 * std::sin(kTwoPi * p.grid.coord(0, i));
        p.u0 = u0;
        const SolutionHistory h = solve(p);
        const double decay = std::exp(-kTwoPi * kTwoPi * t_end);
        errs[k] = 0.0;
        for (int i = 0; i < p.grid.nx(); ++i) {
            const double want =
                1.0 + 0.5 * decay * std::sin(kTwoPi * p.grid.coord(0, i));
            errs[k] = std::max(errs[k],
                               std::abs(h.u(h.size() - 1)[i] - want));
        }
    }
    CHECK(errs[0] <= 1e-4);
    CHECK(errs[0] / errs[1] >= 3.5);
}

TEST_CASE("spatially constant nonlinear ODE: u(t) = exp(e^{-a t} log u0)") {
    for (double a : {-0.5, 1.0}) {
        PDEProblem p = heat_problem(8, 1e-3, 1.0);
        p.a = a;
        p.u0 = ScalarField(p.grid, std::exp(1.0));
        const SolutionHistory h = solve(p);
        // checked at several times, all grid points
        for (int idx : {250, 500, 1000}) {
            const double t = h.time(idx);
            const double want = std::exp(std::exp(-a * t));
            for (int i = 0; i < p.grid.nx(); ++i)
                CHECK(std::abs(h.u(idx)[i] - want) <= 1e-8);
        }
    }
    // frozen value from the closed form: a = 1, u0 = e, t = 1
    PDEProblem p = heat_problem(8, 1e-3, 1.0);
    p.a = 1.0;
    p.u0 = ScalarField(p.grid, std::exp(1.0));
    const SolutionHistory h = solve(p);
    CHECK(h.u(h.size() - 1)[0] ==
          doctest::Approx(1.4446678610097661).epsilon(1e-10));
}

TEST_CASE("heat flow conserves mass on the closed manifold") {
    PDEProblem p = heat_problem(128, 5e-6, 0.005, 100);
    GeneratorSpec bump = gaussian_gen(0.01, {0.5, 0.0});
    p.u0 = evaluate(bump, p.grid, 0.0);
    const SolutionHistory h = solve(p);
    const double m0 = mass(h, 0);
    for (int idx = 1; idx < h.size(); ++idx)
        CHECK(std::abs(mass(h, idx) - m0) <= 1e-9 * m0);
}

TEST_CASE("maximum principle: a=0, R=0 bounds stay monotone per step") {
    const ManifoldGrid g = ManifoldGrid::circle(64);
    std::mt19937 rng(13);
    PDEProblem p = heat_problem(64, 2e-5, 0.004);
    ScalarField u0 = oracle::random_smooth_field(g, rng, 0.4);
    for (std::size_t i = 0; i < u0.size(); ++i) u0[i] += 1.5;
    p.u0 = u0;
    const SolutionHistory h = solve(p);
    for (int idx = 1; idx < h.size(); ++idx) {
        CHECK(h.u(idx).max() <= h.u(idx - 1).max() + 1e-10);
        CHECK(h.u(idx).min() >= h.u(idx - 1).min() - 1e-10);
    }
}

TEST_CASE("PDE residual self-check via the derived caches") {
    // residual of the u-equation with the time derivative taken from
    // snapshots: the semidiscrete solution satisfies it to RK4 accuracy
    PDEProblem p = heat_problem(128, 5e-6, 0.004, 40);
    p.a = 0.5;
    ScalarField u0(p.grid);
    for (int i = 0; i < p.grid.nx(); ++i)
        u0[i] = 1.0 + 0.4 * std::sin(kTwoPi * p.grid.coord(0, i));
    p.u0 = u0;
    const SolutionHistory h = solve(p);
    const int mid = h.size() / 2;
    const ScalarField ut = h.time_derivative(
        [&](int k) { return h.u(k); }, mid);
    const ScalarField lap_u = laplace_beltrami(h.metric(mid), h.u(mid));
    double res_u = 0.0;
    for (std::size_t i = 0; i < ut.size(); ++i) {
        const double u = h.u(mid)[i];
        res_u = std::max(res_u,
                         std::abs(ut[i] - lap_u[i] + p.a * u * std::log(u)));
    }
    CHECK(res_u <= 1e-7);

    // f-equation consistency: (d/dt - Lap) f = |grad f|^2 - a f - R picks up
    // the O(h^2) chain-rule defect; it shrinks at second order
    double res_f[2];
    const int res[2] = {128, 256};
    const double dts[2] = {5e-6, 1.25e-6};
    for (int k = 0; k < 2; ++k) {
        PDEProblem pk = heat_problem(res[k], dts[k], 0.004,
                                     k == 0 ? 40 : 160);
        pk.a = 0.5;
        ScalarField u0k(pk.grid);
        for (int i = 0; i < pk.grid.nx(); ++i)
            u0k[i] = 1.0 + 0.4 * std::sin(kTwoPi * pk.grid.coord(0, i));
        pk.u0 = u0k;
        const SolutionHistory hk = solve(pk);
        const int m = hk.size() / 2;
        const ScalarField ft = hk.f_t(m);
        const ScalarField lap_f = hk.lap_f(m);
        const ScalarField gsq = hk.grad_norm_sq_f(m);
        const ScalarField f = hk.f(m);
        res_f[k] = 0.0;
        for (std::size_t i = 0; i < ft.size(); ++i)
            res_f[k] = std::max(res_f[k], std::abs(ft[i] - lap_f[i] - gsq[i] +
                                                   pk.a * f[i]));
    }
    CHECK(res_f[0] <= 2e-2);
    CHECK(res_f[0] / res_f[1] >= 3.5);
}

TEST_CASE("positivity floor: clamps are counted and the floor holds") {
    PDEProblem p = heat_problem(8, 1e-3, 0.02);
    p.potential = constant_gen(1000.0);  // u decays like e^{-1000 t}
    p.u0 = ScalarField(p.grid, 1e-9);
    const SolutionHistory h = solve(p);
    CHECK(h.clamp_count() > 0);
    CHECK(h.u(h.size() - 1).min() >= kUFloor);
    CHECK(h.u(h.size() - 1).min() == doctest::Approx(kUFloor));
}

TEST_CASE("blowup raises a located error") {
    PDEProblem p = heat_problem(8, 1e-5, 1e-3);
    p.potential = constant_gen(-1e7);  // u grows like e^{1e7 t}: overflow
    p.u0 = ScalarField(p.grid, 1.0);
    CHECK_THROWS_AS(solve(p), BlowupError);
    try {
        solve(p);
    } catch (const BlowupError& e) {
        CHECK(e.t > 0.0);
        CHECK(std::string(e.what()).find("non-finite") != std::string::npos);
    }
}

TEST_CASE("problem validation names the violated constraint") {
    PDEProblem p = heat_problem(32, 5e-5, 0.02);

    PDEProblem bad_cfl = p;
    bad_cfl.dt = 1.0;
    bad_cfl.t_end = 2.0;
    CHECK_THROWS_WITH_AS(solve(bad_cfl),
                         doctest::Contains("stability bound"),
                         std::invalid_argument);

    PDEProblem bad_tend = p;
    bad_tend.t_end = 0.02 + 0.3 * p.dt;
    CHECK_THROWS_WITH_AS(solve(bad_tend),
                         doctest::Contains("integer multiple"),
                         std::invalid_argument);

    PDEProblem bad_u0 = p;
    bad_u0.u0 = ScalarField(p.grid, -1.0);
    CHECK_THROWS_WITH_AS(solve(bad_u0), doctest::Contains("positivity floor"),
                         std::invalid_argument);

    PDEProblem bad_stride = p;
    bad_stride.record_stride = 7;  // 200 steps not divisible by 7
    CHECK_THROWS_WITH_AS(solve(bad_stride), doctest::Contains("divisible"),
                         std::invalid_argument);
}

TEST_CASE("step_u matches one coupled step on a static metric") {
    const ManifoldGrid g = ManifoldGrid::circle(64);
    std::mt19937 rng(31);
    ScalarField u0 = oracle::random_smooth_field(g, rng, 0.3);
    for (std::size_t i = 0; i < u0.size(); ++i) u0[i] += 2.0;
    PDEProblem p = heat_problem(64, 2e-5, 2e-5);
    p.a = 0.7;
    p.potential = constant_gen(0.4);
    p.u0 = u0;
    const SolutionHistory h = solve(p);

    long clamps = 0;
    const ScalarField one_step =
        step_u(u0, MetricField::flat(g), ScalarField(g, 0.4), 0.7, 2e-5,
               &clamps);
    for (std::size_t i = 0; i < u0.size(); ++i)
        CHECK(one_step[i] == doctest::Approx(h.u(1)[i]).epsilon(1e-15));
    CHECK(clamps == 0);
}

TEST_CASE("solver against the theta-function kernel on the circle") {
    // start from the oracle kernel at t0 and advect to t0 + T
    const ManifoldGrid g = ManifoldGrid::circle(256);
    const double t0 = 0.02, T = 0.03;
    PDEProblem p = heat_problem(256, 1.25e-6, T, 2400);
    p.u0 = oracle::circle_heat_kernel_field(g, 0.5, t0);
    const SolutionHistory h = solve(p);
    double err = 0.0;
    for (int i = 0; i < g.nx(); ++i)
        err = std::max(err, std::abs(h.u(h.size() - 1)[i] -
                                     oracle::circle_heat_kernel(
                                         g.coord(0, i) - 0.5, t0 + T)));
    CHECK(err <= 5e-5);
}

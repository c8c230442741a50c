#include "oracles.hpp"

#include <cmath>

namespace liylab::oracle {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

double circle_heat_kernel_images(double x, double t) {
    double d = std::fmod(x, 1.0);
    if (d < -0.5) d += 1.0;
    if (d >= 0.5) d -= 1.0;
    const double pref = 1.0 / std::sqrt(4.0 * kPi * t);
    double s = 0.0;
    const int m_max = static_cast<int>(std::ceil(std::sqrt(745.0 * 4.0 * t))) + 2;
    for (int m = -m_max; m <= m_max; ++m) {
        const double z = d - m;
        s += std::exp(-z * z / (4.0 * t));
    }
    return pref * s;
}

double circle_heat_kernel_spectral(double x, double t) {
    double s = 1.0;
    for (int j = 1;; ++j) {
        const double term = 2.0 * std::exp(-4.0 * kPi * kPi * j * j * t);
        if (term < 1e-17) break;
        s += term * std::cos(2.0 * kPi * j * x);
    }
    return s;
}

double circle_heat_kernel(double x, double t) {
    // spectral converges fast for large t, image sum for small t
    return t >= 0.02 ? circle_heat_kernel_spectral(x, t)
                     : circle_heat_kernel_images(x, t);
}

ScalarField circle_heat_kernel_field(const ManifoldGrid& grid, double x0,
                                     double t) {
    ScalarField out(grid);
    for (int i = 0; i < grid.nx(); ++i)
        out[i] = circle_heat_kernel(grid.coord(0, i) - x0, t);
    return out;
}

SolutionHistory circle_heat_history(const ManifoldGrid& grid, double x0,
                                    const std::vector<double>& times) {
    std::vector<ScalarField> u;
    u.reserve(times.size());
    for (double t : times) u.push_back(circle_heat_kernel_field(grid, x0, t));
    std::vector<MetricField> metrics;
    metrics.push_back(MetricField::flat(grid));
    return SolutionHistory::from_snapshots(grid, times, std::move(u),
                                           std::move(metrics));
}

ScalarField random_smooth_field(const ManifoldGrid& grid, std::mt19937& rng,
                                double amplitude, int max_mode) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
    ScalarField out(grid);
    for (int kx = 1; kx <= max_mode; ++kx) {
        const double ax = amplitude * amp(rng) / kx;
        const double px = ph(rng);
        if (grid.dim() == 1) {
            for (int i = 0; i < grid.nx(); ++i)
                out[i] += ax * std::sin(2.0 * kPi * kx * grid.coord(0, i) /
                                            grid.period(0) +
                                        px);
        } else {
            const int ky = static_cast<int>(rng() % (max_mode + 1));
            const double py = ph(rng);
            for (int iy = 0; iy < grid.ny(); ++iy)
                for (int ix = 0; ix < grid.nx(); ++ix) {
                    const double vx = std::sin(
                        2.0 * kPi * kx * grid.coord(0, ix) / grid.period(0) +
                        px);
                    const double vy =
                        ky == 0 ? 1.0
                                : std::sin(2.0 * kPi * ky *
                                               grid.coord(1, iy) /
                                               grid.period(1) +
                                           py);
                    out[grid.index(ix, iy)] += ax * vx * vy;
                }
        }
    }
    return out;
}

double dense_max(double period, int samples, double (*fn)(double, double),
                 double param) {
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i)
        m = std::max(m, fn(period * i / samples, param));
    return m;
}

}  // namespace liylab::oracle

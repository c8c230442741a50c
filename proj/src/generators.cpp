#include "liylab/generators.hpp"

#include <cmath>

namespace liylab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double periodized_gaussian_1d(double x, double c, double width, double period) {
    // Wrap the offset into [-L/2, L/2) and add images until they vanish.
    double d = std::fmod(x - c, period);
    if (d < -0.5 * period) d += period;
    if (d >= 0.5 * period) d -= period;
    const int m_max =
        static_cast<int>(std::ceil((std::sqrt(745.0 * 4.0 * width) + 0.5 * period) /
                                   period)) + 1;
    double s = 0.0;
    for (int m = -m_max; m <= m_max; ++m) {
        const double z = d - m * period;
        s += std::exp(-z * z / (4.0 * width));
    }
    return s;
}
}  // namespace

const char* gen_kind_name(GenKind k) {
    switch (k) {
        case GenKind::constant: return "constant";
        case GenKind::sine_bump: return "sine_bump";
        case GenKind::periodized_gaussian: return "periodized_gaussian";
    }
    return "?";
}

GenKind gen_kind_from_name(const std::string& name) {
    if (name == "constant") return GenKind::constant;
    if (name == "sine_bump") return GenKind::sine_bump;
    if (name == "periodized_gaussian") return GenKind::periodized_gaussian;
    throw std::invalid_argument("unknown generator kind '" + name +
                                "' (known: constant, sine_bump, periodized_gaussian)");
}

double evaluate_at(const GeneratorSpec& spec, const ManifoldGrid& grid,
                   double x, double y, double t) {
    const double decay =
        spec.decay_rate == 0.0 ? 1.0 : std::exp(-spec.decay_rate * t);
    switch (spec.kind) {
        case GenKind::constant:
            return spec.value * decay;
        case GenKind::sine_bump: {
            double s = spec.amplitude * decay;
            if (spec.modes[0] != 0)
                s *= std::sin(kTwoPi * spec.modes[0] * x / grid.period(0) +
                              spec.phase);
            if (grid.dim() == 2 && spec.modes[1] != 0)
                s *= std::sin(kTwoPi * spec.modes[1] * y / grid.period(1) +
                              spec.phase);
            return spec.offset + s;
        }
        case GenKind::periodized_gaussian: {
            double s = spec.amplitude * decay *
                       periodized_gaussian_1d(x, spec.center[0], spec.width,
                                              grid.period(0));
            if (grid.dim() == 2)
                s *= periodized_gaussian_1d(y, spec.center[1], spec.width,
                                            grid.period(1));
            return spec.offset + s;
        }
    }
    return 0.0;
}

ScalarField evaluate(const GeneratorSpec& spec, const ManifoldGrid& grid,
                     double t) {
    ScalarField out(grid);
    for (int iy = 0; iy < (grid.dim() == 2 ? grid.ny() : 1); ++iy) {
        const double y = grid.coord(1, iy);
        for (int ix = 0; ix < grid.nx(); ++ix)
            out[grid.index(ix, iy)] =
                evaluate_at(spec, grid, grid.coord(0, ix), y, t);
    }
    return out;
}

}  // namespace liylab

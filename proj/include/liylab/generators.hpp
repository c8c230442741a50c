#ifndef LIYLAB_GENERATORS_HPP
#define LIYLAB_GENERATORS_HPP

#include <array>
#include <string>

#include "liylab/fields.hpp"

namespace liylab {

// Closed registry of named closed-form field generators. Keeping the forms
// closed (no expression language) keeps gradient/Laplacian bounds of the
// generated fields analytic.

enum class GenKind { constant, sine_bump, periodized_gaussian };

struct GeneratorSpec {
    GenKind kind = GenKind::constant;
    // constant
    double value = 0.0;
    // sine_bump: offset + amplitude * e^{-decay_rate t} * prod_axis sin(2 pi k x / L + phase)
    // (an axis with mode 0 contributes a factor 1, giving the product forms)
    double amplitude = 0.0;
    double offset = 0.0;
    double phase = 0.0;
    std::array<int, 2> modes{1, 0};
    // periodized_gaussian: offset + amplitude * e^{-decay_rate t}
    //   * prod_axis sum_m exp(-(x - c - m L)^2 / (4 width))
    double width = 0.01;
    std::array<double, 2> center{0.0, 0.0};
    // applies to the non-offset part of any kind
    double decay_rate = 0.0;
};

const char* gen_kind_name(GenKind k);
GenKind gen_kind_from_name(const std::string& name);

double evaluate_at(const GeneratorSpec& spec, const ManifoldGrid& grid,
                   double x, double y, double t);
ScalarField evaluate(const GeneratorSpec& spec, const ManifoldGrid& grid,
                     double t);

inline GeneratorSpec constant_gen(double v) {
    GeneratorSpec s;
    s.kind = GenKind::constant;
    s.value = v;
    return s;
}

inline GeneratorSpec sine_gen(double amplitude, std::array<int, 2> modes,
                              double offset = 0.0, double phase = 0.0) {
    GeneratorSpec s;
    s.kind = GenKind::sine_bump;
    s.amplitude = amplitude;
    s.modes = modes;
    s.offset = offset;
    s.phase = phase;
    return s;
}

inline GeneratorSpec gaussian_gen(double width, std::array<double, 2> center,
                                  double amplitude = 1.0, double offset = 0.0) {
    GeneratorSpec s;
    s.kind = GenKind::periodized_gaussian;
    s.width = width;
    s.center = center;
    s.amplitude = amplitude;
    s.offset = offset;
    return s;
}

}  // namespace liylab

#endif

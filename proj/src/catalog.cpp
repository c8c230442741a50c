#include "liylab/config.hpp"

namespace liylab {

// Bundled experiment configs. Strict thresholds are the recorded values of
// the pilot runs at the stated resolutions (see README), with ~5x headroom.

const std::vector<CatalogEntry>& experiment_catalog() {
    static const std::vector<CatalogEntry> catalog = {
        {"flat_static_classical",
         "classical sharp gradient bound on the flat static torus (64^2, "
         "periodized Gaussian datum)",
         R"json({
  "version": 1,
  "name": "flat_static_classical",
  "description": "classical sharp gradient bound on the flat static torus",
  "manifold": {"dim": 2, "sizes": [64, 64], "periods": [1.0, 1.0]},
  "phi0": {"kind": "constant", "value": 0.0},
  "flow": {"kind": "static"},
  "pde": {
    "a": 0.0,
    "potential": {"kind": "constant", "value": 0.0},
    "u0": {"kind": "periodized_gaussian", "width": 0.005, "center": [0.5, 0.5], "amplitude": 1.0}
  },
  "time": {"dt": 1.0e-5, "t_end": 0.5, "record_stride": 20},
  "liyau": {"alpha": 1.0, "p": 1.0, "q": "inf", "slack": 1.05},
  "harnack": [
    {"id": "peak_x", "x1": [32, 32], "x2": [48, 32], "t1": 0.1, "t2": 0.2, "c12": 0.0},
    {"id": "peak_y", "x1": [32, 32], "x2": [32, 48], "t1": 0.2, "t2": 0.4, "c12": 0.0}
  ],
  "seed": 1
})json"},
        {"ricci_surface_bump",
         "Ricci flow from a conformal bump on the torus (48^2) with the "
         "metric-equivalence check",
         R"json({
  "version": 1,
  "name": "ricci_surface_bump",
  "description": "Ricci flow from a conformal bump on the torus",
  "manifold": {"dim": 2, "sizes": [48, 48], "periods": [1.0, 1.0]},
  "phi0": {"kind": "sine_bump", "amplitude": 0.1, "modes": [1, 0]},
  "flow": {"kind": "ricci_surface"},
  "pde": {
    "a": 0.0,
    "potential": {"kind": "constant", "value": 0.0},
    "u0": {"kind": "sine_bump", "amplitude": 0.3, "modes": [1, 1], "offset": 1.0}
  },
  "time": {"dt": 1.6e-5, "t_end": 0.048, "record_stride": 10},
  "liyau": {"alpha": 2.0, "p": 4.0, "q": 4.0},
  "seed": 1
})json"},
        {"logpotential_constant",
         "spatially constant closed-form run of the log-nonlinearity (a = 1, "
         "u0 = e) with Harnack queries",
         R"json({
  "version": 1,
  "name": "logpotential_constant",
  "description": "spatially constant closed-form run of the log-nonlinearity",
  "manifold": {"dim": 1, "sizes": [8], "periods": [1.0]},
  "phi0": {"kind": "constant", "value": 0.0},
  "flow": {"kind": "static"},
  "pde": {
    "a": 1.0,
    "potential": {"kind": "constant", "value": 0.0},
    "u0": {"kind": "constant", "value": 2.718281828459045}
  },
  "time": {"dt": 1.0e-3, "t_end": 1.0, "record_stride": 1},
  "liyau": {"alpha": 2.0, "p": 4.0, "q": 4.0},
  "harnack": [
    {"id": "s0_a", "x1": [0], "x2": [0], "t1": 0.05, "t2": 0.1, "c12": 0.0},
    {"id": "s0_b", "x1": [0], "x2": [0], "t1": 0.1, "t2": 0.2, "c12": 0.0},
    {"id": "s2_a", "x1": [0], "x2": [2], "t1": 0.1, "t2": 0.4, "c12": 0.0},
    {"id": "s4_a", "x1": [0], "x2": [4], "t1": 0.2, "t2": 0.4, "c12": 0.0}
  ],
  "seed": 1
})json"},
        {"harnack_circle",
         "heat flow on the flat circle (N = 128) with the 12-query Harnack "
         "lattice",
         R"json({
  "version": 1,
  "name": "harnack_circle",
  "description": "heat flow on the flat circle with the 12-query Harnack lattice",
  "manifold": {"dim": 1, "sizes": [128], "periods": [1.0]},
  "phi0": {"kind": "constant", "value": 0.0},
  "flow": {"kind": "static"},
  "pde": {
    "a": 0.0,
    "potential": {"kind": "constant", "value": 0.0},
    "u0": {"kind": "periodized_gaussian", "width": 0.005, "center": [0.5], "amplitude": 1.0}
  },
  "time": {"dt": 5.0e-6, "t_end": 0.4, "record_stride": 50},
  "liyau": {"alpha": 1.0, "p": 1.0, "q": "inf", "slack": 1.05},
  "harnack": [
    {"id": "s00_t1", "x1": [64], "x2": [64], "t1": 0.05, "t2": 0.1, "c12": 0.0},
    {"id": "s00_t2", "x1": [64], "x2": [64], "t1": 0.1, "t2": 0.2, "c12": 0.0},
    {"id": "s00_t3", "x1": [64], "x2": [64], "t1": 0.1, "t2": 0.4, "c12": 0.0},
    {"id": "s00_t4", "x1": [64], "x2": [64], "t1": 0.2, "t2": 0.4, "c12": 0.0},
    {"id": "s25_t1", "x1": [64], "x2": [96], "t1": 0.05, "t2": 0.1, "c12": 0.0},
    {"id": "s25_t2", "x1": [64], "x2": [96], "t1": 0.1, "t2": 0.2, "c12": 0.0},
    {"id": "s25_t3", "x1": [64], "x2": [96], "t1": 0.1, "t2": 0.4, "c12": 0.0},
    {"id": "s25_t4", "x1": [64], "x2": [96], "t1": 0.2, "t2": 0.4, "c12": 0.0},
    {"id": "s50_t1", "x1": [64], "x2": [0], "t1": 0.05, "t2": 0.1, "c12": 0.0},
    {"id": "s50_t2", "x1": [64], "x2": [0], "t1": 0.1, "t2": 0.2, "c12": 0.0},
    {"id": "s50_t3", "x1": [64], "x2": [0], "t1": 0.1, "t2": 0.4, "c12": 0.0},
    {"id": "s50_t4", "x1": [64], "x2": [0], "t1": 0.2, "t2": 0.4, "c12": 0.0}
  ],
  "seed": 1
})json"},
        {"identity_flow_256",
         "evolution-identity residuals along the prescribed flow h = 0.05 g "
         "at reference resolution 256",
         R"json({
  "version": 1,
  "name": "identity_flow_256",
  "description": "evolution-identity residuals along the prescribed flow h = 0.05 g",
  "manifold": {"dim": 1, "sizes": [256], "periods": [1.0]},
  "phi0": {"kind": "sine_bump", "amplitude": 0.1, "modes": [1]},
  "flow": {"kind": "prescribed", "psi": {"kind": "constant", "value": 0.05}},
  "pde": {
    "a": 0.0,
    "potential": {"kind": "constant", "value": 0.0},
    "u0": {"kind": "sine_bump", "amplitude": 0.3, "modes": [1], "offset": 1.0}
  },
  "time": {"dt": 1.0e-6, "t_end": 0.08, "record_stride": 100},
  "liyau": {"alpha": 2.0, "p": 4.0, "q": 4.0},
  "strict_thresholds": {
    "grad_evolution": 1.0e-7,
    "laplacian_evolution": 2.0e-5,
    "bochner": 5.0e-2,
    "f_quantity": 5.0e-3
  },
  "seed": 1
})json"}};
    return catalog;
}

}  // namespace liylab

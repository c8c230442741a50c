#ifndef LIYLAB_CONFIG_HPP
#define LIYLAB_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "liylab/estimates.hpp"
#include "liylab/solver.hpp"

namespace liylab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HarnackQueryConfig {
    std::string id;
    GridPoint x1, x2;
    double t1 = 0.0, t2 = 0.0;
    double c12 = 0.0;
};

/// Declarative experiment description. Parsed from JSON (see README for the
/// schema); `version` is mandatory and must be 1.
struct ExperimentConfig {
    int version = 1;
    std::string name;
    std::string description;

    int dim = 1;
    std::array<int, 2> sizes{128, 1};
    std::array<double, 2> periods{1.0, 1.0};

    GeneratorSpec phi0;
    FlowSpec flow;

    double a = 0.0;
    GeneratorSpec potential;
    GeneratorSpec u0;

    double dt = 0.0;
    double t_end = 0.0;
    int record_stride = 1;

    LiYauParams liyau;
    std::vector<HarnackQueryConfig> harnack;

    /// Recorded pilot residual ceilings, enforced under --strict.
    std::map<std::string, double> strict_thresholds;

    unsigned long seed = 0;
    std::optional<std::string> output;

    /// The raw canonical form this config was parsed from (echoed into the
    /// report and hashed; excludes output overrides).
    std::string canonical_json;

    ManifoldGrid grid() const { return ManifoldGrid(dim, sizes, periods); }
    PDEProblem problem() const;
    /// Full structural validation; throws ConfigError naming the constraint.
    void validate() const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

/// Bundled experiment catalog (compiled in).
struct CatalogEntry {
    std::string name;
    std::string description;
    std::string json_text;
};
const std::vector<CatalogEntry>& experiment_catalog();
std::optional<ExperimentConfig> find_bundled(const std::string& name);

}  // namespace liylab

#endif

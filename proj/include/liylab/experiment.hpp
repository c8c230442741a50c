#ifndef LIYLAB_EXPERIMENT_HPP
#define LIYLAB_EXPERIMENT_HPP

#include <string>
#include <vector>

#include "liylab/config.hpp"

namespace liylab {

struct CheckResult {
    std::string name;
    bool pass = false;
    double margin = 0.0;
    std::string detail;
};

struct ResidualRow {
    double t = 0.0;
    IdentityResiduals residuals;
};

struct HarnackRow {
    std::string id;
    double lhs = 0.0, rhs = 0.0, path_length = 0.0;
    bool pass = false;
};

/// Everything a run produces. Serialized as report.json; the CSV artifacts
/// are derived from the stored series so `plotdata` can re-emit them
/// bit-for-bit. Wall-clock time is reported on the console only, keeping the
/// persisted report byte-reproducible.
struct RunReport {
    std::string name;
    std::string config_hash;
    std::string config_echo;  // canonical JSON
    unsigned long seed = 0;
    int solver_steps = 0;
    int snapshots = 0;
    long clamp_count = 0;
    BoundConstants bounds;
    std::vector<LiYauSample> liyau_series;
    std::vector<ResidualRow> residual_rows;
    std::vector<HarnackRow> harnack_rows;
    std::vector<CheckResult> checks;
    int exit_code = 0;

    bool all_pass() const;
    std::string to_json() const;
    static RunReport from_json(const std::string& text);
};

struct RunOptions {
    bool strict = false;
    std::optional<std::string> out_dir;       // overrides config + env
    std::optional<unsigned long> seed;        // overrides config
};

/// Executes flow + solver + monitors for a config. Writes report.json and
/// the CSV files into the output directory. Exit code 0 = all checks pass,
/// 2 = some check failed; execution errors surface as exceptions (CLI maps
/// them to exit 1).
RunReport run_experiment(const ExperimentConfig& config, const RunOptions& opts);

/// Output directory resolution: --out, then config.output, then
/// $LIYLAB_OUT/<name>, then ./runs/<name>.
std::string resolve_output_dir(const ExperimentConfig& config,
                               const RunOptions& opts);

/// Re-emits the CSV artifacts next to a stored report.
void emit_plotdata(const RunReport& report, const std::string& dir);

/// FNV-1a 64-bit content hash, hex-encoded.
std::string content_hash(const std::string& text);

}  // namespace liylab

#endif

#include "liylab/experiment.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace liylab {

using nlohmann::json;

std::string content_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016" PRIx64, h);
    return buf;
}

bool RunReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json bounds_to_json(const BoundConstants& b) {
    return json{{"k1", b.k1},           {"k2", b.k2},
                {"k3", b.k3},           {"k4", b.k4},
                {"sup_R", b.sup_R},     {"sup_gradR", b.sup_gradR},
                {"sup_lapR", b.sup_lapR}};
}

BoundConstants bounds_from_json(const json& j) {
    BoundConstants b;
    b.k1 = j.value("k1", 0.0);
    b.k2 = j.value("k2", 0.0);
    b.k3 = j.value("k3", 0.0);
    b.k4 = j.value("k4", 0.0);
    b.sup_R = j.value("sup_R", 0.0);
    b.sup_gradR = j.value("sup_gradR", 0.0);
    b.sup_lapR = j.value("sup_lapR", 0.0);
    return b;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!out)
        throw std::runtime_error("I/O failure while writing '" + path + "'");
}

}  // namespace

std::string RunReport::to_json() const {
    json j;
    j["schema"] = "liylab-report-v1";
    j["name"] = name;
    j["config_hash"] = config_hash;
    j["config"] = json::parse(config_echo);
    j["artifacts"] = {"liyau.csv", "residuals.csv", "harnack.csv"};
    j["seed"] = seed;
    j["solver_steps"] = solver_steps;
    j["snapshots"] = snapshots;
    j["clamp_count"] = clamp_count;
    j["bounds"] = bounds_to_json(bounds);
    json ly = json::array();
    for (const auto& s : liyau_series)
        ly.push_back({s.t, s.sup_lhs, s.classical_bound, s.calibrated_running});
    j["liyau_series"] = ly;
    json rr = json::array();
    for (const auto& r : residual_rows)
        rr.push_back({r.t, r.residuals.grad_evolution,
                      r.residuals.laplacian_evolution, r.residuals.bochner,
                      r.residuals.f_quantity});
    j["residual_series"] = rr;
    json hq = json::array();
    for (const auto& h : harnack_rows)
        hq.push_back({{"id", h.id},
                      {"lhs", h.lhs},
                      {"rhs", h.rhs},
                      {"path_length", h.path_length},
                      {"pass", h.pass}});
    j["harnack"] = hq;
    json cs = json::array();
    for (const auto& c : checks)
        cs.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"margin", c.margin},
                      {"detail", c.detail}});
    j["checks"] = cs;
    j["exit_code"] = exit_code;
    return j.dump(2) + "\n";
}

RunReport RunReport::from_json(const std::string& text) {
    json j = json::parse(text);
    RunReport r;
    r.name = j.value("name", "");
    r.config_hash = j.value("config_hash", "");
    r.config_echo = j.contains("config") ? j["config"].dump(2) : "{}";
    r.seed = j.value("seed", 0UL);
    r.solver_steps = j.value("solver_steps", 0);
    r.snapshots = j.value("snapshots", 0);
    r.clamp_count = j.value("clamp_count", 0L);
    r.bounds = bounds_from_json(j.value("bounds", json::object()));
    for (const auto& s : j.value("liyau_series", json::array())) {
        LiYauSample ls;
        ls.t = s[0].get<double>();
        ls.sup_lhs = s[1].get<double>();
        ls.classical_bound = s[2].get<double>();
        ls.calibrated_running = s[3].get<double>();
        r.liyau_series.push_back(ls);
    }
    for (const auto& s : j.value("residual_series", json::array())) {
        ResidualRow row;
        row.t = s[0].get<double>();
        row.residuals.t = row.t;
        row.residuals.grad_evolution = s[1].get<double>();
        row.residuals.laplacian_evolution = s[2].get<double>();
        row.residuals.bochner = s[3].get<double>();
        row.residuals.f_quantity = s[4].get<double>();
        r.residual_rows.push_back(row);
    }
    for (const auto& h : j.value("harnack", json::array())) {
        HarnackRow row;
        row.id = h.value("id", "");
        row.lhs = h.value("lhs", 0.0);
        row.rhs = h.value("rhs", 0.0);
        row.path_length = h.value("path_length", 0.0);
        row.pass = h.value("pass", false);
        r.harnack_rows.push_back(row);
    }
    for (const auto& c : j.value("checks", json::array())) {
        CheckResult cr;
        cr.name = c.value("name", "");
        cr.pass = c.value("pass", false);
        cr.margin = c.value("margin", 0.0);
        cr.detail = c.value("detail", "");
        r.checks.push_back(cr);
    }
    r.exit_code = j.value("exit_code", 0);
    return r;
}

std::string resolve_output_dir(const ExperimentConfig& config,
                               const RunOptions& opts) {
    if (opts.out_dir) return *opts.out_dir;
    if (config.output) return *config.output;
    const char* root = std::getenv("LIYLAB_OUT");
    const std::string base = root && *root ? root : "runs";
    return base + "/" + config.name;
}

void emit_plotdata(const RunReport& report, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    {
        std::string csv = "t,sup_lhs,classical_bound,calibrated_C\n";
        for (const auto& s : report.liyau_series)
            csv += fmt(s.t) + "," + fmt(s.sup_lhs) + "," +
                   fmt(s.classical_bound) + "," + fmt(s.calibrated_running) +
                   "\n";
        write_text_file(dir + "/liyau.csv", csv);
    }
    {
        std::string csv =
            "t,residual_grad_evolution,residual_laplacian_evolution,"
            "residual_bochner,residual_f_quantity\n";
        for (const auto& r : report.residual_rows)
            csv += fmt(r.t) + "," + fmt(r.residuals.grad_evolution) + "," +
                   fmt(r.residuals.laplacian_evolution) + "," +
                   fmt(r.residuals.bochner) + "," +
                   fmt(r.residuals.f_quantity) + "\n";
        write_text_file(dir + "/residuals.csv", csv);
    }
    {
        std::string csv = "query_id,harnack_lhs,harnack_rhs,path_length,pass\n";
        for (const auto& h : report.harnack_rows)
            csv += h.id + "," + fmt(h.lhs) + "," + fmt(h.rhs) + "," +
                   fmt(h.path_length) + "," + (h.pass ? "1" : "0") + "\n";
        write_text_file(dir + "/harnack.csv", csv);
    }
}

RunReport run_experiment(const ExperimentConfig& config,
                         const RunOptions& opts) {
    config.validate();
    RunReport report;
    report.name = config.name;
    report.config_echo = config.canonical_json;
    report.config_hash = content_hash(config.canonical_json);
    report.seed = opts.seed ? *opts.seed : config.seed;

    PDEProblem problem = config.problem();
    SolutionHistory hist = solve(problem);
    report.solver_steps = hist.solver_steps();
    report.snapshots = hist.size();
    report.clamp_count = hist.clamp_count();

    // measured bound constants over the recorded space-time lattice
    BoundsAccumulator acc;
    for (int idx = 0; idx < hist.size(); ++idx)
        acc.add(hist.metric(idx), hist.h_field(idx), hist.potential_field(idx));
    report.bounds = acc.current();

    // Li-Yau monitor
    const LiYauMonitorResult mon =
        liyau_monitor(hist, config.liyau, report.bounds);
    report.liyau_series = mon.samples;

    auto add_check = [&](const std::string& name, bool pass, double margin,
                         const std::string& detail) {
        report.checks.push_back({name, pass, margin, detail});
    };

    if (config.liyau.lemma_mode()) {
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& s : mon.samples)
            worst = std::min(worst,
                             s.classical_bound * config.liyau.slack - s.sup_lhs);
        add_check("liyau_classical_bound", mon.bound_satisfied, worst,
                  "sup(|grad f|^2 - alpha f_t - alpha a f - alpha R) vs "
                  "(alpha n p / 2t)(1 - a t) * slack");
    }
    add_check("liyau_structure", mon.finite && mon.attained_away_from_zero,
              -mon.stabilization_change,
              "t*LHS - (alpha n p/2)(1 - a t) bounded, max at t = " +
                  fmt(mon.t_at_structure_max) +
                  "; running-max change over final 20% = " +
                  fmt(mon.stabilization_change));

    // identity residuals at interior quartile snapshots
    std::vector<int> idxs;
    if (hist.size() >= 7) {
        for (double frac : {0.25, 0.5, 0.75}) {
            int k = static_cast<int>(frac * (hist.size() - 1));
            k = std::clamp(k, 2, hist.size() - 3);
            if (idxs.empty() || idxs.back() != k) idxs.push_back(k);
        }
    }
    double worst_res = 0.0;
    for (int k : idxs) {
        ResidualRow row;
        row.t = hist.time(k);
        row.residuals = identity_residuals(hist, k, std::max(2.0, config.liyau.alpha));
        report.residual_rows.push_back(row);
        worst_res = std::max(worst_res, row.residuals.max());
    }
    if (!idxs.empty()) {
        bool pass = true;
        std::string detail = "max residual over sampled snapshots";
        if (opts.strict && !config.strict_thresholds.empty()) {
            for (const auto& row : report.residual_rows) {
                auto over = [&](const char* key, double v) {
                    auto it = config.strict_thresholds.find(key);
                    if (it != config.strict_thresholds.end() && v > it->second)
                        pass = false;
                };
                over("grad_evolution", row.residuals.grad_evolution);
                over("laplacian_evolution", row.residuals.laplacian_evolution);
                over("bochner", row.residuals.bochner);
                over("f_quantity", row.residuals.f_quantity);
            }
            detail += " (strict: checked against recorded pilot thresholds)";
        }
        add_check("identity_residuals", pass, -worst_res, detail);
    }

    // metric equivalence along Ricci-type flows; with h = -Ric the measured
    // eigenvalue bound k2 of h g^{-1} is exactly the upper Ricci bound
    if (config.flow.kind == FlowKind::ricci_surface && hist.size() >= 2) {
        const EquivalenceVerdict v = metric_equivalence_check(
            hist.metric(0), hist.metric(hist.size() - 1), report.bounds.k1,
            report.bounds.k2, config.t_end, config.dt);
        add_check("metric_equivalence", v.pass, v.margin,
                  "e^{-2 k1 T} <= g(T)/g(0) <= e^{2 k2 T}, worst ratio " +
                      fmt(v.worst_ratio));
    }

    // Harnack queries
    for (const auto& qc : config.harnack) {
        HarnackQuery q;
        q.id = qc.id;
        q.x1 = qc.x1;
        q.x2 = qc.x2;
        q.t1 = qc.t1;
        q.t2 = qc.t2;
        const HarnackResult hr = harnack_check(hist, config.liyau, q, qc.c12);
        HarnackRow row;
        row.id = qc.id;
        row.lhs = hr.lhs;
        row.rhs = hr.rhs;
        row.path_length = hr.path_length;
        row.pass = hr.pass;
        report.harnack_rows.push_back(row);
        add_check("harnack_" + qc.id, hr.pass, hr.rhs - hr.lhs,
                  "lhs = " + fmt(hr.lhs) + ", rhs = " + fmt(hr.rhs));
    }

    add_check("positivity_clamps", hist.clamp_count() == 0,
              -static_cast<double>(hist.clamp_count()),
              "positivity floor clamp events");
    add_check("flow_guard", hist.max_abs_phi() <= kPhiGuard,
              kPhiGuard - hist.max_abs_phi(), "sup |phi| over the run");

    report.exit_code = report.all_pass() ? 0 : 2;

    const std::string dir = resolve_output_dir(config, opts);
    std::filesystem::create_directories(dir);
    write_text_file(dir + "/report.json", report.to_json());
    emit_plotdata(report, dir);
    return report;
}

}  // namespace liylab

#include "liylab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace liylab {

using nlohmann::json;

namespace {

GeneratorSpec parse_generator(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError(where + ": generator must be an object with a 'kind'");
    GeneratorSpec s;
    try {
        s.kind = gen_kind_from_name(j.at("kind").get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + ": " + e.what());
    }
    auto num = [&](const char* key, double dflt) {
        return j.contains(key) ? j.at(key).get<double>() : dflt;
    };
    s.value = num("value", 0.0);
    s.amplitude = num("amplitude", 0.0);
    s.offset = num("offset", 0.0);
    s.phase = num("phase", 0.0);
    s.width = num("width", 0.01);
    s.decay_rate = num("decay_rate", 0.0);
    if (j.contains("modes")) {
        const auto& m = j.at("modes");
        if (!m.is_array() || m.empty() || m.size() > 2)
            throw ConfigError(where + ": 'modes' must be a 1- or 2-element array");
        s.modes[0] = m[0].get<int>();
        s.modes[1] = m.size() > 1 ? m[1].get<int>() : 0;
    }
    if (j.contains("center")) {
        const auto& c = j.at("center");
        if (!c.is_array() || c.empty() || c.size() > 2)
            throw ConfigError(where + ": 'center' must be a 1- or 2-element array");
        s.center[0] = c[0].get<double>();
        s.center[1] = c.size() > 1 ? c[1].get<double>() : 0.0;
    }
    if (s.kind == GenKind::periodized_gaussian && !(s.width > 0.0))
        throw ConfigError(where + ": periodized_gaussian needs width > 0");
    return s;
}

GridPoint parse_point(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty() || j.size() > 2)
        throw ConfigError(where + ": grid point must be [ix] or [ix, iy]");
    GridPoint p;
    p.ix = j[0].get<int>();
    p.iy = j.size() > 1 ? j[1].get<int>() : 0;
    return p;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");

    ExperimentConfig c;
    if (!j.contains("version"))
        throw ConfigError("config: mandatory 'version' field is missing");
    c.version = j.at("version").get<int>();
    if (c.version != 1)
        throw ConfigError("config: unsupported version " +
                          std::to_string(c.version) + " (expected 1)");
    c.name = j.value("name", std::string("unnamed"));
    c.description = j.value("description", std::string());

    if (!j.contains("manifold"))
        throw ConfigError("config: 'manifold' section is missing");
    const json& man = j.at("manifold");
    c.dim = man.value("dim", 1);
    if (!man.contains("sizes"))
        throw ConfigError("config: manifold.sizes is missing");
    const auto& sz = man.at("sizes");
    if (!sz.is_array() || sz.size() != static_cast<std::size_t>(c.dim))
        throw ConfigError("config: manifold.sizes must have one entry per axis");
    c.sizes[0] = sz[0].get<int>();
    c.sizes[1] = c.dim == 2 ? sz[1].get<int>() : 1;
    if (man.contains("periods")) {
        const auto& pd = man.at("periods");
        if (!pd.is_array() || pd.size() != static_cast<std::size_t>(c.dim))
            throw ConfigError(
                "config: manifold.periods must have one entry per axis");
        c.periods[0] = pd[0].get<double>();
        c.periods[1] = c.dim == 2 ? pd[1].get<double>() : c.periods[0];
    }

    c.phi0 = j.contains("phi0") ? parse_generator(j.at("phi0"), "phi0")
                                : constant_gen(0.0);

    if (j.contains("flow")) {
        const json& fl = j.at("flow");
        try {
            c.flow.kind = flow_kind_from_name(fl.value("kind", "static"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("flow: ") + e.what());
        }
        if (c.flow.kind == FlowKind::prescribed) {
            if (!fl.contains("psi"))
                throw ConfigError(
                    "flow: prescribed flow needs a 'psi' generator (h = psi g)");
            c.flow.psi = parse_generator(fl.at("psi"), "flow.psi");
        }
    }

    if (!j.contains("pde")) throw ConfigError("config: 'pde' section is missing");
    const json& pde = j.at("pde");
    c.a = pde.value("a", 0.0);
    c.potential = pde.contains("potential")
                      ? parse_generator(pde.at("potential"), "pde.potential")
                      : constant_gen(0.0);
    if (!pde.contains("u0")) throw ConfigError("config: pde.u0 is missing");
    c.u0 = parse_generator(pde.at("u0"), "pde.u0");

    if (!j.contains("time")) throw ConfigError("config: 'time' section is missing");
    const json& tm = j.at("time");
    c.dt = tm.value("dt", 0.0);
    c.t_end = tm.value("t_end", 0.0);
    c.record_stride = tm.value("record_stride", 1);

    if (j.contains("liyau")) {
        const json& ly = j.at("liyau");
        c.liyau.alpha = ly.value("alpha", 2.0);
        c.liyau.p = ly.value("p", 2.0 * c.liyau.alpha);
        if (ly.contains("q") && ly.at("q").is_string()) {
            const std::string qs = ly.at("q").get<std::string>();
            if (qs != "inf")
                throw ConfigError("liyau.q: only the string 'inf' is accepted");
            c.liyau.q = std::numeric_limits<double>::infinity();
        } else {
            c.liyau.q = ly.value("q", 2.0 * c.liyau.alpha);
        }
        c.liyau.slack = ly.value("slack", 1.05);
    }

    if (j.contains("harnack")) {
        const json& hq = j.at("harnack");
        if (!hq.is_array()) throw ConfigError("config: 'harnack' must be an array");
        int auto_id = 0;
        for (const auto& e : hq) {
            HarnackQueryConfig q;
            q.id = e.value("id", "q" + std::to_string(auto_id));
            ++auto_id;
            q.x1 = parse_point(e.at("x1"), "harnack.x1");
            q.x2 = parse_point(e.at("x2"), "harnack.x2");
            q.t1 = e.at("t1").get<double>();
            q.t2 = e.at("t2").get<double>();
            q.c12 = e.value("c12", 0.0);
            c.harnack.push_back(q);
        }
    }

    if (j.contains("strict_thresholds")) {
        for (const auto& [k, v] : j.at("strict_thresholds").items())
            c.strict_thresholds[k] = v.get<double>();
    }
    c.seed = j.value("seed", 0UL);
    if (j.contains("output") && !j.at("output").is_null())
        c.output = j.at("output").get<std::string>();

    // canonical echo: the parsed object re-serialized with sorted keys,
    // output overrides removed
    json echo = j;
    echo.erase("output");
    c.canonical_json = echo.dump(2);

    c.validate();
    return c;
}

void ExperimentConfig::validate() const {
    try {
        liyau.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("liyau: ") + e.what());
    }
    ManifoldGrid g;
    try {
        g = grid();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("manifold: ") + e.what());
    }
    PDEProblem p;
    try {
        p = problem();
        p.validate();
    } catch (const GridMismatchError& e) {
        throw ConfigError(std::string("pde: ") + e.what());
    } catch (const DataError& e) {
        throw ConfigError(std::string("pde: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("pde: ") + e.what());
    }
    // time-derivative stencils need five recorded snapshots
    const long long steps = std::llround(t_end / dt);
    if (steps / record_stride < 4)
        throw ConfigError(
            "time: need at least 4 recorded steps (t_end/dt/record_stride >= "
            "4) for the monitor time stencils");
    for (const auto& q : harnack) {
        if (!(q.t1 > 0.0) || q.t1 > q.t2)
            throw ConfigError("harnack '" + q.id + "': need 0 < t1 <= t2");
        if (q.t2 > t_end + 1e-12)
            throw ConfigError("harnack '" + q.id + "': t2 exceeds t_end");
        if (q.c12 < 0.0)
            throw ConfigError("harnack '" + q.id + "': c12 must be >= 0");
        auto on_lattice = [&](double t) {
            const double steps = t / (dt * record_stride);
            return std::abs(steps - std::llround(steps)) <=
                   1e-6 * std::max(1.0, steps);
        };
        if (!on_lattice(q.t1) || !on_lattice(q.t2))
            throw ConfigError("harnack '" + q.id +
                              "': t1/t2 must land on the snapshot lattice (dt * "
                              "record_stride)");
    }
}

PDEProblem ExperimentConfig::problem() const {
    PDEProblem p;
    p.grid = grid();
    p.phi0 = evaluate(phi0, p.grid, 0.0);
    p.flow = flow;
    p.a = a;
    p.potential = potential;
    p.u0 = evaluate(u0, p.grid, 0.0);
    p.t_end = t_end;
    p.dt = dt;
    p.record_stride = record_stride;
    return p;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::optional<ExperimentConfig> find_bundled(const std::string& name) {
    for (const auto& e : experiment_catalog())
        if (e.name == name) return parse_config(e.json_text);
    return std::nullopt;
}

}  // namespace liylab

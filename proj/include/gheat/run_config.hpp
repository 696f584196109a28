#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gheat/curvature.hpp"
#include "gheat/graph_io.hpp"
#include "gheat/heat_kernel.hpp"
#include "gheat/picard.hpp"
#include "gheat/semilinear.hpp"

namespace gheat {

enum class Command { graph, kernel, curvature, simulate, sweep, picard };

inline std::string_view to_string(Command c) {
    switch (c) {
        case Command::graph: return "graph";
        case Command::kernel: return "kernel";
        case Command::curvature: return "curvature";
        case Command::simulate: return "simulate";
        case Command::sweep: return "sweep";
        case Command::picard: return "picard";
    }
    return "unknown";
}

/// Exactly one of builder/path describes where the graph comes from.
struct GraphSource {
    std::string builder;  ///< cycle | complete | path | torus
    int size = 0;         ///< vertex count, or torus side
    MeasureMode measure = MeasureMode::normalized;
    std::filesystem::path file;

    Graph build() const {
        if (!file.empty()) return load_graph(file);
        if (builder == "cycle") return build_cycle(size, measure);
        if (builder == "complete") return build_complete(size, measure);
        if (builder == "path") return build_path(size, measure);
        if (builder == "torus") return build_lattice_torus(size, measure);
        fail(errc::invalid_parameter, "unknown graph builder '" + builder + "'");
    }
};

/// Initial data recipes: explicit values, a constant, the indexed ramp
/// a(x) = (x+1)*scale, or the small-data profile delta * p(gamma,e,.)
/// (the latter only in the fixed-point command, which has gamma and e).
struct InitialSpec {
    enum class Kind { values, constant, indexed, delta_weight };
    Kind kind = Kind::constant;
    std::vector<double> values;
    double value = 0.0;
    double scale = 1.0;
    double delta = 0.0;

    Field materialize(const Graph& g) const {
        const int n = g.vertex_count();
        Field a(n);
        switch (kind) {
            case Kind::values:
                require(static_cast<int>(values.size()) == n, errc::dimension_mismatch,
                        "initial data has " + std::to_string(values.size()) +
                            " entries for " + std::to_string(n) + " vertices");
                for (int x = 0; x < n; ++x) a[x] = values[x];
                return a;
            case Kind::constant:
                a.setConstant(value);
                return a;
            case Kind::indexed:
                for (int x = 0; x < n; ++x) a[x] = scale * (x + 1);
                return a;
            case Kind::delta_weight:
                fail(errc::invalid_parameter,
                     "delta_weight initial data requires the fixed-point command context");
        }
        fail(errc::invalid_parameter, "unset initial data");
    }
};

struct GraphParams {
    std::string save = "graph.json";
    bool fit_volume = false;
    int volume_r_min = 1;
    int volume_r_max = 2;
    std::vector<int> volume_centers;
};

struct KernelParams {
    std::vector<double> times;
    bool axioms = true;
    int size_cap = HeatKernelOperator::default_size_cap;
    std::vector<BoundRequest> bounds;
};

struct CurvatureParams {
    CurvatureCondition condition = CurvatureCondition::cde_prime;
    double n = 0.0;
    double K = 0.0;
    long budget = 10000;
    FalsifierOptions options;
};

struct SimulateParams {
    double alpha = 1.0;
    InitialSpec initial;
    std::optional<int> base_vertex;
    IntegrationControl control;
    double decay_factor = 0.9;
    bool use_spread = false;
};

struct SweepParams {
    std::vector<double> alphas;
    std::vector<double> scales;
    InitialSpec initial;
    IntegrationControl control;
    int volume_r_max = 2;
    std::vector<int> volume_centers;
    double decay_factor = 0.9;
};

struct PicardParams {
    double alpha = 3.0;
    double gamma = 1.0;
    InitialSpec initial;
    TimeGrid grid;
    int max_iter = 60;
    double tol = 1e-12;
    std::optional<int> base_vertex;
    bool crosscheck = false;
};

struct RunConfig {
    Command command = Command::simulate;
    GraphSource graph;
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 0;

    GraphParams graph_params;
    KernelParams kernel;
    CurvatureParams curvature;
    SimulateParams simulate;
    SweepParams sweep;
    PicardParams picard;
};

namespace cfg_detail {

using nlohmann::json;

inline void check_keys(const json& obj, const std::set<std::string>& allowed,
                       const std::string& context) {
    for (const auto& item : obj.items())
        require(allowed.count(item.key()) > 0, errc::malformed_input,
                context + ": unknown key '" + item.key() + "'");
}

inline double num(const json& v, const std::string& context) {
    require(v.is_number(), errc::malformed_input, context + ": expected a number");
    return v.get<double>();
}

inline int integer(const json& v, const std::string& context) {
    require(v.is_number_integer(), errc::malformed_input, context + ": expected an integer");
    return v.get<int>();
}

inline bool boolean(const json& v, const std::string& context) {
    require(v.is_boolean(), errc::malformed_input, context + ": expected a boolean");
    return v.get<bool>();
}

inline std::string text(const json& v, const std::string& context) {
    require(v.is_string(), errc::malformed_input, context + ": expected a string");
    return v.get<std::string>();
}

inline std::vector<double> number_list(const json& v, const std::string& context) {
    require(v.is_array(), errc::malformed_input, context + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(num(e, context));
    return out;
}

inline std::vector<int> int_list(const json& v, const std::string& context) {
    require(v.is_array(), errc::malformed_input, context + ": expected an array of integers");
    std::vector<int> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(integer(e, context));
    return out;
}

/// Either an explicit array, or {"from","to","count","spacing"} with
/// spacing "linear" (default) or "log".
inline std::vector<double> time_list(const json& v, const std::string& context) {
    if (v.is_array()) return number_list(v, context);
    require(v.is_object(), errc::malformed_input,
            context + ": expected an array or a {from,to,count,spacing} object");
    check_keys(v, {"from", "to", "count", "spacing"}, context);
    require(v.contains("from") && v.contains("to") && v.contains("count"),
            errc::malformed_input, context + ": needs from, to and count");
    const double from = num(v["from"], context + ".from");
    const double to = num(v["to"], context + ".to");
    const int count = integer(v["count"], context + ".count");
    std::string spacing = v.contains("spacing") ? text(v["spacing"], context) : "linear";
    require(count >= 1, errc::invalid_parameter, context + ": count must be at least 1");
    require(to >= from, errc::invalid_parameter, context + ": needs to >= from");
    std::vector<double> out;
    out.reserve(count);
    if (count == 1) {
        out.push_back(from);
        return out;
    }
    if (spacing == "linear") {
        for (int i = 0; i < count; ++i)
            out.push_back(from + (to - from) * i / double(count - 1));
    } else if (spacing == "log") {
        require(from > 0.0, errc::invalid_parameter,
                context + ": log spacing needs from > 0");
        const double r = std::log(to / from);
        for (int i = 0; i < count; ++i)
            out.push_back(from * std::exp(r * i / double(count - 1)));
    } else {
        fail(errc::malformed_input, context + ": spacing must be linear or log");
    }
    return out;
}

inline InitialSpec initial_spec(const json& v, const std::string& context) {
    InitialSpec spec;
    if (v.is_array()) {
        spec.kind = InitialSpec::Kind::values;
        spec.values = number_list(v, context);
        return spec;
    }
    require(v.is_object(), errc::malformed_input,
            context + ": expected an array or a typed object");
    check_keys(v, {"type", "value", "scale", "delta"}, context);
    const std::string type = text(v.contains("type") ? v["type"] : json("missing"), context);
    if (type == "constant") {
        spec.kind = InitialSpec::Kind::constant;
        require(v.contains("value"), errc::malformed_input, context + ": constant needs value");
        spec.value = num(v["value"], context + ".value");
    } else if (type == "indexed") {
        spec.kind = InitialSpec::Kind::indexed;
        spec.scale = v.contains("scale") ? num(v["scale"], context + ".scale") : 1.0;
    } else if (type == "delta_weight") {
        spec.kind = InitialSpec::Kind::delta_weight;
        require(v.contains("delta"), errc::malformed_input,
                context + ": delta_weight needs delta");
        spec.delta = num(v["delta"], context + ".delta");
    } else {
        fail(errc::malformed_input,
             context + ": initial type must be constant, indexed or delta_weight");
    }
    return spec;
}

inline GraphSource graph_source(const json& v) {
    require(v.is_object(), errc::malformed_input, "graph: expected an object");
    check_keys(v, {"builder", "n", "side", "measure", "path"}, "graph");
    GraphSource src;
    const bool has_builder = v.contains("builder");
    const bool has_path = v.contains("path");
    require(has_builder != has_path, errc::invalid_parameter,
            "graph: exactly one of builder/path must be given");
    if (has_path) {
        src.file = text(v["path"], "graph.path");
        require(!v.contains("n") && !v.contains("side") && !v.contains("measure"),
                errc::invalid_parameter, "graph: file path takes no builder parameters");
        return src;
    }
    src.builder = text(v["builder"], "graph.builder");
    require(v.contains("n") || v.contains("side"), errc::malformed_input,
            "graph: builder needs n (or side for torus)");
    require(!(v.contains("n") && v.contains("side")), errc::invalid_parameter,
            "graph: give either n or side, not both");
    src.size = integer(v.contains("n") ? v["n"] : v["side"], "graph.n");
    if (v.contains("measure")) {
        const std::string m = text(v["measure"], "graph.measure");
        if (m == "unit")
            src.measure = MeasureMode::unit;
        else if (m == "normalized")
            src.measure = MeasureMode::normalized;
        else
            fail(errc::malformed_input, "graph.measure must be unit or normalized");
    }
    return src;
}

inline IntegrationControl control_block(const json& v, const std::string& context) {
    IntegrationControl c;
    if (v.is_null()) return c;
    require(v.is_object(), errc::malformed_input, context + ": expected an object");
    check_keys(v,
               {"rel_tol", "abs_tol", "horizon", "blow_up_threshold", "min_step",
                "initial_step", "sample_times", "sample_count"},
               context);
    if (v.contains("rel_tol")) c.rel_tol = num(v["rel_tol"], context + ".rel_tol");
    if (v.contains("abs_tol")) c.abs_tol = num(v["abs_tol"], context + ".abs_tol");
    if (v.contains("horizon")) c.horizon = num(v["horizon"], context + ".horizon");
    if (v.contains("blow_up_threshold"))
        c.blow_up_threshold = num(v["blow_up_threshold"], context + ".blow_up_threshold");
    if (v.contains("min_step")) c.min_step = num(v["min_step"], context + ".min_step");
    if (v.contains("initial_step"))
        c.initial_step = num(v["initial_step"], context + ".initial_step");
    require(!(v.contains("sample_times") && v.contains("sample_count")),
            errc::invalid_parameter, context + ": give sample_times or sample_count, not both");
    if (v.contains("sample_times"))
        c.sample_times = number_list(v["sample_times"], context + ".sample_times");
    if (v.contains("sample_count")) {
        const int count = integer(v["sample_count"], context + ".sample_count");
        require(count >= 1, errc::invalid_parameter, context + ": sample_count must be >= 1");
        for (int i = 1; i <= count; ++i) c.sample_times.push_back(c.horizon * i / count);
    }
    return c;
}

inline BoundRequest bound_request(const json& v, const std::string& context) {
    require(v.is_object(), errc::malformed_input, context + ": expected an object");
    check_keys(v,
               {"id", "times", "centers", "diagonal_only", "c2", "c3", "n_exp", "c", "c0",
                "wrap_length", "collect_samples"},
               context);
    require(v.contains("id") && v.contains("times"), errc::malformed_input,
            context + ": needs id and times");
    BoundRequest req;
    const std::string id = text(v["id"], context + ".id");
    if (id == "diagonal_upper")
        req.id = BoundId::diagonal_upper;
    else if (id == "gaussian_lower")
        req.id = BoundId::gaussian_lower;
    else if (id == "ondiagonal_lower")
        req.id = BoundId::ondiag_lower;
    else if (id == "volume_lower")
        req.id = BoundId::volume_lower;
    else
        fail(errc::malformed_input, context + ": unknown bound id '" + id + "'");
    req.times = time_list(v["times"], context + ".times");
    if (v.contains("centers")) req.centers = int_list(v["centers"], context + ".centers");
    if (v.contains("diagonal_only"))
        req.diagonal_only = boolean(v["diagonal_only"], context + ".diagonal_only");
    if (v.contains("c2")) req.c2 = num(v["c2"], context + ".c2");
    if (v.contains("c3")) req.c3 = num(v["c3"], context + ".c3");
    if (v.contains("n_exp")) req.n_exp = num(v["n_exp"], context + ".n_exp");
    if (v.contains("c")) req.c = num(v["c"], context + ".c");
    if (v.contains("c0")) req.c0 = num(v["c0"], context + ".c0");
    if (v.contains("wrap_length"))
        req.wrap_length = num(v["wrap_length"], context + ".wrap_length");
    if (v.contains("collect_samples"))
        req.collect_samples = boolean(v["collect_samples"], context + ".collect_samples");
    return req;
}

inline TimeGrid grid_block(const json& v, const std::string& context) {
    require(v.is_object(), errc::malformed_input, context + ": expected an object");
    check_keys(v, {"horizon", "intervals", "quadrature", "growth"}, context);
    require(v.contains("horizon") && v.contains("intervals"), errc::malformed_input,
            context + ": needs horizon and intervals");
    const double horizon = num(v["horizon"], context + ".horizon");
    const int intervals = integer(v["intervals"], context + ".intervals");
    Quadrature q = Quadrature::trapezoid;
    if (v.contains("quadrature")) {
        const std::string name = text(v["quadrature"], context + ".quadrature");
        if (name == "trapezoid")
            q = Quadrature::trapezoid;
        else if (name == "midpoint")
            q = Quadrature::midpoint;
        else
            fail(errc::malformed_input, context + ": quadrature must be trapezoid or midpoint");
    }
    if (v.contains("growth"))
        return TimeGrid::geometric(horizon, intervals, num(v["growth"], context + ".growth"), q);
    return TimeGrid::uniform(horizon, intervals, q);
}

/// Apply one "--override key.path=value" onto the parsed document.
inline void apply_override(json& doc, const std::string& entry) {
    const std::size_t eq = entry.find('=');
    require(eq != std::string::npos && eq > 0, errc::invalid_parameter,
            "override must look like key=value, got '" + entry + "'");
    const std::string path = entry.substr(0, eq);
    const std::string raw = entry.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;  // plain string
    }
    json* cursor = &doc;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        require(!key.empty(), errc::invalid_parameter,
                "override path has an empty segment: '" + path + "'");
        if (dot == std::string::npos) {
            (*cursor)[key] = value;
            return;
        }
        if (!cursor->contains(key) || !(*cursor)[key].is_object()) (*cursor)[key] = json::object();
        cursor = &(*cursor)[key];
        start = dot + 1;
    }
}

}  // namespace cfg_detail

/**
 * Parse and validate a run configuration: one command, one graph
 * source, one command-specific parameter block. Unknown keys anywhere
 * are rejected, overrides are applied before validation, and parameter
 * preconditions that do not need the graph are enforced here.
 */
inline RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides,
                              const std::string& origin = "<config>") {
    using cfg_detail::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(errc::parse_error, origin + ": " + e.what());
    }
    require(doc.is_object(), errc::malformed_input, origin + ": top level must be an object");
    for (const std::string& entry : overrides) cfg_detail::apply_override(doc, entry);

    require(doc.contains("command"), errc::malformed_input, origin + ": missing 'command'");
    const std::string cmd = cfg_detail::text(doc["command"], "command");

    RunConfig config;
    if (cmd == "graph")
        config.command = Command::graph;
    else if (cmd == "kernel")
        config.command = Command::kernel;
    else if (cmd == "curvature")
        config.command = Command::curvature;
    else if (cmd == "simulate")
        config.command = Command::simulate;
    else if (cmd == "sweep")
        config.command = Command::sweep;
    else if (cmd == "picard")
        config.command = Command::picard;
    else
        fail(errc::malformed_input, origin + ": unknown command '" + cmd + "'");

    cfg_detail::check_keys(doc, {"command", "graph", "out", "seed", "params"}, origin);
    require(doc.contains("graph"), errc::malformed_input, origin + ": missing 'graph'");
    config.graph = cfg_detail::graph_source(doc["graph"]);
    if (doc.contains("out")) config.out_dir = cfg_detail::text(doc["out"], "out");
    if (doc.contains("seed")) {
        require(doc["seed"].is_number_integer() && doc["seed"].get<long long>() >= 0,
                errc::malformed_input, origin + ": seed must be a nonnegative integer");
        config.seed = doc["seed"].get<std::uint64_t>();
    }

    const json block = doc.contains("params") ? doc["params"] : json::object();
    require(block.is_object(), errc::malformed_input, "params: expected an object");

    switch (config.command) {
        case Command::graph: {
            cfg_detail::check_keys(block, {"save", "volume_fit"}, cmd);
            if (block.contains("save"))
                config.graph_params.save = cfg_detail::text(block["save"], "graph.save");
            if (block.contains("volume_fit")) {
                const json& vf = block["volume_fit"];
                cfg_detail::check_keys(vf, {"r_min", "r_max", "centers"}, "graph.volume_fit");
                config.graph_params.fit_volume = true;
                if (vf.contains("r_min"))
                    config.graph_params.volume_r_min =
                        cfg_detail::integer(vf["r_min"], "volume_fit.r_min");
                require(vf.contains("r_max"), errc::malformed_input,
                        "graph.volume_fit: needs r_max");
                config.graph_params.volume_r_max =
                    cfg_detail::integer(vf["r_max"], "volume_fit.r_max");
                if (vf.contains("centers"))
                    config.graph_params.volume_centers =
                        cfg_detail::int_list(vf["centers"], "volume_fit.centers");
            }
            break;
        }
        case Command::kernel: {
            cfg_detail::check_keys(block, {"times", "axioms", "size_cap", "bounds"}, cmd);
            require(block.contains("times"), errc::malformed_input, "kernel: needs times");
            config.kernel.times = cfg_detail::time_list(block["times"], "kernel.times");
            if (block.contains("axioms"))
                config.kernel.axioms = cfg_detail::boolean(block["axioms"], "kernel.axioms");
            if (block.contains("size_cap"))
                config.kernel.size_cap = cfg_detail::integer(block["size_cap"], "kernel.size_cap");
            if (block.contains("bounds")) {
                require(block["bounds"].is_array(), errc::malformed_input,
                        "kernel.bounds: expected an array");
                int idx = 0;
                for (const auto& b : block["bounds"])
                    config.kernel.bounds.push_back(cfg_detail::bound_request(
                        b, "kernel.bounds[" + std::to_string(idx++) + "]"));
            }
            break;
        }
        case Command::curvature: {
            cfg_detail::check_keys(
                block, {"condition", "n", "k", "budget", "amplitude", "descent_sweeps",
                        "tolerance_scale"},
                cmd);
            require(block.contains("condition") && block.contains("n"), errc::malformed_input,
                    "curvature: needs condition and n");
            const std::string cond = cfg_detail::text(block["condition"], "curvature.condition");
            if (cond == "cde")
                config.curvature.condition = CurvatureCondition::cde;
            else if (cond == "cde_prime")
                config.curvature.condition = CurvatureCondition::cde_prime;
            else
                fail(errc::malformed_input, "curvature.condition must be cde or cde_prime");
            config.curvature.n = cfg_detail::num(block["n"], "curvature.n");
            require(config.curvature.n > 0.0, errc::invalid_parameter,
                    "curvature.n must be positive");
            if (block.contains("k")) config.curvature.K = cfg_detail::num(block["k"], "curvature.k");
            if (block.contains("budget")) {
                config.curvature.budget = cfg_detail::integer(block["budget"], "curvature.budget");
                require(config.curvature.budget >= 1, errc::invalid_parameter,
                        "curvature.budget must be at least 1");
            }
            if (block.contains("amplitude"))
                config.curvature.options.amplitude =
                    cfg_detail::num(block["amplitude"], "curvature.amplitude");
            if (block.contains("descent_sweeps"))
                config.curvature.options.descent_sweeps =
                    cfg_detail::integer(block["descent_sweeps"], "curvature.descent_sweeps");
            if (block.contains("tolerance_scale"))
                config.curvature.options.tolerance_scale =
                    cfg_detail::num(block["tolerance_scale"], "curvature.tolerance_scale");
            break;
        }
        case Command::simulate: {
            cfg_detail::check_keys(
                block, {"alpha", "initial", "base_vertex", "control", "decay_factor",
                        "use_spread"},
                cmd);
            require(block.contains("alpha") && block.contains("initial"), errc::malformed_input,
                    "simulate: needs alpha and initial");
            config.simulate.alpha = cfg_detail::num(block["alpha"], "simulate.alpha");
            require(config.simulate.alpha > 0.0, errc::invalid_parameter,
                    "simulate.alpha must be positive");
            config.simulate.initial =
                cfg_detail::initial_spec(block["initial"], "simulate.initial");
            require(config.simulate.initial.kind != InitialSpec::Kind::delta_weight,
                    errc::invalid_parameter,
                    "simulate.initial: delta_weight is only available in the picard command");
            if (block.contains("base_vertex"))
                config.simulate.base_vertex =
                    cfg_detail::integer(block["base_vertex"], "simulate.base_vertex");
            config.simulate.control = cfg_detail::control_block(
                block.contains("control") ? block["control"] : nlohmann::json(),
                "simulate.control");
            if (block.contains("decay_factor"))
                config.simulate.decay_factor =
                    cfg_detail::num(block["decay_factor"], "simulate.decay_factor");
            if (block.contains("use_spread"))
                config.simulate.use_spread =
                    cfg_detail::boolean(block["use_spread"], "simulate.use_spread");
            break;
        }
        case Command::sweep: {
            cfg_detail::check_keys(block,
                                   {"alphas", "scales", "initial", "control", "volume_r_max",
                                    "volume_centers", "decay_factor"},
                                   cmd);
            require(block.contains("alphas") && block.contains("scales") &&
                        block.contains("initial"),
                    errc::malformed_input, "sweep: needs alphas, scales and initial");
            config.sweep.alphas = cfg_detail::number_list(block["alphas"], "sweep.alphas");
            config.sweep.scales = cfg_detail::number_list(block["scales"], "sweep.scales");
            config.sweep.initial = cfg_detail::initial_spec(block["initial"], "sweep.initial");
            require(config.sweep.initial.kind != InitialSpec::Kind::delta_weight,
                    errc::invalid_parameter,
                    "sweep.initial: delta_weight is only available in the picard command");
            config.sweep.control = cfg_detail::control_block(
                block.contains("control") ? block["control"] : nlohmann::json(),
                "sweep.control");
            if (block.contains("volume_r_max"))
                config.sweep.volume_r_max =
                    cfg_detail::integer(block["volume_r_max"], "sweep.volume_r_max");
            if (block.contains("volume_centers"))
                config.sweep.volume_centers =
                    cfg_detail::int_list(block["volume_centers"], "sweep.volume_centers");
            if (block.contains("decay_factor"))
                config.sweep.decay_factor =
                    cfg_detail::num(block["decay_factor"], "sweep.decay_factor");
            break;
        }
        case Command::picard: {
            cfg_detail::check_keys(block,
                                   {"alpha", "gamma", "initial", "grid", "max_iter", "tol",
                                    "base_vertex", "crosscheck"},
                                   cmd);
            require(block.contains("alpha") && block.contains("initial") &&
                        block.contains("grid"),
                    errc::malformed_input, "picard: needs alpha, initial and grid");
            config.picard.alpha = cfg_detail::num(block["alpha"], "picard.alpha");
            require(config.picard.alpha > 0.0, errc::invalid_parameter,
                    "picard.alpha must be positive");
            if (block.contains("gamma"))
                config.picard.gamma = cfg_detail::num(block["gamma"], "picard.gamma");
            require(config.picard.gamma > 0.0, errc::invalid_parameter,
                    "picard.gamma must be positive");
            config.picard.initial = cfg_detail::initial_spec(block["initial"], "picard.initial");
            config.picard.grid = cfg_detail::grid_block(block["grid"], "picard.grid");
            if (block.contains("max_iter"))
                config.picard.max_iter = cfg_detail::integer(block["max_iter"], "picard.max_iter");
            if (block.contains("tol"))
                config.picard.tol = cfg_detail::num(block["tol"], "picard.tol");
            if (block.contains("base_vertex"))
                config.picard.base_vertex =
                    cfg_detail::integer(block["base_vertex"], "picard.base_vertex");
            if (block.contains("crosscheck"))
                config.picard.crosscheck =
                    cfg_detail::boolean(block["crosscheck"], "picard.crosscheck");
            if (config.picard.initial.kind == InitialSpec::Kind::delta_weight)
                require(config.picard.base_vertex.has_value(), errc::invalid_parameter,
                        "picard: delta_weight initial data needs an explicit base_vertex");
            break;
        }
    }
    return config;
}

inline RunConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), overrides, path.string());
}

}  // namespace gheat

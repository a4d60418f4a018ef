#include "wwt/app/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace wwt::app {

namespace {

constexpr double pi = 3.14159265358979323846;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw SchemaError(where + ": " + what);
}

/// Object reader that rejects unknown keys.
class Fields {
public:
    Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) fail(where_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    const json& at(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key)) fail(where_, "missing field '" + key + "'");
        return j_.at(key);
    }

    double number(const std::string& key) {
        const json& v = at(key);
        if (!v.is_number()) fail(path(key), "expected a number");
        double x = v.get<double>();
        if (!std::isfinite(x)) fail(path(key), "must be finite");
        return x;
    }

    double number(const std::string& key, double fallback) {
        seen_.insert(key);
        return has(key) ? number(key) : fallback;
    }

    int integer(const std::string& key, int fallback) {
        seen_.insert(key);
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number_integer()) fail(path(key), "expected an integer");
        return v.get<int>();
    }

    std::string string(const std::string& key) {
        const json& v = at(key);
        if (!v.is_string()) fail(path(key), "expected a string");
        return v.get<std::string>();
    }

    std::string string(const std::string& key, const std::string& fallback) {
        seen_.insert(key);
        return has(key) ? string(key) : fallback;
    }

    std::vector<double> numbers(const std::string& key) {
        const json& v = at(key);
        if (!v.is_array()) fail(path(key), "expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) fail(path(key), "expected an array of numbers");
            double x = e.get<double>();
            if (!std::isfinite(x)) fail(path(key), "entries must be finite");
            out.push_back(x);
        }
        return out;
    }

    void ignore(const std::string& key) { seen_.insert(key); }

    void done() const {
        for (const auto& [k, v] : j_.items())
            if (!seen_.count(k)) fail(where_, "unknown field '" + k + "'");
    }

    std::string path(const std::string& key) const { return where_ + "." + key; }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

json profile_defaults(const json& p, const std::string& where) {
    if (p.is_number()) return {{"family", "constant"}, {"value", p.get<double>()}};
    Fields f(p, where);
    std::string fam = f.string("family");
    json out{{"family", fam}};
    if (fam == "constant") {
        out["value"] = f.number("value");
    } else if (fam == "flat") {
        out["gamma"] = f.number("gamma");
    } else if (fam == "linear") {
        out["slope"] = f.number("slope");
        out["offset"] = f.number("offset", 0.0);
    } else if (fam == "lorentzian") {
        out["area"] = f.number("area");
        out["center"] = f.number("center");
        out["width"] = f.number("width");
    } else if (fam == "lorentzian_sum") {
        out["centers"] = f.numbers("centers");
        out["weights"] = f.numbers("weights");
        out["width"] = f.number("width");
        out["scale"] = f.number("scale", 1.0);
    } else if (fam == "tabulated") {
        out["x"] = f.numbers("x");
        out["y"] = f.numbers("y");
        std::string in = f.string("interpolation", "monotone_cubic");
        std::string ex = f.string("extrapolation", "error");
        if (in != "monotone_cubic" && in != "linear") fail(f.path("interpolation"), "unknown value '" + in + "'");
        if (ex != "error" && ex != "constant") fail(f.path("extrapolation"), "unknown value '" + ex + "'");
        out["interpolation"] = in;
        out["extrapolation"] = ex;
    } else {
        fail(f.path("family"), "unknown profile family '" + fam + "'");
    }
    f.done();
    return out;
}

Profile profile_from(const json& p, const std::string& where) {
    std::string fam = p.at("family").get<std::string>();
    if (fam == "constant") return Constant{p.at("value").get<double>()};
    if (fam == "flat") return Constant{p.at("gamma").get<double>() / pi};
    if (fam == "linear") return Linear{p.at("slope").get<double>(), p.at("offset").get<double>()};
    if (fam == "lorentzian")
        return Lorentzian{p.at("area").get<double>(), p.at("center").get<double>(), p.at("width").get<double>()};
    if (fam == "lorentzian_sum") {
        LorentzianSum s{p.at("centers").get<std::vector<double>>(), p.at("weights").get<std::vector<double>>(),
                        p.at("width").get<double>(), p.at("scale").get<double>()};
        if (s.centers.size() != s.weights.size() || s.centers.empty())
            fail(where, "centers and weights must be non-empty and of equal length");
        return s;
    }
    auto in = p.at("interpolation") == "linear" ? Interpolation::linear : Interpolation::monotone_cubic;
    auto ex = p.at("extrapolation") == "constant" ? Extrapolation::constant : Extrapolation::error;
    try {
        return Tabulated(p.at("x").get<std::vector<double>>(), p.at("y").get<std::vector<double>>(), in, ex);
    } catch (const DomainError& e) {
        fail(where, e.what());
    }
}

json profile_to_json(const Profile& p) {
    return std::visit(
        [](const auto& k) -> json {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Constant>) {
                return {{"family", "constant"}, {"value", k.value}};
            } else if constexpr (std::is_same_v<K, Linear>) {
                return {{"family", "linear"}, {"slope", k.slope}, {"offset", k.offset}};
            } else if constexpr (std::is_same_v<K, Lorentzian>) {
                return {{"family", "lorentzian"}, {"area", k.area}, {"center", k.center}, {"width", k.width}};
            } else if constexpr (std::is_same_v<K, LorentzianSum>) {
                return {{"family", "lorentzian_sum"}, {"centers", k.centers}, {"weights", k.weights},
                        {"width", k.width}, {"scale", k.scale}};
            } else {
                return {{"family", "tabulated"},
                        {"x", k.x()},
                        {"y", k.y()},
                        {"interpolation", k.interpolation() == Interpolation::linear ? "linear" : "monotone_cubic"},
                        {"extrapolation", k.extrapolation() == Extrapolation::constant ? "constant" : "error"}};
            }
        },
        p.kind());
}

json normalize_model(const json& m, const std::filesystem::path& base_dir) {
    Fields f(m, "model");
    std::string type = f.string("type", "continuum");
    json out{{"type", type}};
    if (type == "continuum") {
        out["omega1"] = f.number("omega1");
        out["omega2"] = f.number("omega2", out["omega1"].get<double>());
        std::vector<double> band = f.numbers("band");
        if (band.size() != 2) fail("model.band", "expected [lo, hi]");
        out["band"] = band;
        out["density"] = profile_defaults(f.at("density"), "model.density");
        f.ignore("density2");
        out["density2"] = f.has("density2") ? profile_defaults(m.at("density2"), "model.density2") : json(nullptr);
        f.ignore("phase");
        out["phase"] = f.has("phase") ? profile_defaults(m.at("phase"), "model.phase")
                                      : json{{"family", "constant"}, {"value", 0.0}};
        f.ignore("sink_continuum");
        out["sink_continuum"] = f.has("sink_continuum")
                                    ? profile_defaults(m.at("sink_continuum"), "model.sink_continuum")
                                    : json{{"family", "constant"}, {"value", 0.0}};
        out["sink2"] = f.number("sink2", 0.0);
        out["tol_orth"] = f.number("tol_orth", 0.02);
    } else if (type == "network") {
        if (f.has("file") == f.has("network")) fail("model", "give exactly one of 'file' or 'network'");
        if (f.has("file")) {
            std::filesystem::path file = f.string("file");
            if (file.is_relative()) file = base_dir / file;
            out["file"] = std::filesystem::absolute(file).lexically_normal().string();
        } else {
            out["network"] = f.at("network");
        }
        f.ignore("file");
        f.ignore("network");
        out["eta"] = f.number("eta");
        if (!(out["eta"].get<double>() > 0.0)) fail("model.eta", "must be positive");
        out["tol_orth"] = f.number("tol_orth", 0.02);
    } else {
        fail("model.type", "expected 'continuum' or 'network'");
    }
    f.done();
    return out;
}

Pipeline pipeline_from(const std::string& s) {
    if (s == "exact") return Pipeline::exact;
    if (s == "markov") return Pipeline::markov;
    if (s == "oracle") return Pipeline::oracle;
    if (s == "approx") return Pipeline::approx;
    fail("pipeline", "unknown pipeline '" + s + "'");
}

/// Pointer into `model` for a dotted path, or null when it does not name a number.
json* scalar_field(json& model, const std::string& dotted) {
    json* cur = &model;
    std::stringstream ss(dotted);
    std::string part;
    while (std::getline(ss, part, '.')) {
        if (!cur->is_object() || !cur->contains(part)) return nullptr;
        cur = &(*cur)[part];
    }
    return cur->is_number() ? cur : nullptr;
}

}  // namespace

const char* name(Pipeline p) {
    switch (p) {
        case Pipeline::exact: return "exact";
        case Pipeline::markov: return "markov";
        case Pipeline::oracle: return "oracle";
        case Pipeline::approx: return "approx";
    }
    return "?";
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const SchemaError*>(&e) || dynamic_cast<const json::exception*>(&e)) return ExitCode::schema;
    if (dynamic_cast<const NumericalError*>(&e)) return ExitCode::numerical;
    if (dynamic_cast<const ModelError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
        dynamic_cast<const ZeroNormError*>(&e))
        return ExitCode::model;
    return 1;
}

ContinuumSpec parse_continuum(const json& model) {
    json m = normalize_model(model, ".");
    if (m["type"] != "continuum") fail("model.type", "expected 'continuum'");
    ContinuumSpec s;
    s.omega1 = m["omega1"];
    s.omega2 = m["omega2"];
    s.band = Band{m["band"][0], m["band"][1]};
    s.density = profile_from(m["density"], "model.density");
    if (!m["density2"].is_null()) s.density2 = profile_from(m["density2"], "model.density2");
    s.phase = profile_from(m["phase"], "model.phase");
    s.sink_continuum = profile_from(m["sink_continuum"], "model.sink_continuum");
    s.sink2 = m["sink2"];
    s.tol_orth = m["tol_orth"];
    return s;
}

json continuum_to_json(const ContinuumSpec& spec) {
    return {{"type", "continuum"},
            {"omega1", spec.omega1},
            {"omega2", spec.omega2},
            {"band", {spec.band.lo, spec.band.hi}},
            {"density", profile_to_json(spec.density)},
            {"density2", spec.density2 ? profile_to_json(*spec.density2) : json(nullptr)},
            {"phase", profile_to_json(spec.phase)},
            {"sink_continuum", profile_to_json(spec.sink_continuum)},
            {"sink2", spec.sink2},
            {"tol_orth", spec.tol_orth}};
}

DiscreteNetwork parse_network(const json& doc) {
    Fields f(doc, "network");
    std::vector<double> sites = f.numbers("sites");
    std::vector<Hopping> hops;
    const json& hj = f.at("hoppings");
    if (!hj.is_array()) fail("network.hoppings", "expected an array");
    for (std::size_t i = 0; i < hj.size(); ++i) {
        std::string where = "network.hoppings[" + std::to_string(i) + "]";
        Fields h(hj[i], where);
        int k = h.integer("from", 0);
        int l = h.integer("to", 0);
        if (!h.has("from") || !h.has("to")) fail(where, "needs 'from' and 'to'");
        const json& a = h.at("amplitude");
        cplx amp;
        if (a.is_number()) {
            amp = a.get<double>();
        } else if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number()) {
            amp = {a[0].get<double>(), a[1].get<double>()};
        } else {
            fail(h.path("amplitude"), "expected a number or [re, im]");
        }
        h.done();
        hops.push_back({k, l, amp});
    }
    f.done();
    return build_network(sites, hops);
}

DiscreteNetwork load_network(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw SchemaError("cannot open network file " + file.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(file.string() + ": " + e.what());
    }
    return parse_network(doc);
}

Scenario parse_scenario(const json& config, const std::filesystem::path& base_dir) {
    Fields f(config, "config");
    Scenario sc;
    sc.base_dir = base_dir;
    sc.model = normalize_model(f.at("model"), base_dir);

    const json& pj = f.at("pipeline");
    if (!pj.is_array()) fail("config.pipeline", "expected an array");
    if (pj.empty()) fail("config.pipeline", "must name at least one pipeline");
    for (const auto& p : pj) {
        if (!p.is_string()) fail("config.pipeline", "entries must be strings");
        Pipeline pl = pipeline_from(p.get<std::string>());
        for (Pipeline q : sc.pipeline)
            if (q == pl) fail("config.pipeline", std::string("duplicate entry '") + name(pl) + "'");
        sc.pipeline.push_back(pl);
    }

    Fields tg(f.at("time_grid"), "config.time_grid");
    sc.time_grid.t_start = tg.number("t_start");
    sc.time_grid.t_end = tg.number("t_end");
    sc.time_grid.points = tg.integer("points", 0);
    if (!tg.has("points")) fail("config.time_grid", "missing field 'points'");
    tg.done();
    if (sc.time_grid.points < 2) fail("config.time_grid.points", "need at least 2 points");
    if (!(sc.time_grid.t_end > sc.time_grid.t_start)) fail("config.time_grid", "t_end must exceed t_start");
    if (sc.time_grid.t_start < 0.0) fail("config.time_grid.t_start", "must be non-negative");

    f.ignore("solver");
    if (f.has("solver")) {
        Fields s(config.at("solver"), "config.solver");
        sc.solver.laplace_tol = s.number("laplace_tol", sc.solver.laplace_tol);
        sc.solver.amplitude_tol = s.number("amplitude_tol", sc.solver.amplitude_tol);
        sc.solver.markov_tol = s.number("markov_tol", sc.solver.markov_tol);
        sc.solver.oracle_modes = s.integer("oracle_modes", sc.solver.oracle_modes);
        s.done();
        if (!(sc.solver.laplace_tol > 0 && sc.solver.amplitude_tol > 0 && sc.solver.markov_tol > 0))
            fail("config.solver", "tolerances must be positive");
        if (sc.solver.oracle_modes < 10) fail("config.solver.oracle_modes", "need at least 10 modes");
    }

    f.ignore("apet");
    if (f.has("apet")) {
        Fields a(config.at("apet"), "config.apet");
        sc.apet.resonance = a.number("resonance", sc.apet.resonance);
        sc.apet.rates = a.number("rates", sc.apet.rates);
        sc.apet.phase = a.number("phase", sc.apet.phase);
        sc.apet.broadening = a.number("broadening", sc.apet.broadening);
        a.done();
    }

    f.ignore("sweep");
    if (f.has("sweep")) {
        Fields s(config.at("sweep"), "config.sweep");
        Sweep sw{s.string("parameter"), s.numbers("values")};
        s.done();
        if (sw.values.empty()) fail("config.sweep.values", "must not be empty");
        json probe = sc.model;
        if (!scalar_field(probe, sw.parameter))
            fail("config.sweep.parameter", "'" + sw.parameter + "' is not a scalar field of the model");
        sc.sweep = sw;
    }

    sc.output_dir = f.string("output_dir", "wwt_output");
    f.done();
    return sc;
}

Scenario load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw SchemaError("cannot open config file " + file.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(file.string() + ": " + e.what());
    }
    return parse_scenario(doc, std::filesystem::absolute(file).parent_path());
}

json Scenario::resolved() const {
    json p = json::array();
    for (Pipeline q : pipeline) p.push_back(name(q));
    json out{{"model", model},
             {"pipeline", p},
             {"time_grid", {{"t_start", time_grid.t_start}, {"t_end", time_grid.t_end}, {"points", time_grid.points}}},
             {"solver",
              {{"laplace_tol", solver.laplace_tol},
               {"amplitude_tol", solver.amplitude_tol},
               {"markov_tol", solver.markov_tol},
               {"oracle_modes", solver.oracle_modes}}},
             {"apet",
              {{"resonance", apet.resonance},
               {"rates", apet.rates},
               {"phase", apet.phase},
               {"broadening", apet.broadening}}},
             {"sweep", sweep ? json{{"parameter", sweep->parameter}, {"values", sweep->values}} : json(nullptr)},
             {"output_dir", output_dir.string()}};
    return out;
}

namespace detail {

json with_parameter(const json& model, const std::string& dotted, double value) {
    json m = model;
    json* field = scalar_field(m, dotted);
    if (!field) fail("config.sweep.parameter", "'" + dotted + "' is not a scalar field of the model");
    *field = value;
    return m;
}

}  // namespace detail

}  // namespace wwt::app

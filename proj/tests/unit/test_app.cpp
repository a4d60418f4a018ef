#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "../support.hpp"
#include "wwt/app/scenario.hpp"

using namespace wwt;
using app::json;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

json canonical_config() {
    return json::parse(R"({
      "model": {"type": "continuum", "omega1": 1.0, "band": [0.0, 20.0],
                "density": {"family": "flat", "gamma": 0.05},
                "phase": {"family": "linear", "slope": 50.0}},
      "pipeline": ["markov"],
      "time_grid": {"t_start": 0.0, "t_end": 150.0, "points": 151}
    })");
}

fs::path scratch(const std::string& tag) {
    std::random_device rd;
    fs::path p = fs::temp_directory_path() / ("wwt_test_" + tag + "_" + std::to_string(rd()));
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

// Sets WWT_OUTPUT_DIR for the lifetime of the guard.
struct EnvGuard {
    explicit EnvGuard(const fs::path& dir) { ::setenv(app::output_dir_env, dir.c_str(), 1); }
    ~EnvGuard() { ::unsetenv(app::output_dir_env); }
};

void check_schema_error(json cfg) {
    CHECK_THROWS_AS(app::parse_scenario(cfg), app::SchemaError);
}

}  // namespace

TEST_CASE("scenario defaults") {
    app::Scenario sc = app::parse_scenario(canonical_config());
    CHECK(sc.model["omega2"] == 1.0);
    CHECK(sc.model["tol_orth"] == 0.02);
    CHECK(sc.model["sink2"] == 0.0);
    CHECK(sc.output_dir == "wwt_output");
    CHECK(sc.solver.oracle_modes == 2000);
    CHECK(sc.apet.broadening == 2.0);
    CHECK_FALSE(sc.sweep.has_value());
    REQUIRE(sc.pipeline.size() == 1);
    CHECK(sc.pipeline[0] == app::Pipeline::markov);
    CHECK(sc.time_grid.points == 151);

    // the resolved form is a fixed point
    json r = sc.resolved();
    CHECK(app::parse_scenario(r).resolved() == r);

    ContinuumSpec spec = app::parse_continuum(sc.model);
    CHECK(spec.density(3.0) == Approx(0.05 / test::pi));
    CHECK(spec.phase(2.0) == Approx(100.0));
}

TEST_CASE("schema violations") {
    json c = canonical_config();
    c["pipeline"] = json::array();
    check_schema_error(c);
    c["pipeline"] = {"markov", "markov"};
    check_schema_error(c);
    c["pipeline"] = {"markov", "lindblad"};
    check_schema_error(c);

    c = canonical_config();
    c["colour"] = "blue";
    check_schema_error(c);
    c = canonical_config();
    c["model"]["density"]["sigma"] = 1.0;
    check_schema_error(c);
    c = canonical_config();
    c["model"]["density"]["family"] = "gaussian";
    check_schema_error(c);
    c = canonical_config();
    c["model"]["type"] = "lattice";
    check_schema_error(c);
    c = canonical_config();
    c["model"]["band"] = {1.0};
    check_schema_error(c);
    c = canonical_config();
    c["model"]["omega1"] = "one";
    check_schema_error(c);

    c = canonical_config();
    c["time_grid"]["points"] = 1;
    check_schema_error(c);
    c = canonical_config();
    c["time_grid"]["t_end"] = -1.0;
    check_schema_error(c);
    c = canonical_config();
    c["time_grid"].erase("t_end");
    check_schema_error(c);

    c = canonical_config();
    c["sweep"] = {{"parameter", "density.sigma"}, {"values", {1.0}}};
    check_schema_error(c);
    c["sweep"] = {{"parameter", "density.gamma"}, {"values", json::array()}};
    check_schema_error(c);
    c["sweep"] = {{"parameter", "density.gamma"}, {"values", {0.01, 0.02}}};
    CHECK_NOTHROW(app::parse_scenario(c));

    c = canonical_config();
    c["solver"] = {{"oracle_modes", 5}};
    check_schema_error(c);

    json n = canonical_config();
    n["model"] = {{"type", "network"}, {"file", "a.json"}, {"network", {{"sites", {1.0, 1.0}}}}, {"eta", 0.1}};
    check_schema_error(n);
    n["model"] = {{"type", "network"}, {"file", "a.json"}, {"eta", 0.0}};
    check_schema_error(n);

    CHECK_THROWS_AS(app::load_scenario("/nonexistent/config.json"), app::SchemaError);
}

TEST_CASE("profile families") {
    json m = canonical_config()["model"];
    m["density"] = {{"family", "lorentzian"}, {"area", 0.05}, {"center", 1.0}, {"width", 0.5}};
    m["phase"] = {{"family", "tabulated"}, {"x", {0.0, 10.0, 20.0}}, {"y", {0.0, 500.0, 1000.0}},
                  {"interpolation", "linear"}};
    m["tol_orth"] = 1.0;
    ContinuumSpec s = app::parse_continuum(app::parse_scenario({{"model", m},
                                                                  {"pipeline", {"markov"}},
                                                                  {"time_grid", canonical_config()["time_grid"]}})
                                                 .model);
    CHECK(s.density(1.0) == Approx(0.05 / (test::pi * 0.5)));
    CHECK(s.phase(5.0) == Approx(250.0));

    // serialization round trip
    ContinuumSpec back = app::parse_continuum(app::continuum_to_json(s));
    for (double w : {0.0, 0.7, 1.3, 7.5, 19.0}) {
        CHECK(back.density(w) == s.density(w));
        CHECK(back.phase(w) == s.phase(w));
    }
    CHECK(back.band.hi == s.band.hi);
    CHECK(back.tol_orth == s.tol_orth);
}

TEST_CASE("network files") {
    json doc = json::parse(R"({"sites": [1.0, 1.0, 0.5],
                              "hoppings": [{"from": 1, "to": 3, "amplitude": [0.1, 0.2]},
                                           {"from": 2, "to": 3, "amplitude": 0.3}]})");
    DiscreteNetwork net = app::parse_network(doc);
    CHECK(net.sites() == 3);
    CHECK(net.h()(0, 2) == cplx(0.1, 0.2));
    CHECK(net.h()(2, 0) == cplx(0.1, -0.2));

    json bad = doc;
    bad["hoppings"][0]["amplitude"] = "x";
    CHECK_THROWS_AS(app::parse_network(bad), app::SchemaError);
    bad = doc;
    bad["hoppings"][0]["weight"] = 1.0;
    CHECK_THROWS_AS(app::parse_network(bad), app::SchemaError);
    bad = doc;
    bad["hoppings"][0]["to"] = 7;
    CHECK_THROWS_AS(app::parse_network(bad), ModelError);

    json big{{"sites", std::vector<double>(max_network_sites + 1, 1.0)}, {"hoppings", json::array()}};
    CHECK_THROWS_AS(app::parse_network(big), ModelError);
}

TEST_CASE("exit codes") {
    CHECK(app::exit_code_for(app::SchemaError("x")) == 2);
    CHECK(app::exit_code_for(ModelError("x")) == 3);
    CHECK(app::exit_code_for(DomainError("x")) == 3);
    CHECK(app::exit_code_for(NumericalError("x", 1.0)) == 4);
    CHECK(app::exit_code_for(std::runtime_error("x")) == 1);
    try {
        json j = json::parse("{");
        CHECK(j.is_null());
    } catch (const std::exception& e) {
        CHECK(app::exit_code_for(e) == 2);
    }
}

TEST_CASE("CSV round trip") {
    fs::path dir = scratch("csv");
    MarkovResult r = amplitude_markov(test::canonical(), test::linspace(0.0, 120.0, 41));
    app::write_csv(dir / "a.csv", r.series);
    AmplitudeSeries back = app::read_csv(dir / "a.csv");
    REQUIRE(back.size() == r.series.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back.times[i] == r.series.times[i]);
        CHECK(back.amplitude[i] == r.series.amplitude[i]);
        CHECK(back.probability[i] == r.series.probability[i]);
    }
    CHECK(app::series_csv(back) == slurp(dir / "a.csv"));

    Deviation d = compare(back, r.series);
    CHECK(d.sup_dP == 0.0);
    CHECK(d.sup_dA == 0.0);

    std::ofstream(dir / "bad.csv") << "t,re_A,im_A,P\n0,1,2\n";
    CHECK_THROWS_AS(app::read_csv(dir / "bad.csv"), app::SchemaError);
    std::ofstream(dir / "hdr.csv") << "time,A\n0,1\n";
    CHECK_THROWS_AS(app::read_csv(dir / "hdr.csv"), app::SchemaError);
    std::ofstream(dir / "order.csv") << "t,re_A,im_A,P\n1,0,0,0\n0,0,0,0\n";
    CHECK_THROWS_AS(app::read_csv(dir / "order.csv"), app::SchemaError);
    fs::remove_all(dir);
}

TEST_CASE("scenario run writes results under the override directory") {
    fs::path dir = scratch("run");
    EnvGuard env(dir / "out");
    json cfg = canonical_config();
    cfg["pipeline"] = {"markov", "approx"};
    app::RunOutcome a = app::run_scenario(app::parse_scenario(cfg));
    CHECK(a.exit_code == 0);
    CHECK(a.output_dir == dir / "out");
    CHECK(fs::exists(dir / "out" / "markov.csv"));
    CHECK(fs::exists(dir / "out" / "approx.csv"));
    json summary = read_json(dir / "out" / "summary.json");
    CHECK(summary["status"] == "complete");
    CHECK(summary["peak_source"] == "markov");
    CHECK(summary["peak_P"].get<double>() == Approx(4.0 * std::exp(-2.0)).epsilon(0.02));
    CHECK(summary["t_opt"].get<double>() == Approx(90.0));
    CHECK(summary["comparisons"].contains("approx_vs_markov"));
    json manifest = read_json(dir / "out" / "manifest.json");
    CHECK(manifest["output_dir_override"] == (dir / "out").string());
    CHECK(manifest["config"]["output_dir"] == "wwt_output");
    CHECK(manifest["exit_code"] == 0);

    const std::string first = slurp(dir / "out" / "markov.csv");
    app::run_scenario(app::parse_scenario(cfg));
    CHECK(slurp(dir / "out" / "markov.csv") == first);
    fs::remove_all(dir);
}

TEST_CASE("scenario failures map to exit codes") {
    fs::path dir = scratch("fail");
    EnvGuard env(dir);

    json orth = canonical_config();
    orth["model"].erase("phase");
    app::RunOutcome o = app::run_scenario(app::parse_scenario(orth));
    CHECK(o.exit_code == 3);
    CHECK(read_json(dir / "summary.json")["status"] == "failed");

    json num = canonical_config();
    num["pipeline"] = {"markov", "exact"};
    num["time_grid"]["points"] = 11;
    num["solver"] = {{"laplace_tol", 1e-15}, {"amplitude_tol", 1e-16}};
    app::RunOutcome n = app::run_scenario(app::parse_scenario(num));
    CHECK(n.exit_code == 4);
    json s = read_json(dir / "summary.json");
    CHECK(s["status"] == "partial");
    CHECK(s["failures"][0]["stage"] == "exact");
    CHECK(s["failures"][0]["kind"] == "numerical");
    CHECK(fs::exists(dir / "markov.csv"));
    fs::remove_all(dir);
}

TEST_CASE("sweep entries get their own directories") {
    fs::path dir = scratch("sweep");
    EnvGuard env(dir);
    json cfg = canonical_config();
    cfg["time_grid"]["points"] = 61;
    cfg["sweep"] = {{"parameter", "density.gamma"}, {"values", {0.1, 0.05}}};
    app::RunOutcome r = app::run_scenario(app::parse_scenario(cfg));
    CHECK(r.exit_code == 0);
    json s = read_json(dir / "summary.json");
    REQUIRE(s["entries"].size() == 2);
    CHECK(s["sweep_parameter"] == "density.gamma");
    for (const auto& e : s["entries"]) CHECK(fs::exists(dir / e["dir"].get<std::string>() / "markov.csv"));
    CHECK(s["entries"][0]["t_opt"].get<double>() == Approx(70.0));
    fs::remove_all(dir);
}

TEST_CASE("network embedding report") {
    app::EmbedOutcome out = app::embed_network(test::four_site(), 0.1);
    CHECK(out.report["sites"] == 4);
    CHECK(out.report["levels"].size() == 2);
    CHECK(out.report["broadening_ok"] == false);
    REQUIRE(out.model.has_value());
    app::Scenario sc = app::parse_scenario(*out.model);
    CHECK(sc.model["type"] == "continuum");
    ContinuumModel m = build_continuum(app::parse_continuum(sc.model));
    CHECK(m.norm2(1) == Approx(0.01).epsilon(1e-3));
}

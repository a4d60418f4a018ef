#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>

#include "wwt/app/scenario.hpp"

namespace wwt::app {

namespace fs = std::filesystem;

namespace detail {
json with_parameter(const json& model, const std::string& dotted, double value);
}

namespace {

void write_json(const fs::path& file, const json& j) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot write " + file.string());
    out << j.dump(2) << '\n';
}

/// Lower code wins: schema beats model beats numerical.
int worse(int a, int b) {
    if (a == 0) return b;
    if (b == 0) return a;
    return std::min(a, b);
}

const char* kind_of(int code) {
    switch (code) {
        case ExitCode::schema: return "schema";
        case ExitCode::model: return "model";
        case ExitCode::numerical: return "numerical";
        default: return "internal";
    }
}

void add_warnings(json& list, const std::vector<std::string>& w, const std::string& source) {
    for (const auto& s : w) list.push_back(source + ": " + s);
}

struct Prepared {
    std::optional<ContinuumModel> model;
    std::optional<DiscreteNetwork> network;
    ApetReport report;
    double overlap = 0.0;
    json extra = json::object();
};

Prepared prepare(const json& m, const ApetThresholds& th) {
    Prepared p;
    if (m["type"] == "continuum") {
        p.model = build_continuum(parse_continuum(m));
        p.overlap = orthogonality_overlap(*p.model);
        p.report = apet_report(*p.model, th);
    } else {
        p.network = m.contains("file") ? load_network(m["file"].get<std::string>()) : parse_network(m["network"]);
        DiscreteWW dww = embed_ww(*p.network, m["tol_orth"].get<double>());
        double eta = m["eta"];
        Envelope env = build_envelope(dww, eta);
        p.overlap = orthogonality_overlap(dww);
        p.report = apet_report(dww, eta, th);
        p.extra["sites"] = p.network->sites();
        p.extra["envelope_norm1"] = env.norm1;
        p.extra["envelope_norm2"] = env.norm2;
        p.extra["envelope_band"] = {env.model.band().lo, env.model.band().hi};
        p.model = std::move(env.model);
    }
    return p;
}

struct PipelineRun {
    AmplitudeSeries series;
    json diagnostics = json::object();
    std::optional<Peak> refined;
};

PipelineRun run_pipeline(Pipeline which, const Scenario& sc, const Prepared& prep,
                         const std::vector<double>& times, json& warnings) {
    const ContinuumModel& cm = *prep.model;
    PipelineRun out;
    switch (which) {
        case Pipeline::exact: {
            ExactOptions opt;
            opt.laplace.abs_tol = sc.solver.laplace_tol;
            opt.amplitude_tol = sc.solver.amplitude_tol;
            ExactResult r = amplitude_exact(cm, times, opt);
            out.series = std::move(r.series);
            out.diagnostics = {{"error_estimate", r.error_estimate},
                               {"norm_f1", r.norm_f1},
                               {"norm_f2", r.norm_f2},
                               {"panels", r.panels}};
            add_warnings(warnings, r.warnings, "exact");
            break;
        }
        case Pipeline::markov: {
            MarkovResult r = amplitude_markov(cm, times, {sc.solver.markov_tol, 8});
            out.series = std::move(r.series);
            out.diagnostics = {{"error_estimate", r.error_estimate},
                               {"markov_norm1", markov_norm(cm, 1)},
                               {"markov_norm2", markov_norm(cm, 2)}};
            add_warnings(warnings, r.warnings, "markov");
            break;
        }
        case Pipeline::oracle: {
            DiscreteSystem sys = prep.network ? network_system(*prep.network)
                                              : discretize_continuum(cm, sc.solver.oracle_modes);
            json diag{{"size", sys.size()}, {"delta_omega", sys.delta_omega}};
            Propagator prop(std::move(sys));
            OracleResult r = amplitude_oracle(prop, times);
            out.series = std::move(r.series);
            diag["max_norm_defect"] = r.max_norm_defect;
            diag["norm_non_increasing"] = r.norm_non_increasing;
            if (prop.hermitian()) {
                diag["eigen_residual"] = prop.eigensystem().residual;
                diag["eigen_orthogonality"] = prop.eigensystem().orthogonality;
            }
            add_warnings(warnings, r.warnings, "oracle");
            auto it = std::max_element(out.series.probability.begin(), out.series.probability.end());
            std::size_t i = static_cast<std::size_t>(it - out.series.probability.begin());
            double lo = times[i == 0 ? 0 : i - 1];
            double hi = times[std::min(i + 1, times.size() - 1)];
            out.refined = refine_peak([&](double t) { return std::norm(prop.amplitude(1, 0, t)); }, lo, hi);
            out.diagnostics = std::move(diag);
            break;
        }
        case Pipeline::approx: {
            out.series = amplitude_approx(cm, times, ApproxLevel::linearized);
            out.diagnostics = {{"level", "linearized"}};
            break;
        }
    }
    return out;
}

struct EntryOutcome {
    int code = 0;
    json summary;
};

EntryOutcome run_entry(const Scenario& sc, const json& model, const fs::path& dir) {
    fs::create_directories(dir);
    EntryOutcome res;
    json& s = res.summary;
    s["status"] = "complete";
    s["model_type"] = model["type"];
    json warnings = json::array();
    json failures = json::array();

    Prepared prep;
    try {
        prep = prepare(model, sc.apet);
    } catch (const std::exception& e) {
        res.code = exit_code_for(e);
        s["status"] = "failed";
        failures.push_back({{"stage", "model"}, {"kind", kind_of(res.code)}, {"message", e.what()}});
        s["failures"] = failures;
        write_json(dir / "summary.json", s);
        return res;
    }
    add_warnings(warnings, prep.report.warnings, "apet");

    s["orthogonality_overlap"] = prep.overlap;
    s.update(apet_json(prep.report));
    s["markov_peak_time"] = markov_peak_time(*prep.model);
    s.update(prep.extra);

    std::vector<double> times = sc.time_grid.values();
    std::vector<std::pair<Pipeline, PipelineRun>> done;
    json pipelines = json::object();
    for (Pipeline p : sc.pipeline) {
        try {
            PipelineRun r = run_pipeline(p, sc, prep, times, warnings);
            std::string csv = std::string(name(p)) + ".csv";
            write_csv(dir / csv, r.series);
            Peak pk = grid_peak(r.series);
            json pj{{"csv", csv}, {"peak_P", pk.probability}, {"peak_t", pk.t}, {"diagnostics", r.diagnostics}};
            if (r.refined) {
                pj["peak_t_refined"] = r.refined->t;
                pj["peak_P_refined"] = r.refined->probability;
            }
            pipelines[name(p)] = pj;
            done.emplace_back(p, std::move(r));
        } catch (const std::exception& e) {
            int code = exit_code_for(e);
            res.code = worse(res.code, code);
            failures.push_back({{"stage", name(p)}, {"kind", kind_of(code)}, {"message", e.what()}});
        }
    }
    s["pipelines"] = pipelines;

    const PipelineRun* ref = nullptr;
    Pipeline ref_p{};
    for (Pipeline want : {Pipeline::oracle, Pipeline::exact, Pipeline::markov, Pipeline::approx})
        for (auto& [p, r] : done)
            if (!ref && p == want) {
                ref = &r;
                ref_p = p;
            }
    if (ref) {
        Peak pk = grid_peak(ref->series);
        s["peak_P"] = pk.probability;
        s["peak_t"] = pk.t;
        s["peak_source"] = name(ref_p);
        json cmp = json::object();
        for (auto& [p, r] : done)
            if (&r != ref) cmp[std::string(name(p)) + "_vs_" + name(ref_p)] = deviation_json(compare(r.series, ref->series));
        s["comparisons"] = cmp;
    } else {
        s["peak_P"] = nullptr;
        s["peak_t"] = nullptr;
        s["peak_source"] = nullptr;
    }

    if (!failures.empty()) s["status"] = done.empty() ? "failed" : "partial";
    s["failures"] = failures;
    s["warnings"] = warnings;
    write_json(dir / "summary.json", s);
    return res;
}

std::string value_label(double v) { return json(v).dump(); }

}  // namespace

RunOutcome run_scenario(const Scenario& sc) {
    RunOutcome out;
    out.output_dir = effective_output_dir(sc.output_dir);
    fs::create_directories(out.output_dir);

    json manifest{{"tool", "wwt"}, {"version", version}, {"config", sc.resolved()}};
    const char* env = std::getenv(output_dir_env);
    manifest["output_dir_override"] = env && *env ? json(env) : json(nullptr);
    manifest["output_dir_effective"] = out.output_dir.string();

    if (!sc.sweep) {
        EntryOutcome e = run_entry(sc, sc.model, out.output_dir);
        out.exit_code = e.code;
        out.summary = std::move(e.summary);
        json files = json::array({"summary.json"});
        for (Pipeline p : sc.pipeline)
            if (out.summary.contains("pipelines") && out.summary["pipelines"].contains(name(p)))
                files.push_back(std::string(name(p)) + ".csv");
        manifest["files"] = files;
    } else {
        json entries = json::array();
        json files = json::array({"summary.json"});
        for (double v : sc.sweep->values) {
            std::string sub = sc.sweep->parameter + "=" + value_label(v);
            json model;
            try {
                model = detail::with_parameter(sc.model, sc.sweep->parameter, v);
            } catch (const std::exception& ex) {
                out.exit_code = worse(out.exit_code, exit_code_for(ex));
                continue;
            }
            EntryOutcome e = run_entry(sc, model, out.output_dir / sub);
            out.exit_code = worse(out.exit_code, e.code);
            json entry{{"value", v},
                       {"dir", sub},
                       {"status", e.summary["status"]},
                       {"peak_P", e.summary.value("peak_P", json(nullptr))},
                       {"peak_t", e.summary.value("peak_t", json(nullptr))},
                       {"t_opt", e.summary.value("t_opt", json(nullptr))},
                       {"transfer_bound", e.summary.value("transfer_bound", json(nullptr))}};
            entries.push_back(entry);
            files.push_back(sub + "/summary.json");
            if (e.summary.contains("pipelines"))
                for (auto& [k, pj] : e.summary["pipelines"].items()) files.push_back(sub + "/" + pj["csv"].get<std::string>());
        }
        out.summary = {{"sweep_parameter", sc.sweep->parameter}, {"entries", entries}};
        bool all_ok = std::all_of(entries.begin(), entries.end(),
                                  [](const json& e) { return e["status"] == "complete"; });
        out.summary["status"] = all_ok && entries.size() == sc.sweep->values.size() ? "complete" : "partial";
        write_json(out.output_dir / "summary.json", out.summary);
        manifest["files"] = files;
    }
    manifest["exit_code"] = out.exit_code;
    write_json(out.output_dir / "manifest.json", manifest);
    return out;
}

EmbedOutcome embed_network(const DiscreteNetwork& net, double eta, double tol_orth) {
    DiscreteWW dww = embed_ww(net, tol_orth);
    Envelope env = build_envelope(dww, eta);
    ApetReport rep = apet_report(dww, eta);

    auto pairs = [](const std::vector<cplx>& c) {
        json a = json::array();
        for (cplx x : c) a.push_back({x.real(), x.imag()});
        return a;
    };
    json report{{"sites", net.sites()},
                {"omega1", dww.omega1},
                {"omega2", dww.omega2},
                {"levels", dww.levels},
                {"couplings1", pairs(dww.couplings1)},
                {"couplings2", pairs(dww.couplings2)},
                {"orthogonality_overlap", orthogonality_overlap(dww)},
                {"envelope_norm1", env.norm1},
                {"envelope_norm2", env.norm2},
                {"envelope_band", {env.model.band().lo, env.model.band().hi}},
                {"phase_levels", env.phase_levels},
                {"phase_values", env.phase_values}};
    report.update(apet_json(rep));
    json warnings = json::array();
    add_warnings(warnings, rep.warnings, "apet");
    report["warnings"] = warnings;

    EmbedOutcome out;
    out.report = std::move(report);
    double horizon = std::max(2.0 * rep.t_opt, 10.0);
    if (!std::isfinite(horizon)) horizon = 100.0;
    out.model = json{{"model", continuum_to_json(env.model.spec())},
                     {"pipeline", {"markov"}},
                     {"time_grid", {{"t_start", 0.0}, {"t_end", horizon}, {"points", 401}}}};
    return out;
}

}  // namespace wwt::app

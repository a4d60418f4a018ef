#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "wwt/app/scenario.hpp"

namespace fs = std::filesystem;
using namespace wwt;
using app::json;

namespace {

int report_failure(const std::exception& e) {
    int code = app::exit_code_for(e);
    std::cerr << "wwt: " << e.what() << '\n';
    return code;
}

void write_json(const fs::path& file, const json& j) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot write " + file.string());
    out << j.dump(2) << '\n';
}

int simulate(const std::string& config) {
    app::Scenario sc = app::load_scenario(config);
    app::RunOutcome out = app::run_scenario(sc);
    std::cout << out.summary.dump(2) << '\n';
    if (out.exit_code != 0) std::cerr << "wwt: run finished with failures, see " << (out.output_dir / "summary.json") << '\n';
    return out.exit_code;
}

int embed(const std::string& network, double eta, bool emit_model, const std::string& output) {
    if (!(eta > 0.0)) throw app::SchemaError("--eta must be positive");
    DiscreteNetwork net = app::load_network(network);
    app::EmbedOutcome out = app::embed_network(net, eta);
    fs::path dir = app::effective_output_dir(output);
    fs::create_directories(dir);
    write_json(dir / "embedding.json", out.report);
    if (emit_model && out.model) write_json(dir / "model.json", *out.model);
    std::cout << out.report.dump(2) << '\n';
    return 0;
}

int compare_files(const std::string& a, const std::string& b, const std::string& output) {
    AmplitudeSeries sa = app::read_csv(a);
    AmplitudeSeries sb = app::read_csv(b);
    Deviation d;
    try {
        d = compare(sa, sb);
    } catch (const DomainError& e) {
        throw app::SchemaError(std::string("time grids differ: ") + e.what());
    }
    json report{{"a", a}, {"b", b}, {"points", sa.size()}};
    report.update(app::deviation_json(d));
    if (!output.empty() || std::getenv(app::output_dir_env)) {
        fs::path dir = app::effective_output_dir(output.empty() ? fs::path(".") : fs::path(output));
        fs::create_directories(dir);
        write_json(dir / "compare.json", report);
    }
    std::cout << report.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Donor-acceptor transfer in the two-level Wigner-Weisskopf model"};
    cli.set_version_flag("--version", std::string("wwt ") + app::version);
    cli.require_subcommand(1);

    std::string config;
    auto* sim = cli.add_subcommand("simulate", "Run a scenario config");
    sim->add_option("config", config, "Scenario JSON file")->required();

    std::string network, embed_out = "wwt_output";
    double eta = 0.0;
    bool emit_model = false;
    auto* emb = cli.add_subcommand("embed", "Embed a tight-binding network into a continuum model");
    emb->add_option("network", network, "Network JSON file")->required();
    emb->add_option("--eta", eta, "Lorentzian broadening width")->required();
    emb->add_flag("--emit-model", emit_model, "Also write a scenario config built on the envelope model");
    emb->add_option("-o,--output", embed_out, "Output directory")->capture_default_str();

    std::string csv_a, csv_b, cmp_out;
    auto* cmp = cli.add_subcommand("compare", "Deviations between two amplitude CSV files");
    cmp->add_option("csvA", csv_a)->required();
    cmp->add_option("csvB", csv_b)->required();
    cmp->add_option("-o,--output", cmp_out, "Directory for compare.json");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = cli.exit(e);
        return rc == 0 ? 0 : app::ExitCode::schema;
    }

    try {
        if (*sim) return simulate(config);
        if (*emb) return embed(network, eta, emit_model, embed_out);
        if (*cmp) return compare_files(csv_a, csv_b, cmp_out);
    } catch (const std::exception& e) {
        return report_failure(e);
    }
    return 1;
}

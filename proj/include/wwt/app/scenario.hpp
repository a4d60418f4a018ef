#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wwt/wwt.hpp"

namespace wwt::app {

using nlohmann::json;

inline constexpr const char* version = "0.1.0";
inline constexpr const char* output_dir_env = "WWT_OUTPUT_DIR";

/// Config or input file does not match its schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

enum ExitCode : int { ok = 0, schema = 2, model = 3, numerical = 4 };

/// Maps an exception to the documented exit code.
int exit_code_for(const std::exception& e);

enum class Pipeline { exact, markov, oracle, approx };
const char* name(Pipeline p);

struct SolverSettings {
    double laplace_tol = 1e-9;
    double amplitude_tol = 1e-6;
    double markov_tol = 1e-7;
    int oracle_modes = 2000;
};

struct Sweep {
    std::string parameter;  ///< dotted path inside the model block, e.g. "density.gamma"
    std::vector<double> values;
};

/// A validated scenario with every default filled in.
struct Scenario {
    json model;  ///< normalized model block
    std::vector<Pipeline> pipeline;
    TimeGrid time_grid;
    SolverSettings solver;
    ApetThresholds apet;
    std::optional<Sweep> sweep;
    std::filesystem::path output_dir;
    std::filesystem::path base_dir;  ///< resolves relative network paths

    json resolved() const;
};

Scenario parse_scenario(const json& config, const std::filesystem::path& base_dir = ".");
Scenario load_scenario(const std::filesystem::path& file);

/// Continuum spec from a model block of type "continuum".
ContinuumSpec parse_continuum(const json& model);
/// The model block that parse_continuum reads back into `spec` (densities as profiles).
json continuum_to_json(const ContinuumSpec& spec);

/// Network input file: {"sites": [e1, ...], "hoppings": [{"from": k, "to": l, "amplitude": a}]}
/// with a either a number or [re, im].
DiscreteNetwork parse_network(const json& doc);
DiscreteNetwork load_network(const std::filesystem::path& file);

/// Fixed-format CSV (t,re_A,im_A,P) at 17 significant digits.
std::string series_csv(const AmplitudeSeries& s);
void write_csv(const std::filesystem::path& file, const AmplitudeSeries& s);
AmplitudeSeries read_csv(const std::filesystem::path& file);

json deviation_json(const Deviation& d);
json apet_json(const ApetReport& r);

struct RunOutcome {
    int exit_code = ExitCode::ok;
    std::filesystem::path output_dir;
    json summary;
};

/// Runs every pipeline (and sweep entry), writing CSVs, summary.json and manifest.json.
/// Numerical failures of a pipeline leave the others in place and give exit code 4.
RunOutcome run_scenario(const Scenario& sc);

/// Output directory after the environment override.
std::filesystem::path effective_output_dir(const std::filesystem::path& configured);

struct EmbedOutcome {
    json report;
    std::optional<json> model;  ///< model block for a scenario config
};

EmbedOutcome embed_network(const DiscreteNetwork& net, double eta, double tol_orth = 0.02);

}  // namespace wwt::app

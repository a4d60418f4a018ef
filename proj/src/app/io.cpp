#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "wwt/app/scenario.hpp"

namespace wwt::app {

namespace {

constexpr const char* csv_header = "t,re_A,im_A,P";

void append_g17(std::string& out, double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
}

}  // namespace

std::string series_csv(const AmplitudeSeries& s) {
    std::string out = csv_header;
    out += '\n';
    for (std::size_t i = 0; i < s.size(); ++i) {
        append_g17(out, s.times[i]);
        out += ',';
        append_g17(out, s.amplitude[i].real());
        out += ',';
        append_g17(out, s.amplitude[i].imag());
        out += ',';
        append_g17(out, s.probability[i]);
        out += '\n';
    }
    return out;
}

void write_csv(const std::filesystem::path& file, const AmplitudeSeries& s) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot write " + file.string());
    out << series_csv(s);
}

AmplitudeSeries read_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw SchemaError("cannot open " + file.string());
    std::string line;
    if (!std::getline(in, line) || line != csv_header)
        throw SchemaError(file.string() + ": expected header '" + csv_header + "'");
    std::vector<double> t, p;
    std::vector<cplx> a;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        double v[4];
        bool good = cells.size() == 4;
        for (std::size_t k = 0; good && k < 4; ++k) {
            char* end = nullptr;
            v[k] = std::strtod(cells[k].c_str(), &end);
            good = end != cells[k].c_str() && *end == '\0';
        }
        if (!good) throw SchemaError(file.string() + ": malformed row " + std::to_string(row));
        t.push_back(v[0]);
        a.emplace_back(v[1], v[2]);
        p.push_back(v[3]);
    }
    AmplitudeSeries s;
    try {
        s = make_series(std::move(t), std::move(a));
    } catch (const DomainError& e) {
        throw SchemaError(file.string() + ": " + e.what());
    }
    s.probability = std::move(p);
    return s;
}

json deviation_json(const Deviation& d) {
    return {{"sup_dP", d.sup_dP}, {"l2_dP", d.l2_dP}, {"sup_dA", d.sup_dA}, {"l2_dA", d.l2_dA}};
}

json apet_json(const ApetReport& r) {
    json out{{"resonance_ok", r.resonance.ok},
             {"resonance_margin", r.resonance.margin},
             {"rates_ok", r.rates.ok},
             {"rates_margin", r.rates.margin},
             {"phase_smooth_ok", r.phase_smooth.ok},
             {"phase_smooth_margin", r.phase_smooth.margin},
             {"broadening_ok", r.broadening ? json(r.broadening->ok) : json(nullptr)},
             {"broadening_margin", r.broadening ? json(r.broadening->margin) : json(nullptr)},
             {"t_opt", r.t_opt},
             {"transfer_bound", r.bound},
             {"omega0", r.omega0},
             {"gamma", r.gamma},
             {"tau", r.tau},
             {"phase_slope", r.phase_slope},
             {"level_spacing", r.level_spacing},
             {"eta", r.eta}};
    return out;
}

std::filesystem::path effective_output_dir(const std::filesystem::path& configured) {
    const char* env = std::getenv(output_dir_env);
    if (env && *env) return env;
    return configured;
}

}  // namespace wwt::app

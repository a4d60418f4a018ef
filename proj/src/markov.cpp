#include "wwt/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "filon_driver.hpp"
#include "wwt/quadrature.hpp"
#include "wwt/spectral.hpp"

namespace wwt {

namespace {

const cplx I(0.0, 1.0);
constexpr double kInf = std::numeric_limits<double>::infinity();

double rate(const ContinuumModel& m, int j) { return decay_rate(m, j, m.omega(j)); }

void weak_coupling_warnings(const ContinuumModel& m, std::vector<std::string>& out) {
    for (int j = 1; j <= 2; ++j) {
        const double r = rate(m, j) / m.omega(j);
        if (r > 0.1) {
            std::ostringstream os;
            os << "gamma" << j << "/omega" << j << " = " << r << " exceeds 0.1; the Markovian layer is unreliable";
            out.push_back(os.str());
        }
    }
}

double constant_sink(const ContinuumModel& m) {
    const Profile& p = m.sink_profile();
    if (p.is_zero()) return 0.0;
    if (const auto* c = std::get_if<Constant>(&p.kind())) return c->value;
    throw DomainError("the Markovian layer supports only a constant continuum sink");
}

// centred difference clamped to the band
double phase_derivative(const ContinuumModel& m, double w, double h) {
    const Band& b = m.band();
    double lo = std::max(b.lo, w - h), hi = std::min(b.hi, w + h);
    if (!(hi > lo)) return 0.0;
    return (m.phase(hi) - m.phase(lo)) / (hi - lo);
}

double phase_second_derivative(const ContinuumModel& m, double w, double h) {
    const Band& b = m.band();
    if (w - h < b.lo || w + h > b.hi) {
        w = std::clamp(w, b.lo + h, b.hi - h);
        if (!(b.hi - b.lo > 2 * h)) return 0.0;
    }
    return (m.phase(w + h) - 2.0 * m.phase(w) + m.phase(w - h)) / (h * h);
}

double mean_rate_at(const ContinuumModel& m, double w) {
    return 0.5 * (decay_rate(m, 1, w) + decay_rate(m, 2, w));
}

std::vector<double> mesh_for(const ContinuumModel& m, std::initializer_list<quad::Feature> extra) {
    auto features = detail::profile_features(m);
    const double floor = 1e-6 * m.band().width();
    for (auto f : extra) {
        f.width = std::max(f.width, floor);
        if (m.band().contains(f.center)) features.push_back(f);
    }
    quad::MeshOptions mo;
    mo.h_max = detail::phase_h_max(m);
    return quad::graded_mesh(m.band().lo, m.band().hi, features, mo);
}

}  // namespace

MarkovPackets markov_wave_packets(const ContinuumModel& model, const std::vector<double>& omega_grid) {
    MarkovPackets out;
    out.omega = omega_grid;
    weak_coupling_warnings(model, out.warnings);
    const double g1 = rate(model, 1), g2 = rate(model, 2) + model.sink2();
    out.f1.resize(omega_grid.size());
    out.f2.resize(omega_grid.size());
    for (std::size_t k = 0; k < omega_grid.size(); ++k) {
        const double w = omega_grid[k];
        const cplx a = model.formfactor(1, w), b = model.formfactor(2, w);
        out.f1[k] = a == 0.0 ? 0.0 : a / cplx(w - model.omega1(), g1);
        out.f2[k] = b == 0.0 ? 0.0 : b / cplx(w - model.omega2(), -g2);
    }
    return out;
}

double markov_norm(const ContinuumModel& model, int j) {
    const double wj = model.omega(j);
    const double g = rate(model, j) + (j == 2 ? model.sink2() : 0.0);
    std::vector<double> extra = model.breakpoints();
    for (double s : {0.0, -1.0, 1.0, -10.0, 10.0, -100.0, 100.0}) extra.push_back(wj + s * g);
    const Band& b = model.band();
    auto breaks = quad::panel_breaks(b.lo, b.hi, 16, extra);
    quad::Options opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-11;
    auto r = quad::integrate<double>(
        [&](double w) {
            const double x = w - wj;
            return model.density(j, w) / (x * x + g * g);
        },
        breaks, opt);
    return r.value;
}

MarkovResult amplitude_markov(const ContinuumModel& model, const std::vector<double>& times,
                              const MarkovOptions& opt) {
    MarkovResult res;
    weak_coupling_warnings(model, res.warnings);
    if (model.norm2(1) == 0.0 || model.norm2(2) == 0.0) {
        res.series = make_series(times, std::vector<cplx>(times.size(), 0.0));
        return res;
    }
    const double sink = constant_sink(model);
    const double w1 = rate(model, 1) - sink;
    const double w2 = rate(model, 2) + model.sink2() - sink;
    if (sink > 0.0 && (w1 <= 0.0 || w2 <= 0.0))
        throw DomainError("continuum sink rate reaches a Markovian width; the pole approximation breaks down");
    const double o1 = model.omega1(), o2 = model.omega2();
    const auto edges = mesh_for(model, {{o1, w1}, {o2, w2}});
    auto sampler = [&](const std::vector<double>& nodes) {
        std::vector<cplx> u(nodes.size());
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const double w = nodes[k];
            u[k] = std::conj(model.formfactor(2, w)) * model.formfactor(1, w) /
                   (cplx(w - o1, w1) * cplx(w - o2, w2));
        }
        return u;
    };
    auto phase = [&](double w) { return model.phase(w); };
    auto run = detail::filon_series(edges, phase, sampler, times, opt.amplitude_tol, opt.max_rounds,
                                    "amplitude_markov");
    if (sink > 0.0)
        for (std::size_t k = 0; k < times.size(); ++k) run.amplitude[k] *= std::exp(-sink * times[k]);
    res.series = make_series(times, std::move(run.amplitude));
    res.error_estimate = run.error;
    return res;
}

double transfer_bound(double r1, double r2) { return (1.0 - r1) * (1.0 - r2); }

double transfer_bound(const ContinuumModel& model) {
    const double r1 = rate(model, 1) / (std::numbers::pi * model.omega1());
    const double r2 = rate(model, 2) / (std::numbers::pi * model.omega2());
    return transfer_bound(r1, r2);
}

TransferTime optimal_transfer_time(const ContinuumModel& model, double resonance_threshold) {
    TransferTime tt;
    tt.omega0 = 0.5 * (model.omega1() + model.omega2());
    if (!model.band().contains(tt.omega0))
        throw DomainError("optimal_transfer_time: omega0 lies outside the band");
    tt.gamma = mean_rate_at(model, tt.omega0);
    if (!(tt.gamma > 0.0)) {
        tt.tau = kInf;
        tt.t_opt = kInf;
        tt.phase_slope = phase_derivative(model, tt.omega0, 1e-6 * model.band().width());
        tt.warnings.push_back("decay rate vanishes at omega0; no transfer time");
        return tt;
    }
    tt.tau = 1.0 / tt.gamma;
    tt.phase_slope = phase_derivative(model, tt.omega0, tt.gamma / 10.0);
    tt.t_opt = tt.phase_slope + 2.0 * tt.tau;
    const double detune = std::abs(model.omega1() - model.omega2());
    if (detune > resonance_threshold * tt.gamma) {
        std::ostringstream os;
        os << "levels are detuned by " << detune / tt.gamma << " gamma; t_opt assumes resonance";
        tt.warnings.push_back(os.str());
    }
    return tt;
}

double markov_peak_time(const ContinuumModel& model) {
    const auto tt = optimal_transfer_time(model);
    return tt.phase_slope + tt.tau;
}

AmplitudeSeries amplitude_approx(const ContinuumModel& model, const std::vector<double>& times,
                                 ApproxLevel level) {
    const auto tt = optimal_transfer_time(model);
    const double g = tt.gamma, w0 = tt.omega0;
    if (!(g > 0.0)) return make_series(times, std::vector<cplx>(times.size(), 0.0));
    const auto edges = mesh_for(model, {{w0, g}});
    std::function<double(double)> phase;
    detail::Sampler sampler;
    if (level == ApproxLevel::resonant) {
        phase = [&](double w) { return model.phase(w); };
        sampler = [&](const std::vector<double>& nodes) {
            std::vector<cplx> u(nodes.size());
            for (std::size_t k = 0; k < nodes.size(); ++k) {
                const cplx d(nodes[k] - w0, g);
                u[k] = g / std::numbers::pi * std::polar(1.0, model.phase(nodes[k])) / (d * d);
            }
            return u;
        };
    } else {
        const double slope = tt.phase_slope + 2.0 * tt.tau;
        phase = [=](double w) { return slope * (w - w0); };
        sampler = [=](const std::vector<double>& nodes) {
            std::vector<cplx> u(nodes.size());
            for (std::size_t k = 0; k < nodes.size(); ++k) {
                const double x = nodes[k] - w0;
                u[k] = g / std::numbers::pi / (x * x + g * g) * std::polar(1.0, slope * x);
            }
            return u;
        };
    }
    auto run = detail::filon_series(edges, phase, sampler, times, 1e-7, 8, "amplitude_approx");
    if (level == ApproxLevel::linearized)
        for (std::size_t k = 0; k < times.size(); ++k) run.amplitude[k] *= std::polar(1.0, w0 * times[k]);
    return make_series(times, std::move(run.amplitude));
}

ApetReport apet_report(const ContinuumModel& model, const ApetThresholds& th) {
    ApetReport rep;
    const auto tt = optimal_transfer_time(model, th.resonance);
    rep.omega0 = tt.omega0;
    rep.gamma = tt.gamma;
    rep.tau = tt.tau;
    rep.t_opt = tt.t_opt;
    rep.phase_slope = tt.phase_slope;
    rep.bound = transfer_bound(model);
    rep.warnings = tt.warnings;
    const double g = tt.gamma;
    auto ratio = [g](double num) { return num == 0.0 ? 0.0 : (g > 0.0 ? num / g : kInf); };

    rep.resonance.margin = ratio(std::abs(model.omega1() - model.omega2()));
    rep.resonance.ok = rep.resonance.margin <= th.resonance;
    rep.rates.margin = ratio(std::abs(rate(model, 1) - rate(model, 2)));
    rep.rates.ok = rep.rates.margin <= th.rates;

    if (g > 0.0) {
        const double h = g / 10.0;
        double curv = 0.0;
        for (int k = -10; k <= 10; ++k) {
            const double w = tt.omega0 + g * k / 10.0;
            if (!model.band().contains(w)) continue;
            curv = std::max(curv, std::abs(phase_second_derivative(model, w, h)));
        }
        const double denom = tt.phase_slope * g + 2.0;
        rep.phase_smooth.margin = denom > 0.0 ? curv * g * g / denom : kInf;
        rep.phase_smooth.ok = rep.phase_smooth.margin <= th.phase;
    } else {
        rep.phase_smooth.margin = kInf;
        rep.phase_smooth.ok = false;
    }
    return rep;
}

}  // namespace wwt

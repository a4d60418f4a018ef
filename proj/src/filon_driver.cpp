#include "filon_driver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wwt::detail {

double phase_h_max(const ContinuumModel& model) {
    double h = model.band().width() / 256.0;
    if (model.max_phase_slope() > 0.0) h = std::min(h, 2.0 / model.max_phase_slope());
    if (model.max_phase_curvature() > 0.0) h = std::min(h, std::sqrt(0.5 / model.max_phase_curvature()));
    return h;
}

std::vector<quad::Feature> profile_features(const ContinuumModel& model) {
    std::vector<quad::Feature> out;
    const double w = model.structure_width();
    for (double c : model.breakpoints()) out.push_back({c, w});
    return out;
}

std::vector<cplx> component(const std::vector<cplx>& values, std::size_t stride, std::size_t c) {
    std::vector<cplx> out(values.size() / stride);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = values[k * stride + c];
    return out;
}

FilonRun filon_series(const std::vector<double>& edges, const std::function<double(double)>& phase,
                      const Sampler& sampler, const std::vector<double>& times, double tol,
                      int max_rounds, const char* what, std::size_t stride) {
    // one entry per current panel: its edges, node samples at the panel's three nodes and
    // at the nine nodes of its trisection, and the trisection change
    struct Panel {
        double a, b;
        std::vector<cplx> coarse;  // 3 * stride
        std::vector<cplx> fine;    // 9 * stride, empty until sampled
        double change = -1.0;
    };
    std::vector<Panel> panels;
    {
        quad::PhaseKeyedRule rule(edges, phase);
        const auto v = sampler(rule.nodes());
        for (std::size_t p = 0; p < rule.panels(); ++p)
            panels.push_back({edges[p], edges[p + 1],
                              std::vector<cplx>(v.begin() + 3 * p * stride, v.begin() + 3 * (p + 1) * stride),
                              {}, -1.0});
    }

    double estimate = 0.0;
    for (int round = 0;; ++round) {
        // sample trisections that are still missing
        std::vector<std::size_t> todo;
        for (std::size_t p = 0; p < panels.size(); ++p)
            if (panels[p].fine.empty()) todo.push_back(p);
        if (!todo.empty()) {
            std::vector<double> nodes;
            for (std::size_t p : todo) {
                const double a = panels[p].a, w = panels[p].b - a;
                for (int q = 0; q < 3; ++q)
                    for (int r = 0; r < 3; ++r) {
                        if (r == 1) continue;  // centre of each third is a coarse node
                        nodes.push_back(a + w * (q / 3.0 + (2.0 * r + 1.0) / 18.0));
                    }
            }
            const auto v = sampler(nodes);
            std::size_t s = 0;
            for (std::size_t p : todo) {
                auto& P = panels[p];
                P.fine.assign(9 * stride, 0.0);
                for (int q = 0; q < 3; ++q)
                    for (int r = 0; r < 3; ++r) {
                        const std::size_t f = 3 * q + r;
                        if (r == 1) {
                            for (std::size_t c = 0; c < stride; ++c) P.fine[f * stride + c] = P.coarse[q * stride + c];
                        } else {
                            for (std::size_t c = 0; c < stride; ++c) P.fine[f * stride + c] = v[s * stride + c];
                            ++s;
                        }
                    }
            }
            // change between coarse and trisected contributions for the new panels
            for (std::size_t p : todo) {
                auto& P = panels[p];
                const double w = P.b - P.a;
                quad::PhaseKeyedRule c({P.a, P.b}, phase);
                quad::PhaseKeyedRule f({P.a, P.a + w / 3.0, P.a + 2.0 * w / 3.0, P.b}, phase);
                const auto fc = c.fit(component(P.coarse, stride, 0));
                const auto ff = f.fit(component(P.fine, stride, 0));
                double ch = 0.0;
                for (double t : times) {
                    const cplx d = f.integrate_fit(ff, t) - c.integrate_fit(fc, t);
                    ch = std::max(ch, std::abs(d));
                }
                P.change = ch;
            }
        }
        estimate = 0.0;
        for (const auto& P : panels) estimate += P.change;
        if (estimate <= tol) break;
        if (round >= max_rounds) {
            std::ostringstream os;
            os << what << ": oscillatory quadrature did not reach " << tol << " (estimate " << estimate << ")";
            throw NumericalError(os.str(), estimate);
        }
        const double cut = 0.5 * tol / static_cast<double>(panels.size());
        std::vector<Panel> next;
        next.reserve(panels.size() * 2);
        for (auto& P : panels) {
            if (P.change <= cut) {
                next.push_back(std::move(P));
                continue;
            }
            const double w = P.b - P.a;
            for (int q = 0; q < 3; ++q) {
                Panel child{P.a + w * q / 3.0, q == 2 ? P.b : P.a + w * (q + 1) / 3.0,
                            std::vector<cplx>(P.fine.begin() + 3 * q * stride, P.fine.begin() + 3 * (q + 1) * stride),
                            {}, -1.0};
                next.push_back(std::move(child));
            }
        }
        panels = std::move(next);
    }

    // final answer on the trisected mesh of every panel
    std::vector<double> fine_edges{panels.front().a};
    std::vector<cplx> values;
    values.reserve(panels.size() * 9 * stride);
    for (const auto& P : panels) {
        const double w = P.b - P.a;
        fine_edges.insert(fine_edges.end(), {P.a + w / 3.0, P.a + 2.0 * w / 3.0, P.b});
        values.insert(values.end(), P.fine.begin(), P.fine.end());
    }
    quad::PhaseKeyedRule rule(fine_edges, phase);
    const auto fit = rule.fit(component(values, stride, 0));
    std::vector<cplx> amp(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) amp[k] = rule.integrate_fit(fit, times[k]);
    return {std::move(amp), estimate, std::move(rule), std::move(values)};
}

double filon_norm(const quad::PhaseKeyedRule& rule, const std::vector<double>& r) {
    std::vector<cplx> c(r.begin(), r.end());
    quad::PhaseKeyedRule flat(rule.edges(), [](double) { return 0.0; });
    return flat.integrate(c, 0.0).real();
}

}  // namespace wwt::detail

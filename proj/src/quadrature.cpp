#include "wwt/quadrature.hpp"

#include <algorithm>

namespace wwt::quad {

std::vector<double> panel_breaks(double a, double b, int n, std::vector<double> extra) {
    n = std::max(n, 1);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n) + 1 + extra.size());
    for (int k = 0; k <= n; ++k) out.push_back(a + (b - a) * k / n);
    out.back() = b;
    for (double x : extra)
        if (x > a && x < b) out.push_back(x);
    std::sort(out.begin(), out.end());
    const double eps = 1e-14 * (b - a);
    std::vector<double> merged;
    for (double x : out)
        if (merged.empty() || x - merged.back() > eps) merged.push_back(x);
    merged.back() = b;
    return merged;
}

std::vector<double> graded_mesh(double a, double b, std::span<const Feature> features,
                                const MeshOptions& opt) {
    if (!(b > a)) throw DomainError("graded_mesh: empty interval");
    if (!(opt.h_max > 0.0)) throw DomainError("graded_mesh: h_max must be positive");
    const double floor = opt.h_floor_rel * (b - a);
    const double e = opt.edge_fraction, f = opt.fraction;
    std::vector<double> edges{a};
    double x = a;
    while (x < b) {
        double h = opt.h_max;
        h = std::min(h, e * (x - a) + floor);
        h = std::min(h, (e * (b - x) + floor) / (1.0 + e));
        for (const auto& ft : features) {
            const double d = std::abs(x - ft.center) + ft.width;
            h = std::min(h, x < ft.center ? f * d / (1.0 + f) : f * d);
            // never step across a feature centre
            if (x < ft.center && x + h > ft.center) h = std::max(ft.center - x, floor);
        }
        h = std::max(h, floor);
        x = (x + h >= b - 0.5 * floor) ? b : x + h;
        edges.push_back(x);
    }
    return edges;
}

std::array<cplx, 3> oscillatory_moments(double theta) {
    const cplx i(0.0, 1.0);
    std::array<cplx, 3> mu{};
    if (std::abs(theta) < 1.0) {
        // sum_k (i theta)^k / (k! (n + k + 1))
        cplx term(1.0, 0.0);
        for (int k = 0; k < 30; ++k) {
            for (int n = 0; n < 3; ++n) mu[n] += term / static_cast<double>(n + k + 1);
            term *= i * theta / static_cast<double>(k + 1);
            if (std::norm(term) < 1e-36) break;
        }
        return mu;
    }
    const cplx e = std::polar(1.0, theta);
    const cplx it = i * theta;
    mu[0] = (e - 1.0) / it;
    mu[1] = (e - mu[0]) / it;
    mu[2] = (e - 2.0 * mu[1]) / it;
    return mu;
}

PhaseKeyedRule::PhaseKeyedRule(std::vector<double> edges, const std::function<double(double)>& phase)
    : edges_(std::move(edges)) {
    if (edges_.size() < 2) throw DomainError("PhaseKeyedRule: need at least one panel");
    phase_at_edges_.resize(edges_.size());
    for (std::size_t k = 0; k < edges_.size(); ++k) phase_at_edges_[k] = phase(edges_[k]);
    nodes_.reserve(3 * panels());
    for (std::size_t p = 0; p < panels(); ++p) {
        const double a = edges_[p], w = edges_[p + 1] - a;
        nodes_.push_back(a + w / 6.0);
        nodes_.push_back(a + w / 2.0);
        nodes_.push_back(a + 5.0 * w / 6.0);
    }
}

cplx PhaseKeyedRule::integrate(std::span<const cplx> u, double t) const {
    if (u.size() != nodes_.size()) throw DomainError("PhaseKeyedRule: sample count mismatch");
    cplx total = 0.0;
    for (std::size_t p = 0; p < panels(); ++p) total += integrate_panel(p, u.data() + 3 * p, t);
    return total;
}

cplx PhaseKeyedRule::integrate_panel(std::size_t p, const cplx* u3, double t) const {
    return integrate_fit_panel(p, fit_panel(p, u3), t);
}

std::vector<PhaseKeyedRule::Fit> PhaseKeyedRule::fit(std::span<const cplx> u) const {
    if (u.size() != nodes_.size()) throw DomainError("PhaseKeyedRule: sample count mismatch");
    std::vector<Fit> c(panels());
    for (std::size_t p = 0; p < panels(); ++p) c[p] = fit_panel(p, u.data() + 3 * p);
    return c;
}

cplx PhaseKeyedRule::integrate_fit(std::span<const Fit> c, double t) const {
    if (c.size() != panels()) throw DomainError("PhaseKeyedRule: fit size mismatch");
    cplx total = 0.0;
    for (std::size_t p = 0; p < panels(); ++p) total += integrate_fit_panel(p, c[p], t);
    return total;
}

PhaseKeyedRule::Fit PhaseKeyedRule::fit_panel(std::size_t p, const cplx* u3) const {
    const cplx i(0.0, 1.0);
    const double w = edges_[p + 1] - edges_[p];
    const double la = phase_at_edges_[p];
    const double s = (phase_at_edges_[p + 1] - la) / w;
    // remove the linearized phase at the nodes
    cplx v[3];
    for (int j = 0; j < 3; ++j) {
        const double sigma = (2.0 * j + 1.0) / 6.0;
        v[j] = u3[j] * std::exp(-i * (la + s * w * sigma));
    }
    // quadratic in tau = sigma - 1/2 through tau = -1/3, 0, 1/3
    const cplx d0 = v[1];
    const cplx d1 = 1.5 * (v[2] - v[0]);
    const cplx d2 = 4.5 * (v[2] - 2.0 * v[1] + v[0]);
    return {d0 - 0.5 * d1 + 0.25 * d2, d1 - d2, d2};
}

cplx PhaseKeyedRule::integrate_fit_panel(std::size_t p, const Fit& c, double t) const {
    const double a = edges_[p], w = edges_[p + 1] - a;
    const double la = phase_at_edges_[p];
    const double s = (phase_at_edges_[p + 1] - la) / w;
    const auto mu = oscillatory_moments((s - t) * w);
    return w * std::polar(1.0, la - a * t) * (c[0] * mu[0] + c[1] * mu[1] + c[2] * mu[2]);
}

PhaseKeyedRule PhaseKeyedRule::trisected(const std::function<double(double)>& phase) const {
    std::vector<double> fine;
    fine.reserve(3 * panels() + 1);
    for (std::size_t p = 0; p < panels(); ++p) {
        const double a = edges_[p], w = edges_[p + 1] - a;
        fine.push_back(a);
        fine.push_back(a + w / 3.0);
        fine.push_back(a + 2.0 * w / 3.0);
    }
    fine.push_back(edges_.back());
    return PhaseKeyedRule(std::move(fine), phase);
}

}  // namespace wwt::quad

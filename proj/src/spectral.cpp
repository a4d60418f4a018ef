#include "wwt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wwt {

namespace {

using Quad4 = std::array<cplx, 4>;

using quad::operator+;
using quad::operator-;

// conj(g_j) g_j' for (11, 12, 21, 22)
Quad4 kernels(const ContinuumModel& m, double w) {
    const double a1 = m.magnitude(1, w), a2 = m.magnitude(2, w);
    const cplx e = std::polar(1.0, -m.phase(w));
    const double c = a1 * a2;
    return {cplx(a1 * a1, 0.0), c * e, c * std::conj(e), cplx(a2 * a2, 0.0)};
}

int initial_panels(const ContinuumModel& m, double lo, double hi) {
    const double frac = (hi - lo) / m.band().width();
    return std::max(16, static_cast<int>(std::ceil(frac * m.phase_variation() / std::numbers::pi)) + 1);
}

}  // namespace

double decay_rate(const ContinuumModel& model, int j, double omega) {
    if (!model.band().contains(omega)) return 0.0;
    return std::numbers::pi * model.density(j, omega);
}

double radiative_shift(const ContinuumModel& model, int j, double omega, const quad::Options& opt) {
    const Band& b = model.band();
    if (!b.interior(omega))
        throw DomainError("radiative_shift: frequency " + std::to_string(omega) +
                          " is not strictly inside the band");
    const double d0 = model.density(j, omega);
    std::vector<double> extra = model.breakpoints();
    extra.push_back(omega);
    auto breaks = quad::panel_breaks(b.lo, b.hi, 16, extra);
    auto r = quad::integrate<double>(
        [&](double w) {
            const double x = omega - w;
            return x == 0.0 ? 0.0 : (model.density(j, w) - d0) / x;
        },
        breaks, opt);
    return r.value + d0 * std::log((omega - b.lo) / (b.hi - omega));
}

LaplaceMatrix laplace_matrix(const ContinuumModel& model, cplx z, const quad::Options& opt) {
    const double e = z.real();
    if (!(e >= 0.0) || !std::isfinite(e) || !std::isfinite(z.imag()))
        throw DomainError("laplace transform requires Re z >= 0");
    const Band& b = model.band();
    const double ws = -z.imag();
    LaplaceMatrix out{z, 0.0, 0.0, 0.0, 0.0, 0.0};

    const bool inside = b.contains(ws);
    const double e0 = e + (inside ? model.sink_continuum(ws) : 0.0);
    if (e0 == 0.0 && (ws == b.lo || ws == b.hi))
        throw DomainError("boundary value at a band edge is undefined");

    std::vector<double> extra = model.breakpoints();
    Quad4 singular{};
    Quad4 h0{};
    if (inside) {
        extra.push_back(ws);
        if (e0 > 0.0)
            for (double s : {1.0, 10.0, 100.0}) {
                extra.push_back(ws - s * e0);
                extra.push_back(ws + s * e0);
            }
        h0 = kernels(model, ws);
        // int_a^b dw / (e0 + i (w - ws))
        const cplx i(0.0, 1.0);
        const cplx s = -i * (std::log(cplx(e0, b.hi - ws)) - std::log(cplx(e0, b.lo - ws)));
        singular = {h0[0] * s, h0[1] * s, h0[2] * s, h0[3] * s};
    } else if (e < 0.1 * b.width()) {
        const double edge = ws < b.lo ? b.lo : b.hi;
        const double d = std::max(std::abs(ws - edge), e);
        for (double s : {1.0, 10.0}) {
            extra.push_back(b.lo + s * d);
            extra.push_back(b.hi - s * d);
        }
    }
    auto breaks = quad::panel_breaks(b.lo, b.hi, initial_panels(model, b.lo, b.hi), extra);
    auto f = [&](double w) -> Quad4 {
        const cplx den(e + model.sink_continuum(w), w - ws);
        Quad4 h = kernels(model, w);
        Quad4 r{h[0] / den, h[1] / den, h[2] / den, h[3] / den};
        if (inside) {
            const cplx den0(e0, w - ws);
            r = r - Quad4{h0[0] / den0, h0[1] / den0, h0[2] / den0, h0[3] / den0};
        }
        return r;
    };
    auto r = quad::integrate<Quad4>(f, breaks, opt);
    const Quad4 v = r.value + singular;
    out.g11 = v[0];
    out.g12 = v[1];
    out.g21 = v[2];
    out.g22 = v[3];
    out.error = r.error;
    return out;
}

LaplaceG laplace_G(const ContinuumModel& model, int j, int jp, cplx z, const quad::Options& opt) {
    if (j < 1 || j > 2 || jp < 1 || jp > 2) throw DomainError("level index must be 1 or 2");
    const auto m = laplace_matrix(model, z, opt);
    return {m(j, jp), z, j, jp};
}

LaplaceMatrix boundary_G(const ContinuumModel& model, double omega, double regulator,
                         const quad::Options& opt) {
    const double eps = regulator < 0.0 ? 1e-6 * model.omega1() : regulator;
    return laplace_matrix(model, cplx(eps, -omega), opt);
}

BoundaryTable::BoundaryTable(const ContinuumModel& model, const quad::Options& opt)
    : model_(&model), opt_(opt) {
    if (model.has_sink()) throw DomainError("BoundaryTable requires a sink-free model");
    const Band& b = model.band();
    double h = b.width() / 128.0;
    if (model.max_phase_slope() > 0.0) h = std::min(h, 1.5 / model.max_phase_slope());
    if (model.max_phase_curvature() > 0.0) h = std::min(h, std::sqrt(0.5 / model.max_phase_curvature()));
    std::vector<quad::Feature> features;
    for (double c : model.breakpoints()) features.push_back({c, model.structure_width()});
    quad::MeshOptions mo;
    mo.h_max = h;
    mo.edge_fraction = 1e9;  // the remainder is smooth up to the band edges
    const auto edges = quad::graded_mesh(b.lo, b.hi, features, mo);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        panel_start_.push_back(x_.size());
        const double c = 0.5 * (edges[p] + edges[p + 1]), hw = 0.5 * (edges[p + 1] - edges[p]);
        for (int k = 0; k < 21; ++k) {
            const int idx = k < 11 ? k : 20 - k;
            const double sgn = k < 10 ? -1.0 : 1.0;
            const double x = c + sgn * hw * quad::detail::xgk[idx];
            x_.push_back(x);
            wk_.push_back(hw * quad::detail::wgk[idx]);
            wg_.push_back(idx % 2 == 1 ? hw * quad::detail::wg[idx / 2] : 0.0);
            const auto kk = kernels(model, x);
            h11_.push_back(kk[0].real());
            h12_.push_back(kk[1]);
            h22_.push_back(kk[3].real());
        }
    }
    panel_start_.push_back(x_.size());
}

LaplaceMatrix BoundaryTable::operator()(double omega) const {
    const ContinuumModel& m = *model_;
    const Band& b = m.band();
    if (!b.interior(omega)) return laplace_matrix(m, cplx(0.0, -omega), opt_);
    const auto k0 = kernels(m, omega);
    const double a11 = k0[0].real(), a22 = k0[3].real();
    const cplx a12 = k0[1];
    const double tiny = 1e-9 * b.width();
    // remainder integrals of (h - h*)/(x - w); G~ = -i * that + h* S
    double r11 = 0.0, r22 = 0.0, est = 0.0;
    cplx r12 = 0.0;
    for (std::size_t p = 0; p + 1 < panel_start_.size(); ++p) {
        double k11 = 0.0, k22 = 0.0, g11 = 0.0, g22 = 0.0;
        cplx k12 = 0.0, g12 = 0.0;
        for (std::size_t q = panel_start_[p]; q < panel_start_[p + 1]; ++q) {
            const double x = x_[q] - omega;
            double d11, d22;
            cplx d12;
            if (std::abs(x) < tiny) {
                const double s = 1e-6 * b.width();
                const auto kp = kernels(m, x_[q] + s), km = kernels(m, x_[q] - s);
                d11 = (kp[0].real() - km[0].real()) / (2 * s);
                d22 = (kp[3].real() - km[3].real()) / (2 * s);
                d12 = (kp[1] - km[1]) / (2 * s);
            } else {
                const double inv = 1.0 / x;
                d11 = (h11_[q] - a11) * inv;
                d22 = (h22_[q] - a22) * inv;
                d12 = (h12_[q] - a12) * inv;
            }
            k11 += wk_[q] * d11;
            k22 += wk_[q] * d22;
            k12 += wk_[q] * d12;
            if (wg_[q] != 0.0) {
                g11 += wg_[q] * d11;
                g22 += wg_[q] * d22;
                g12 += wg_[q] * d12;
            }
        }
        r11 += k11;
        r22 += k22;
        r12 += k12;
        est += std::max({std::abs(k11 - g11), std::abs(k22 - g22), std::abs(k12 - g12)});
    }
    if (est > std::max(opt_.abs_tol, 0.0)) return laplace_matrix(m, cplx(0.0, -omega), opt_);
    const cplx i(0.0, 1.0);
    const cplx s = cplx(std::numbers::pi, -std::log((b.hi - omega) / (omega - b.lo)));
    LaplaceMatrix out;
    out.z = cplx(0.0, -omega);
    out.g11 = -i * r11 + a11 * s;
    out.g22 = -i * r22 + a22 * s;
    out.g12 = -i * r12 + a12 * s;
    // (conj(h12) - conj(a12)) / (i x) integrates to -conj(-i r12)
    out.g21 = -std::conj(-i * r12) + std::conj(a12) * s;
    out.error = est;
    return out;
}

cplx correlation(const ContinuumModel& model, int j, int jp, double t, const quad::Options& opt) {
    if (j < 1 || j > 2 || jp < 1 || jp > 2) throw DomainError("level index must be 1 or 2");
    const Band& b = model.band();
    const double osc = model.phase_variation() + std::abs(t) * b.width();
    const int n = std::max(16, static_cast<int>(std::ceil(osc / std::numbers::pi)) + 1);
    auto breaks = quad::panel_breaks(b.lo, b.hi, n, model.breakpoints());
    auto r = quad::integrate<cplx>(
        [&](double w) {
            return std::conj(model.formfactor(j, w)) * model.formfactor(jp, w) *
                   std::polar(1.0, -w * t);
        },
        breaks, opt);
    return r.value;
}

}  // namespace wwt

#include "wwt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "filon_driver.hpp"

namespace wwt {

namespace {

const cplx I(0.0, 1.0);

cplx level_denominator(const ContinuumModel& m, int j, cplx z) {
    return j == 1 ? z + I * m.omega1() : z + I * m.omega2() + m.sink2();
}

void fill_f(ResolventS& r) {
    const auto& G = r.G;
    r.f11 = -I * (G.g11 * r.s11 + G.g12 * r.s21);
    r.f21 = -I * (G.g21 * r.s11 + G.g22 * r.s21);
    r.f12 = -I * (G.g11 * r.s12 + G.g12 * r.s22);
    r.f22 = -I * (G.g21 * r.s12 + G.g22 * r.s22);
}

}  // namespace

ResolventS resolvent_from_G(const ContinuumModel& model, const LaplaceMatrix& G) {
    const cplx z = G.z;
    const cplx d1 = level_denominator(model, 1, z) + G.g11;
    const cplx d2 = level_denominator(model, 2, z) + G.g22;
    const cplx cross = G.g12 * G.g21;
    const cplx det = d1 * d2 - cross;
    const double scale = std::abs(d1 * d2) + std::abs(cross);
    if (det == 0.0 || std::abs(det) <= 1e-14 * scale) {
        std::ostringstream os;
        os << "resolvent pole on the contour at z = " << z;
        throw PoleError(os.str(), z);
    }
    ResolventS r{};
    r.z = z;
    r.G = G;
    r.s11 = d2 / det;
    r.s22 = d1 / det;
    r.s12 = -G.g12 / det;
    r.s21 = -G.g21 / det;
    fill_f(r);
    return r;
}

ResolventS resolvent(const ContinuumModel& model, cplx z, const quad::Options& opt) {
    return resolvent_from_G(model, laplace_matrix(model, z, opt));
}

ResolventS resolvent_weak_from_G(const ContinuumModel& model, const LaplaceMatrix& G) {
    const cplx z = G.z;
    const cplx d1 = level_denominator(model, 1, z) + G.g11;
    const cplx d2 = level_denominator(model, 2, z) + G.g22;
    if (d1 == 0.0 || d2 == 0.0) {
        std::ostringstream os;
        os << "resolvent pole on the contour at z = " << z;
        throw PoleError(os.str(), z);
    }
    ResolventS r{};
    r.z = z;
    r.G = G;
    r.s11 = 1.0 / d1;
    r.s22 = 1.0 / d2;
    r.s12 = -G.g12 / (d1 * d2);
    r.s21 = -G.g21 / (d1 * d2);
    const auto& g = r.G;
    r.f11 = -I * g.g11 * r.s11;
    r.f22 = -I * g.g22 * r.s22;
    r.f12 = -I * (g.g11 * r.s12 + g.g12 * r.s22);
    r.f21 = -I * (g.g22 * r.s21 + g.g21 * r.s11);
    return r;
}

ResolventS resolvent_weak(const ContinuumModel& model, cplx z, const quad::Options& opt) {
    return resolvent_weak_from_G(model, laplace_matrix(model, z, opt));
}

std::array<cplx, 8> laplace_residuals(const ContinuumModel& model, const ResolventS& r) {
    const cplx a1 = level_denominator(model, 1, r.z), a2 = level_denominator(model, 2, r.z);
    const auto& G = r.G;
    return {
        r.s11 * a1 - (1.0 - I * r.f11),
        r.s21 * a2 - (-I * r.f21),
        r.s12 * a1 - (-I * r.f12),
        r.s22 * a2 - (1.0 - I * r.f22),
        r.f11 + I * (G.g11 * r.s11 + G.g12 * r.s21),
        r.f21 + I * (G.g21 * r.s11 + G.g22 * r.s21),
        r.f12 + I * (G.g11 * r.s12 + G.g12 * r.s22),
        r.f22 + I * (G.g21 * r.s12 + G.g22 * r.s22),
    };
}

std::array<cplx, 6> weak_residuals(const ContinuumModel& model, const ResolventS& r) {
    const cplx a1 = level_denominator(model, 1, r.z), a2 = level_denominator(model, 2, r.z);
    const auto& G = r.G;
    return {
        r.s11 * a1 - (1.0 - I * r.f11),
        r.s22 * a2 - (1.0 - I * r.f22),
        r.s12 * a1 - (-I * r.f12),
        r.f11 + I * G.g11 * r.s11,
        r.f22 + I * G.g22 * r.s22,
        r.f12 + I * (G.g11 * r.s12 + G.g12 * r.s22),
    };
}

namespace {

template <class Boundary>
WavePackets packets_with(const ContinuumModel& model, const std::vector<double>& omega_grid,
                         const Boundary& boundary) {
    WavePackets out;
    out.omega = omega_grid;
    out.f1.resize(omega_grid.size());
    out.f2.resize(omega_grid.size());
    out.f2_out.resize(omega_grid.size());
    for (std::size_t k = 0; k < omega_grid.size(); ++k) {
        const double w = omega_grid[k];
        if (!model.band().contains(w)) throw DomainError("wave_packets: frequency outside the band");
        const cplx g1 = model.formfactor(1, w), g2 = model.formfactor(2, w);
        if (g1 == 0.0 && g2 == 0.0) continue;
        const auto r = resolvent_from_G(model, boundary(w));
        out.f1[k] = -I * (g1 * r.s11 + g2 * r.s21);
        out.f2[k] = I * (g1 * std::conj(r.s21) + g2 * std::conj(r.s22));
        out.f2_out[k] = -I * (g1 * r.s12 + g2 * r.s22);
    }
    return out;
}

}  // namespace

WavePackets wave_packets(const ContinuumModel& model, const std::vector<double>& omega_grid,
                         const quad::Options& opt) {
    if (!model.has_sink() && omega_grid.size() >= 16)
        return packets_with(model, omega_grid, BoundaryTable(model, opt));
    return packets_with(model, omega_grid,
                        [&](double w) { return laplace_matrix(model, cplx(0.0, -w), opt); });
}

ExactResult amplitude_exact(const ContinuumModel& model, const std::vector<double>& times,
                            const ExactOptions& opt) {
    if (model.has_sink())
        throw DomainError("amplitude_exact needs a Hermitian model; sinks are handled by the oracle "
                          "and Markov pipelines");
    ExactResult res;
    if (model.norm2(1) == 0.0 || model.norm2(2) == 0.0) {
        res.series = make_series(times, std::vector<cplx>(times.size(), 0.0));
        return res;
    }
    const Band& band = model.band();
    std::vector<quad::Feature> features = detail::profile_features(model);
    for (int j = 1; j <= 2; ++j) {
        const double wj = model.omega(j);
        if (!band.interior(wj)) continue;
        const double gam = std::max(decay_rate(model, j, wj), 1e-6 * band.width());
        features.push_back({wj, gam});
        const double shift = radiative_shift(model, j, wj, opt.laplace);
        if (band.interior(wj + shift)) features.push_back({wj + shift, gam});
        if (band.interior(wj - shift)) features.push_back({wj - shift, gam});
    }
    quad::MeshOptions mo;
    mo.h_max = detail::phase_h_max(model);
    const auto edges = quad::graded_mesh(band.lo, band.hi, features, mo);

    // per node: f1 conj(f2_out), |f1|^2, |f2_out|^2
    const BoundaryTable table(model, opt.laplace);
    auto sampler = [&](const std::vector<double>& nodes) {
        const auto wp = packets_with(model, nodes, table);
        std::vector<cplx> u(3 * nodes.size());
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            u[3 * k] = wp.f1[k] * std::conj(wp.f2_out[k]);
            u[3 * k + 1] = std::norm(wp.f1[k]);
            u[3 * k + 2] = std::norm(wp.f2_out[k]);
        }
        return u;
    };
    auto phase = [&](double w) { return model.phase(w); };
    auto run = detail::filon_series(edges, phase, sampler, times, opt.amplitude_tol, opt.max_rounds,
                                    "amplitude_exact", 3);
    auto real_part = [](const std::vector<cplx>& v) {
        std::vector<double> r(v.size());
        for (std::size_t k = 0; k < v.size(); ++k) r[k] = v[k].real();
        return r;
    };
    res.norm_f1 = detail::filon_norm(run.rule, real_part(detail::component(run.values, 3, 1)));
    res.norm_f2 = detail::filon_norm(run.rule, real_part(detail::component(run.values, 3, 2)));
    for (int j = 1; j <= 2; ++j) {
        const double deficit = 1.0 - (j == 1 ? res.norm_f1 : res.norm_f2);
        if (deficit > opt.bound_state_tol) {
            std::ostringstream os;
            os << "level " << j << " keeps weight " << deficit
               << " outside the continuum (bound state); its amplitude is not computed";
            throw ModelError(os.str(), deficit);
        }
    }
    res.series = make_series(times, std::move(run.amplitude));
    res.error_estimate = run.error;
    res.panels = run.rule.panels();
    return res;
}

}  // namespace wwt

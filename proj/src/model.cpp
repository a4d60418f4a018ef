#include "wwt/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "wwt/quadrature.hpp"

namespace wwt {

namespace {

constexpr int kSamples = 4096;

void collect_structure(const Profile& p, std::vector<double>& points, double& width) {
    std::visit(
        [&](const auto& q) {
            using P = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<P, Lorentzian>) {
                points.insert(points.end(), {q.center - q.width, q.center, q.center + q.width});
                width = std::min(width, q.width);
            } else if constexpr (std::is_same_v<P, LorentzianSum>) {
                for (double c : q.centers) points.insert(points.end(), {c - q.width, c, c + q.width});
                width = std::min(width, q.width);
            } else if constexpr (std::is_same_v<P, Tabulated>) {
                if (q.x().size() <= 512) points.insert(points.end(), q.x().begin(), q.x().end());
            }
        },
        p.kind());
}

double minimum_on_band(const Profile& p, const Band& band) {
    if (const auto* lin = std::get_if<Linear>(&p.kind()))
        return std::min(lin->offset + lin->slope * band.lo, lin->offset + lin->slope * band.hi);
    if (const auto* tab = std::get_if<Tabulated>(&p.kind())) {
        if (tab->extrapolation() == Extrapolation::error && (band.lo < tab->lo() || band.hi > tab->hi()))
            throw ModelError("tabulated profile does not cover the band");
    }
    double m = p.parameter_minimum();
    if (std::isinf(m) && m < 0) {
        if (const auto* lor = std::get_if<Lorentzian>(&p.kind()); lor && !(lor->width > 0.0))
            throw ModelError("lorentzian width must be positive");
        if (const auto* ls = std::get_if<LorentzianSum>(&p.kind())) {
            if (!(ls->width > 0.0)) throw ModelError("lorentzian width must be positive");
            if (ls->centers.size() != ls->weights.size())
                throw ModelError("lorentzian sum: centers and weights differ in length");
            if (ls->scale < 0.0) throw ModelError("lorentzian sum: negative scale");
        }
    }
    return m;
}

bool piecewise_linear(const Profile& p) {
    const auto* tab = std::get_if<Tabulated>(&p.kind());
    return tab && tab->interpolation() == Interpolation::linear;
}

}  // namespace

cplx ContinuumModel::formfactor(int j, double w) const {
    const double m = magnitude(j, w);
    if (j == 1) return {m, 0.0};
    return std::polar(m, -phase(w));
}

bool ContinuumModel::has_sink() const {
    return spec_.sink2 > 0.0 || !spec_.sink_continuum.is_zero();
}

ContinuumModel build_continuum(const ContinuumSpec& spec) {
    const Band& band = spec.band;
    if (!std::isfinite(band.lo) || !std::isfinite(band.hi) || !(band.hi > band.lo))
        throw ModelError("band must be a finite interval with lo < hi");
    if (!std::isfinite(spec.omega1) || !std::isfinite(spec.omega2) || !(spec.omega1 > 0.0) ||
        !(spec.omega2 > 0.0))
        throw ModelError("level frequencies must be positive and finite");
    if (!std::isfinite(spec.sink2) || spec.sink2 < 0.0)
        throw ModelError("acceptor sink rate must be non-negative", spec.sink2);
    if (!(spec.tol_orth >= 0.0)) throw ModelError("tol_orth must be non-negative");

    ContinuumModel m;
    m.spec_ = spec;
    m.density1_ = spec.density;
    m.density2_ = spec.density2 ? *spec.density2 : spec.density;
    m.spec_.density2 = m.density2_;

    for (const Profile* p : {&m.density1_, &m.density2_, &m.spec_.sink_continuum}) {
        const double lo = minimum_on_band(*p, band);
        if (lo < 0.0) {
            const bool sink = p == &m.spec_.sink_continuum;
            throw ModelError(sink ? "continuum sink rate is negative" : "coupling density is negative",
                             lo);
        }
    }
    (void)minimum_on_band(m.spec_.phase, band);

    // sampled scan: catches negative values of interpolated tables and bad phases
    double slope = 0.0, curv = 0.0, tv = 0.0;
    const double dw = band.width() / kSamples;
    double prev = m.spec_.phase(band.lo), prev_slope = 0.0;
    for (int k = 0; k <= kSamples; ++k) {
        const double w = band.lo + k * dw;
        for (const Profile* p : {&m.density1_, &m.density2_, &m.spec_.sink_continuum}) {
            const double v = (*p)(w);
            if (!std::isfinite(v)) throw ModelError("profile is not finite on the band");
            if (v < 0.0) throw ModelError("profile is negative on the band", v);
        }
        const double l = m.spec_.phase(w);
        if (!std::isfinite(l)) throw ModelError("phase is not finite on the band");
        if (k > 0) {
            const double s = (l - prev) / dw;
            tv += std::abs(l - prev);
            slope = std::max(slope, std::abs(s));
            if (k > 1) curv = std::max(curv, std::abs(s - prev_slope) / dw);
            prev_slope = s;
        }
        prev = l;
    }
    m.phase_variation_ = tv;
    m.max_slope_ = slope;
    m.max_curvature_ = piecewise_linear(m.spec_.phase) ? 0.0 : curv;

    double width = band.width();
    std::vector<double> pts;
    for (const Profile* p : {&m.density1_, &m.density2_, &m.spec_.phase, &m.spec_.sink_continuum})
        collect_structure(*p, pts, width);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<double> inside;
    for (double x : pts)
        if (band.interior(x)) inside.push_back(x);
    m.breakpoints_ = inside;
    m.structure_width_ = width;

    const int n0 = std::max(16, static_cast<int>(std::ceil(tv / M_PI)) + 1);
    auto breaks = quad::panel_breaks(band.lo, band.hi, n0, inside);
    quad::Options opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-11;
    for (int j = 1; j <= 2; ++j) {
        const Profile& d = j == 1 ? m.density1_ : m.density2_;
        auto r = quad::integrate<double>([&](double w) { return d(w); }, breaks, opt);
        if (!std::isfinite(r.value)) throw ModelError("formfactor is not square-integrable");
        (j == 1 ? m.norm2_1_ : m.norm2_2_) = r.value;
    }

    if (m.norm2_1_ > 0.0 && m.norm2_2_ > 0.0) {
        const double ov = orthogonality_overlap(m);
        if (ov > spec.tol_orth) {
            std::ostringstream os;
            os << "formfactors are not orthogonal: overlap " << ov << " exceeds tol_orth "
               << spec.tol_orth;
            throw ModelError(os.str(), ov);
        }
    }
    return m;
}

double orthogonality_overlap(const ContinuumModel& model) {
    const double n1 = model.norm2(1), n2 = model.norm2(2);
    if (!(n1 > 0.0) || !(n2 > 0.0)) throw ZeroNormError("overlap undefined: formfactor has zero norm");
    const Band& band = model.band();
    const int n0 = std::max(16, static_cast<int>(std::ceil(model.phase_variation() / M_PI)) + 1);
    auto breaks = quad::panel_breaks(band.lo, band.hi, n0, model.breakpoints());
    quad::Options opt;
    opt.abs_tol = 1e-13 * std::sqrt(n1 * n2);
    opt.rel_tol = 1e-10;
    auto r = quad::integrate<cplx>(
        [&](double w) { return std::conj(model.formfactor(1, w)) * model.formfactor(2, w); },
        breaks, opt);
    return std::min(1.0, std::abs(r.value) / std::sqrt(n1 * n2));
}

double orthogonality_overlap(const DiscreteWW& dww) {
    if (dww.couplings1.size() != dww.couplings2.size())
        throw ModelError("coupling vectors differ in length");
    cplx s = 0.0;
    double n1 = 0.0, n2 = 0.0;
    for (std::size_t a = 0; a < dww.couplings1.size(); ++a) {
        s += std::conj(dww.couplings1[a]) * dww.couplings2[a];
        n1 += std::norm(dww.couplings1[a]);
        n2 += std::norm(dww.couplings2[a]);
    }
    if (!(n1 > 0.0) || !(n2 > 0.0)) throw ZeroNormError("overlap undefined: formfactor has zero norm");
    return std::min(1.0, std::abs(s) / std::sqrt(n1 * n2));
}

DiscreteNetwork build_network(const std::vector<double>& site_energies,
                              const std::vector<Hopping>& hoppings) {
    const int n = static_cast<int>(site_energies.size());
    if (n < 3) throw ModelError("network needs at least 3 sites", n);
    if (n > max_network_sites)
        throw ModelError("network exceeds " + std::to_string(max_network_sites) + " sites", n);
    DiscreteNetwork net;
    net.h_ = CMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        if (!std::isfinite(site_energies[k])) throw ModelError("site energy is not finite");
        net.h_(k, k) = site_energies[k];
    }
    std::set<std::pair<int, int>> seen;
    for (const auto& hop : hoppings) {
        if (hop.k < 1 || hop.k > n || hop.l < 1 || hop.l > n)
            throw ModelError("hopping (" + std::to_string(hop.k) + "," + std::to_string(hop.l) +
                             ") refers to a site outside 1.." + std::to_string(n));
        if (hop.k == hop.l)
            throw ModelError("hopping (" + std::to_string(hop.k) + "," + std::to_string(hop.l) +
                             ") is diagonal; set site energies instead");
        if (!std::isfinite(hop.amplitude.real()) || !std::isfinite(hop.amplitude.imag()))
            throw ModelError("hopping amplitude is not finite");
        const auto key = std::minmax(hop.k, hop.l);
        if (!seen.insert(key).second)
            throw ModelError("duplicate hopping between sites " + std::to_string(key.first) + " and " +
                             std::to_string(key.second));
        net.h_(hop.k - 1, hop.l - 1) = hop.amplitude;
        net.h_(hop.l - 1, hop.k - 1) = std::conj(hop.amplitude);
    }
    return net;
}

CMatrix DiscreteWW::assemble() const {
    const std::size_t m = levels.size();
    if (couplings1.size() != m || couplings2.size() != m)
        throw ModelError("levels and couplings differ in length");
    CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(m + 2), static_cast<Eigen::Index>(m + 2));
    h(0, 0) = omega1;
    h(1, 1) = omega2;
    for (std::size_t a = 0; a < m; ++a) {
        const auto i = static_cast<Eigen::Index>(a + 2);
        h(i, i) = levels[a];
        h(i, 0) = couplings1[a];
        h(0, i) = std::conj(couplings1[a]);
        h(i, 1) = couplings2[a];
        h(1, i) = std::conj(couplings2[a]);
    }
    return h;
}

}  // namespace wwt

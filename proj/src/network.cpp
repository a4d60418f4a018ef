#include "wwt/network.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace wwt {

namespace {

constexpr double kDegenerate = 1e-10;
constexpr double kUndefinedWeight = 1e-12;

// Unwrap so that consecutive differences land in (-pi, pi]. A jump of exactly pi (real
// couplings on a chain) is ambiguous; it is taken upward, which gives a positive delay.
std::vector<double> unwrap(const std::vector<double>& phi) {
    std::vector<double> out(phi.size());
    if (phi.empty()) return out;
    out[0] = phi[0];
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t k = 1; k < phi.size(); ++k) {
        double d = std::remainder(phi[k] - phi[k - 1], two_pi);
        if (std::abs(std::abs(d) - std::numbers::pi) <= 1e-9) d = std::numbers::pi;
        out[k] = out[k - 1] + d;
    }
    return out;
}

struct Cluster {
    double energy;
    double weight1, weight2;
    cplx cross;  // sum conj(c1) c2
};

std::vector<Cluster> clusters(const DiscreteWW& dww) {
    std::vector<std::size_t> order(dww.levels.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return dww.levels[a] < dww.levels[b]; });
    double scale = 0.0;
    for (double e : dww.levels) scale = std::max(scale, std::abs(e));
    std::vector<Cluster> out;
    std::size_t count = 0;
    for (std::size_t idx : order) {
        const double e = dww.levels[idx];
        const cplx c1 = dww.couplings1[idx], c2 = dww.couplings2[idx];
        if (!out.empty() && std::abs(e - out.back().energy / count) <= kDegenerate * std::max(scale, 1.0)) {
            auto& c = out.back();
            c.energy += e;
            c.weight1 += std::norm(c1);
            c.weight2 += std::norm(c2);
            c.cross += std::conj(c1) * c2;
            ++count;
        } else {
            if (!out.empty()) out.back().energy /= count;
            out.push_back({e, std::norm(c1), std::norm(c2), std::conj(c1) * c2});
            count = 1;
        }
    }
    if (!out.empty()) out.back().energy /= count;
    return out;
}

// C = op(A) * B through BLAS; Eigen's own kernel is several times slower at n ~ 2000.
CMatrix gemm(const CMatrix& a, const CMatrix& b, bool adjoint_a) {
    CMatrix c(adjoint_a ? a.cols() : a.rows(), b.cols());
    const cplx one(1.0, 0.0), zero(0.0, 0.0);
    cblas_zgemm(CblasColMajor, adjoint_a ? CblasConjTrans : CblasNoTrans, CblasNoTrans,
                static_cast<int>(c.rows()), static_cast<int>(c.cols()), static_cast<int>(b.rows()), &one,
                a.data(), static_cast<int>(a.rows()), b.data(), static_cast<int>(b.rows()), &zero, c.data(),
                static_cast<int>(c.rows()));
    return c;
}

// Mass of (eta/pi)/((w-e)^2+eta^2) inside [a, b].
double lorentz_mass(double e, double eta, double a, double b) {
    return (std::atan((b - e) / eta) - std::atan((a - e) / eta)) / std::numbers::pi;
}

}  // namespace

Eigensystem spectral_decompose(const CMatrix& h) {
    if (h.rows() != h.cols()) throw DomainError("spectral_decompose: matrix is not square");
    const lapack_int n = static_cast<lapack_int>(h.rows());
    Eigensystem es;
    if (n == 0) return es;
    if (!h.allFinite()) throw DomainError("spectral_decompose: non-finite entries");
    const double hn = h.norm();
    const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(hn, 1e-300))
        throw DomainError("spectral_decompose: matrix is not Hermitian (max |h - h^H| = " +
                          std::to_string(asym) + ")");
    CMatrix a = 0.5 * (h + h.adjoint());
    es.values.resize(n);
    es.vectors.resize(n, n);
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_zheevr(
        LAPACK_COL_MAJOR, 'V', 'A', 'U', n, reinterpret_cast<lapack_complex_double*>(a.data()), n, 0.0, 0.0,
        0, 0, 0.0, &found, es.values.data(), reinterpret_cast<lapack_complex_double*>(es.vectors.data()), n,
        isuppz.data());
    if (info != 0 || found != n)
        throw NumericalError("zheevr failed (info " + std::to_string(info) + ")", static_cast<double>(info));
    const double scale = std::max(hn, 1e-300);
    const CMatrix r = gemm(h, es.vectors, false) - es.vectors * es.values.asDiagonal();
    es.residual = r.colwise().norm().maxCoeff() / scale;
    es.orthogonality =
        (gemm(es.vectors, es.vectors, true) - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (es.residual > 1e-10)
        throw NumericalError("eigendecomposition residual " + std::to_string(es.residual), es.residual);
    if (es.orthogonality > 1e-10)
        throw NumericalError("eigenvectors not orthonormal: " + std::to_string(es.orthogonality),
                             es.orthogonality);
    return es;
}

DiscreteWW embed_ww(const DiscreteNetwork& net, double tol_orth) {
    const CMatrix& h = net.h();
    const Eigen::Index n = h.rows();
    const double h12 = std::abs(h(0, 1));
    if (h12 > 0.0) {
        std::ostringstream os;
        os << "direct donor-acceptor hopping |h12| = " << h12 << " must vanish";
        throw ModelError(os.str(), h12);
    }
    const CVector g1 = h.block(2, 0, n - 2, 1);
    const CVector g2 = h.block(2, 1, n - 2, 1);
    DiscreteWW dww;
    dww.omega1 = h(0, 0).real();
    dww.omega2 = h(1, 1).real();
    dww.tol_orth = tol_orth;
    const double n1 = g1.squaredNorm(), n2 = g2.squaredNorm();
    if (n1 > 0.0 && n2 > 0.0) {
        const double ov = std::abs(g1.dot(g2)) / std::sqrt(n1 * n2);
        if (ov > tol_orth) {
            std::ostringstream os;
            os << "donor and acceptor couplings overlap by " << ov << " (tol_orth " << tol_orth << ")";
            throw ModelError(os.str(), ov);
        }
    }
    const auto es = spectral_decompose(h.block(2, 2, n - 2, n - 2));
    const CVector c1 = es.vectors.adjoint() * g1;
    const CVector c2 = es.vectors.adjoint() * g2;
    for (Eigen::Index a = 0; a < n - 2; ++a) {
        dww.levels.push_back(es.values(a));
        dww.couplings1.push_back(c1(a));
        dww.couplings2.push_back(c2(a));
    }
    return dww;
}

double level_spacing(const std::vector<double>& levels, double omega) {
    std::vector<double> e = levels;
    std::sort(e.begin(), e.end());
    double scale = 1.0;
    for (double x : e) scale = std::max(scale, std::abs(x));
    std::vector<double> u;
    for (double x : e)
        if (u.empty() || x - u.back() > kDegenerate * scale) u.push_back(x);
    if (u.size() < 2) throw DomainError("level_spacing: need at least two distinct levels");
    auto it = std::lower_bound(u.begin(), u.end(), omega);
    if (it == u.begin()) return u[1] - u[0];
    if (it == u.end()) return u.back() - u[u.size() - 2];
    const std::size_t k = static_cast<std::size_t>(it - u.begin());
    if (std::abs(*it - omega) <= kDegenerate * scale) {
        double d = u.back() - u.front();
        if (k > 0) d = std::min(d, u[k] - u[k - 1]);
        if (k + 1 < u.size()) d = std::min(d, u[k + 1] - u[k]);
        return d;
    }
    return u[k] - u[k - 1];
}

Envelope build_envelope(const DiscreteWW& dww, double eta) {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ModelError("envelope width eta must be positive", eta);
    if (dww.levels.size() < 2) throw ModelError("envelope needs at least two levels");
    if (dww.couplings1.size() != dww.levels.size() || dww.couplings2.size() != dww.levels.size())
        throw ModelError("levels and couplings differ in length");
    struct {
        double norm1, norm2;
        std::vector<double> phase_levels, phase_values;
        std::vector<std::string> warnings;
    } env;
    const auto cl = clusters(dww);
    const double lo = cl.front().energy - 10.0 * eta, hi = cl.back().energy + 10.0 * eta;

    LorentzianSum s1{{}, {}, eta, 1.0}, s2{{}, {}, eta, 1.0};
    double total1 = 0.0, total2 = 0.0, kept1 = 0.0, kept2 = 0.0;
    for (const auto& c : cl) {
        s1.centers.push_back(c.energy);
        s2.centers.push_back(c.energy);
        s1.weights.push_back(c.weight1);
        s2.weights.push_back(c.weight2);
        const double m = lorentz_mass(c.energy, eta, lo, hi);
        total1 += c.weight1;
        total2 += c.weight2;
        kept1 += c.weight1 * m;
        kept2 += c.weight2 * m;
    }
    s1.scale = kept1 > 0.0 ? total1 / kept1 : 1.0;
    s2.scale = kept2 > 0.0 ? total2 / kept2 : 1.0;
    env.norm1 = std::sqrt(s1.scale);
    env.norm2 = std::sqrt(s2.scale);

    std::vector<double> phi;
    std::size_t skipped = 0;
    for (const auto& c : cl) {
        if (c.weight1 < kUndefinedWeight || c.weight2 < kUndefinedWeight || std::abs(c.cross) == 0.0) {
            ++skipped;
            continue;
        }
        env.phase_levels.push_back(c.energy);
        // g2 = exp(-iL)|g2| and the couplings play the role of g_j, so L = -arg(conj(c1) c2).
        phi.push_back(-std::arg(c.cross));
    }
    if (skipped > 0) {
        std::ostringstream os;
        os << skipped << " level(s) with vanishing coupling excluded from the phase envelope";
        env.warnings.push_back(os.str());
    }
    env.phase_values = unwrap(phi);

    ContinuumSpec spec;
    spec.omega1 = dww.omega1;
    spec.omega2 = dww.omega2;
    spec.band = {lo, hi};
    spec.density = s1;
    spec.density2 = Profile(s2);
    spec.tol_orth = 1.0;
    if (env.phase_levels.size() >= 2) {
        spec.phase = Tabulated(env.phase_levels, env.phase_values, Interpolation::linear, Extrapolation::constant);
    } else if (env.phase_levels.size() == 1) {
        spec.phase = Constant{env.phase_values[0]};
    } else {
        spec.phase = Constant{0.0};
    }
    ContinuumModel model = build_continuum(spec);
    const double ov = orthogonality_overlap(model);
    if (ov > dww.tol_orth) {
        std::ostringstream os;
        os << "envelope formfactors overlap by " << ov << " (discrete overlap " << orthogonality_overlap(dww) << ")";
        env.warnings.push_back(os.str());
    }
    return Envelope{std::move(model), eta, env.norm1, env.norm2, std::move(env.phase_levels),
                    std::move(env.phase_values), std::move(env.warnings)};
}

ApetReport apet_report(const DiscreteWW& dww, double eta, const ApetThresholds& th) {
    const auto env = build_envelope(dww, eta);
    ApetReport rep = apet_report(env.model, th);
    rep.warnings.insert(rep.warnings.end(), env.warnings.begin(), env.warnings.end());
    rep.eta = eta;
    rep.level_spacing = level_spacing(dww.levels, rep.omega0);
    Condition d;
    d.margin = eta / rep.level_spacing;
    d.ok = d.margin >= th.broadening;
    rep.broadening = d;
    return rep;
}

}  // namespace wwt

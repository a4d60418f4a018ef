#include "wwt/oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "wwt/spectral.hpp"

namespace wwt {

namespace {

const cplx I(0.0, 1.0);

CMatrix exp_step(const CMatrix& heff, double t) {
    const CMatrix a = (-I * t) * heff;
    return a.exp();
}

}  // namespace

CMatrix DiscreteSystem::effective() const {
    CMatrix m = h;
    if (sink.size() > 0)
        for (Eigen::Index k = 0; k < sink.size(); ++k) m(k, k) -= I * sink(k);
    return m;
}

DiscreteSystem make_system(CMatrix h, Eigen::VectorXd sink) {
    if (h.rows() != h.cols() || h.rows() < 2) throw DomainError("system matrix must be square with n >= 2");
    if (!h.allFinite()) throw DomainError("system matrix has non-finite entries");
    const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(h.norm(), 1e-300)) throw DomainError("system matrix is not Hermitian");
    if (sink.size() != 0) {
        if (sink.size() != h.rows()) throw DomainError("sink vector has the wrong length");
        if (!sink.allFinite() || (sink.array() < 0.0).any()) throw DomainError("sink rates must be non-negative");
    }
    DiscreteSystem s;
    s.h = std::move(h);
    s.sink = std::move(sink);
    s.labels.reserve(static_cast<std::size_t>(s.h.rows()));
    for (Eigen::Index k = 0; k < s.h.rows(); ++k) s.labels.push_back("site" + std::to_string(k + 1));
    return s;
}

DiscreteSystem discretize_continuum(const ContinuumModel& model, int modes) {
    if (modes < 10) throw DomainError("discretize_continuum needs at least 10 modes");
    const Band& b = model.band();
    const Eigen::Index n = modes + 2;
    DiscreteSystem s;
    s.h = CMatrix::Zero(n, n);
    s.sink = Eigen::VectorXd::Zero(n);
    s.delta_omega = b.width() / modes;
    const double root = std::sqrt(s.delta_omega);
    s.h(0, 0) = model.omega1();
    s.h(1, 1) = model.omega2();
    s.sink(1) = model.sink2();
    s.labels = {"donor", "acceptor"};
    s.modes.resize(static_cast<std::size_t>(modes));
    for (int m = 0; m < modes; ++m) {
        const double w = b.lo + (m + 0.5) * s.delta_omega;
        s.modes[m] = w;
        const Eigen::Index k = m + 2;
        s.h(k, k) = w;
        const cplx c1 = model.formfactor(1, w) * root;
        const cplx c2 = model.formfactor(2, w) * root;
        s.h(k, 0) = c1;
        s.h(0, k) = std::conj(c1);
        s.h(k, 1) = c2;
        s.h(1, k) = std::conj(c2);
        s.sink(k) = model.sink_continuum(w);
        s.labels.push_back("mode" + std::to_string(m + 1));
    }
    double gmin = 0.0;
    for (int j = 1; j <= 2; ++j) {
        const double g = decay_rate(model, j, model.omega(j));
        if (g > 0.0) gmin = gmin > 0.0 ? std::min(gmin, g) : g;
    }
    if (gmin > 0.0 && s.delta_omega > gmin / 5.0 * (1.0 + 1e-9)) {
        std::ostringstream os;
        os << "mode spacing " << s.delta_omega << " exceeds gamma/5 = " << gmin / 5.0
           << "; the discretization does not resolve the resonance";
        s.warnings.push_back(os.str());
    }
    return s;
}

DiscreteSystem network_system(const DiscreteNetwork& net) {
    auto s = make_system(net.h());
    s.labels[0] = "donor";
    s.labels[1] = "acceptor";
    return s;
}

Propagator::Propagator(DiscreteSystem system) : system_(std::move(system)) {
    if (!system_.h.allFinite() || (system_.sink.size() > 0 && !system_.sink.allFinite()))
        throw DomainError("propagator: non-finite entries");
    if (!system_.has_sink()) eig_ = std::make_shared<Eigensystem>(spectral_decompose(system_.h));
}

const Eigensystem& Propagator::eigensystem() const {
    if (!eig_) throw DomainError("propagator has sinks; no Hermitian eigensystem");
    return *eig_;
}

PropagationState Propagator::evolve(const CVector& psi0, double t) const {
    if (psi0.size() != system_.size()) throw DomainError("evolve: state has the wrong dimension");
    if (!std::isfinite(t)) throw DomainError("evolve: time is not finite");
    PropagationState out;
    out.basis_labels = system_.labels;
    if (eig_) {
        CVector c = eig_->vectors.adjoint() * psi0;
        for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::polar(1.0, -eig_->values(k) * t);
        out.vector = eig_->vectors * c;
    } else {
        out.vector = exp_step(system_.effective(), t) * psi0;
    }
    return out;
}

cplx Propagator::amplitude(Eigen::Index to, Eigen::Index from, double t) const {
    if (eig_) {
        const auto& v = eig_->vectors;
        cplx s = 0.0;
        for (Eigen::Index k = 0; k < v.cols(); ++k)
            s += v(to, k) * std::conj(v(from, k)) * std::polar(1.0, -eig_->values(k) * t);
        return s;
    }
    CVector e = CVector::Zero(system_.size());
    e(from) = 1.0;
    return evolve(e, t).vector(to);
}

PropagationState evolve(const DiscreteSystem& system, const CVector& psi0, double t) {
    return Propagator(system).evolve(psi0, t);
}

OracleResult amplitude_oracle(const Propagator& prop, const std::vector<double>& times,
                              const OracleOptions& opt) {
    const auto& sys = prop.system();
    const Eigen::Index n = sys.size();
    if (opt.from < 0 || opt.from >= n || opt.to < 0 || opt.to >= n)
        throw DomainError("amplitude_oracle: basis index out of range");
    OracleResult res;
    res.warnings = sys.warnings;
    std::vector<cplx> amp(times.size());
    CVector psi0 = CVector::Zero(n);
    psi0(opt.from) = 1.0;

    if (prop.hermitian()) {
        const auto& es = prop.eigensystem();
        const CVector w = es.vectors.row(opt.to).transpose().cwiseProduct(es.vectors.row(opt.from).adjoint());
        for (std::size_t k = 0; k < times.size(); ++k) {
            cplx s = 0.0;
            for (Eigen::Index a = 0; a < n; ++a) s += w(a) * std::polar(1.0, -es.values(a) * times[k]);
            amp[k] = s;
        }
        const double nn = static_cast<double>(n) * static_cast<double>(n);
        std::size_t audits = times.size();
        if (nn * static_cast<double>(audits) > opt.audit_budget)
            audits = std::max<std::size_t>(8, static_cast<std::size_t>(opt.audit_budget / nn));
        audits = std::min(audits, times.size());
        const CVector c0 = es.vectors.adjoint() * psi0;
        double prev_norm = 1.0;
        for (std::size_t q = 0; q < audits; ++q) {
            const std::size_t k = audits == 1 ? 0 : q * (times.size() - 1) / (audits - 1);
            CVector c = c0;
            for (Eigen::Index a = 0; a < n; ++a) c(a) *= std::polar(1.0, -es.values(a) * times[k]);
            const double nrm = (es.vectors * c).norm();
            res.norm_times.push_back(times[k]);
            res.norms.push_back(nrm);
            res.max_norm_defect = std::max(res.max_norm_defect, std::abs(nrm - 1.0));
            if (nrm > prev_norm + 1e-12) res.norm_non_increasing = false;
            prev_norm = nrm;
        }
    } else {
        const CMatrix heff = sys.effective();
        std::map<double, CMatrix> steps;
        auto step = [&](double dt) -> const CMatrix& {
            for (auto& [key, u] : steps)
                if (std::abs(key - dt) <= 1e-12 * std::max(1.0, std::abs(dt))) return u;
            return steps.emplace(dt, exp_step(heff, dt)).first->second;
        };
        CVector psi = psi0;
        double t_prev = 0.0, prev_norm = 1.0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double dt = times[k] - t_prev;
            if (dt != 0.0) psi = step(dt) * psi;
            t_prev = times[k];
            amp[k] = psi(opt.to);
            const double nrm = psi.norm();
            res.norm_times.push_back(times[k]);
            res.norms.push_back(nrm);
            if (nrm > prev_norm + 1e-12) res.norm_non_increasing = false;
            prev_norm = nrm;
        }
    }
    res.series = make_series(times, std::move(amp));
    return res;
}

OracleResult amplitude_oracle(const DiscreteSystem& system, const std::vector<double>& times,
                              const OracleOptions& opt) {
    return amplitude_oracle(Propagator(system), times, opt);
}

}  // namespace wwt

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wwt/model.hpp"
#include "wwt/network.hpp"
#include "wwt/series.hpp"

namespace wwt {

/// Finite single-exciton Hamiltonian H_eff = h - i diag(sink), h Hermitian, sink >= 0.
struct DiscreteSystem {
    CMatrix h;
    Eigen::VectorXd sink;
    std::vector<std::string> labels;
    std::vector<double> modes;   ///< mode frequencies of a discretized continuum
    double delta_omega = 0.0;
    std::vector<std::string> warnings;

    Eigen::Index size() const noexcept { return h.rows(); }
    bool has_sink() const { return sink.size() > 0 && (sink.array() != 0.0).any(); }
    CMatrix effective() const;
};

/// Donor, acceptor and M midpoint modes of uniform band panels; couplings
/// g_j(w_m) sqrt(dw). Warns when dw > gamma/5. DomainError for M < 10.
DiscreteSystem discretize_continuum(const ContinuumModel& model, int modes);

DiscreteSystem network_system(const DiscreteNetwork& net);
/// DomainError when h is not Hermitian or sink has negative or the wrong number of entries.
DiscreteSystem make_system(CMatrix h, Eigen::VectorXd sink = {});

struct PropagationState {
    CVector vector;
    std::vector<std::string> basis_labels;
    double norm() const { return vector.norm(); }
};

/// exp(-i H_eff t). Hermitian systems are diagonalized once; systems with sinks use a
/// scaling-and-squaring matrix exponential.
class Propagator {
public:
    explicit Propagator(DiscreteSystem system);

    PropagationState evolve(const CVector& psi0, double t) const;
    /// <to| exp(-i H t) |from>, 0-based basis indices.
    cplx amplitude(Eigen::Index to, Eigen::Index from, double t) const;

    const DiscreteSystem& system() const noexcept { return system_; }
    bool hermitian() const noexcept { return static_cast<bool>(eig_); }
    const Eigensystem& eigensystem() const;

private:
    DiscreteSystem system_;
    std::shared_ptr<const Eigensystem> eig_;
};

PropagationState evolve(const DiscreteSystem& system, const CVector& psi0, double t);

struct OracleOptions {
    Eigen::Index from = 0;
    Eigen::Index to = 1;
    double audit_budget = 4e8;  ///< caps n^2 * (audited points) for Hermitian norm audits
};

struct OracleResult {
    AmplitudeSeries series;
    std::vector<double> norm_times;
    std::vector<double> norms;
    double max_norm_defect = 0.0;     ///< max | ||psi|| - 1 | (Hermitian)
    bool norm_non_increasing = true;  ///< ||psi|| never grows beyond 1e-12
    std::vector<std::string> warnings;
};

/// Transfer amplitude on a time grid with a norm audit. One decomposition (or one
/// exponential per distinct step) is reused across the grid.
OracleResult amplitude_oracle(const Propagator& prop, const std::vector<double>& times,
                              const OracleOptions& opt = {});
OracleResult amplitude_oracle(const DiscreteSystem& system, const std::vector<double>& times,
                              const OracleOptions& opt = {});

}  // namespace wwt

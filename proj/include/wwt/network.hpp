#pragma once

#include <string>
#include <vector>

#include "wwt/markov.hpp"
#include "wwt/model.hpp"

namespace wwt {

struct Eigensystem {
    Eigen::VectorXd values;   ///< ascending
    CMatrix vectors;          ///< columns are orthonormal eigenvectors
    double residual = 0.0;    ///< max_a ||H v_a - e_a v_a|| / ||H||
    double orthogonality = 0.0;  ///< max |V^H V - 1|
};

/// Hermitian eigendecomposition (LAPACK zheevr). DomainError for non-Hermitian input
/// (relative 1e-12); NumericalError when the residual or orthogonality checks exceed
/// 1e-10.
Eigensystem spectral_decompose(const CMatrix& h);

/// Rewrites the network in the eigenbasis of its intermediate block (sites 3..N).
/// ModelError when h12 != 0 (measured() = |h12|) or the donor and acceptor couplings
/// overlap by more than tol_orth (measured() = overlap).
DiscreteWW embed_ww(const DiscreteNetwork& net, double tol_orth = 0.02);

/// Continuum envelope of a discrete model.
struct Envelope {
    ContinuumModel model;
    double eta = 0.0;
    double norm1 = 1.0;  ///< N_1 rescaling of the Lorentzian smear
    double norm2 = 1.0;
    std::vector<double> phase_levels;  ///< cluster energies used for L(w)
    std::vector<double> phase_values;  ///< unwrapped L = -arg(sum conj(c1) c2) at those energies
    std::vector<std::string> warnings;
};

/// |g_j(w)|^2 = N_j^2 sum_a |<a|g_j>|^2 (eta/pi) / ((w - e_a)^2 + eta^2) on
/// [min e - 10 eta, max e + 10 eta], with N_j chosen so the band carries the full weight.
/// L(w) interpolates -arg(sum conj(c1) c2) per degenerate cluster, unwrapped (exact pi
/// jumps taken upward), linearly, with constant extrapolation. The continuum overlap of
/// the smeared formfactors is reported as a warning; orthogonality is enforced on the
/// discrete couplings.
Envelope build_envelope(const DiscreteWW& dww, double eta);

/// Spacing of the two consecutive distinct levels that bracket omega (the nearer pair at
/// either end, the smaller adjacent gap when omega hits a level).
double level_spacing(const std::vector<double>& levels, double omega);

/// Conditions (a)-(c) evaluated on the envelope model, (d) from eta and the spacing
/// around omega0.
ApetReport apet_report(const DiscreteWW& dww, double eta, const ApetThresholds& th = {});

}  // namespace wwt

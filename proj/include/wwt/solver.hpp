#pragma once

#include <array>
#include <string>
#include <vector>

#include "wwt/model.hpp"
#include "wwt/series.hpp"
#include "wwt/spectral.hpp"

namespace wwt {

/// Level-space resolvent S~_jj'(z) = <j|(z + iH)^-1|j'> together with the auxiliary
/// transforms F~_jj'(z) = <g_j|(z + iH)^-1|j'> and the bath transforms used.
struct ResolventS {
    cplx z;
    cplx s11, s22, s12, s21;
    cplx f11, f12, f21, f22;
    LaplaceMatrix G;
};

/// Complete solution of the Laplace-domain system (2x2 Feshbach inverse).
/// PoleError when the determinant vanishes on the contour.
ResolventS resolvent(const ContinuumModel& model, cplx z, const quad::Options& opt = {});
ResolventS resolvent_from_G(const ContinuumModel& model, const LaplaceMatrix& G);

/// Weak-coupling closed form: S11 = 1/D1, S22 = 1/D2, S12 = -G12/(D1 D2), and the
/// mirrored S21 = -G21/(D1 D2). It drops the G12 G21 back-action.
ResolventS resolvent_weak(const ContinuumModel& model, cplx z, const quad::Options& opt = {});
ResolventS resolvent_weak_from_G(const ContinuumModel& model, const LaplaceMatrix& G);

/// Residuals of the eight Laplace-domain equations that link S~ and F~:
///   S1j (z + i w1) = delta_1j - i F1j,  S2j (z + i w2 + Gamma2) = delta_2j - i F2j,
///   Fjk = -i (G~j1 S1k + G~j2 S2k).
std::array<cplx, 8> laplace_residuals(const ContinuumModel& model, const ResolventS& r);

/// Residuals of the truncated six-equation system solved by resolvent_weak.
std::array<cplx, 6> weak_residuals(const ContinuumModel& model, const ResolventS& r);

struct WavePackets {
    std::vector<double> omega;
    std::vector<cplx> f1;      ///< <k|W+|1>
    std::vector<cplx> f2;      ///< <k|W-|2> = i [g1 conj(S21) + g2 conj(S22)]
    std::vector<cplx> f2_out;  ///< <k|W+|2> = -i [g1 S12 + g2 S22]
};

/// Wave packets from boundary values of the complete resolvent on a grid inside the band.
WavePackets wave_packets(const ContinuumModel& model, const std::vector<double>& omega_grid,
                         const quad::Options& opt = {});

struct ExactOptions {
    quad::Options laplace{};        ///< tolerance for every G~ evaluation
    double amplitude_tol = 1e-6;    ///< absolute target for A12(t)
    int max_rounds = 8;
    double bound_state_tol = 1e-3;  ///< allowed 1 - ||f_j||^2
};

struct ExactResult {
    AmplitudeSeries series;
    double error_estimate = 0.0;
    double norm_f1 = 0.0;  ///< ||W+|1>||^2
    double norm_f2 = 0.0;  ///< ||W+|2>||^2
    std::size_t panels = 0;
    std::vector<std::string> warnings;
};

/// Exact amplitude <2|exp(-iHt)|1> = int exp(-iwt) f1(w) conj(f2_out(w)) dw, evaluated
/// with a phase-keyed Filon rule. Models with sinks are rejected (DomainError); a
/// level outside the continuum whose packet misses more than bound_state_tol of its
/// norm is rejected as a ModelError. NumericalError if the rule does not converge.
ExactResult amplitude_exact(const ContinuumModel& model, const std::vector<double>& times,
                            const ExactOptions& opt = {});

}  // namespace wwt

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wwt/model.hpp"
#include "wwt/series.hpp"

namespace wwt {

struct MarkovPackets {
    std::vector<double> omega;
    std::vector<cplx> f1;  ///< g1 / (w - w1 + i gamma1)
    std::vector<cplx> f2;  ///< g2 / (w - w2 - i (gamma2 + Gamma2))
    std::vector<std::string> warnings;
};

/// Lorentzian wave packets; warns when gamma_j / omega_j exceeds 0.1.
MarkovPackets markov_wave_packets(const ContinuumModel& model, const std::vector<double>& omega_grid);

/// ||f_j||^2 of the Markovian packet over the band.
double markov_norm(const ContinuumModel& model, int j);

struct MarkovOptions {
    double amplitude_tol = 1e-7;
    int max_rounds = 8;
};

struct MarkovResult {
    AmplitudeSeries series;
    double error_estimate = 0.0;
    std::vector<std::string> warnings;
};

/// A12(t) = int exp(-iwt) g1 conj(g2) / ((w - w1 + i gamma1)(w - w2 + i (gamma2 + Gamma2))).
/// A constant continuum sink Gamma multiplies by exp(-Gamma t) and narrows both widths
/// by Gamma; a frequency-dependent one is rejected (DomainError), as is Gamma exceeding
/// a width.
MarkovResult amplitude_markov(const ContinuumModel& model, const std::vector<double>& times,
                              const MarkovOptions& opt = {});

/// (1 - gamma1/(pi w1)) (1 - gamma2/(pi w2)) with gamma_j the rate at w_j.
double transfer_bound(const ContinuumModel& model);
/// The same product from the ratios r_j = gamma_j / (pi w_j).
double transfer_bound(double r1, double r2);

struct TransferTime {
    double t_opt = 0.0;        ///< L'(w0) + 2 tau
    double omega0 = 0.0;       ///< (w1 + w2) / 2
    double gamma = 0.0;        ///< rate at w0 (mean over both formfactors)
    double tau = 0.0;          ///< 1 / gamma
    double phase_slope = 0.0;  ///< L'(w0)
    std::vector<std::string> warnings;
};

/// L'(w0) by centred difference with step gamma/10. DomainError if w0 is outside the band.
TransferTime optimal_transfer_time(const ContinuumModel& model, double resonance_threshold = 0.1);

/// L'(w0) + tau: the maximum of |A12| for matched Lorentzian packets on a wide band.
double markov_peak_time(const ContinuumModel& model);

enum class ApproxLevel {
    resonant,    ///< (1/pi) int gamma/(x^2+gamma^2) (x - i gamma)/(x + i gamma) e^{i(L - w t)}
    linearized,  ///< (1/pi) int gamma/(x^2+gamma^2) e^{i (L'(w0) + 2 tau - t) x}
};

/// Diagnostic amplitudes of the resonant-packet approximation chain (x = w - w0).
AmplitudeSeries amplitude_approx(const ContinuumModel& model, const std::vector<double>& times,
                                 ApproxLevel level = ApproxLevel::linearized);

struct ApetThresholds {
    double resonance = 0.1;   ///< |w1 - w2| <= resonance * gamma
    double rates = 0.1;       ///< |gamma1 - gamma2| <= rates * gamma
    double phase = 0.1;       ///< |L''| gamma^2 <= phase * (L' gamma + 2)
    double broadening = 2.0;  ///< eta >= broadening * spacing
};

struct Condition {
    bool ok = false;
    double margin = 0.0;
};

struct ApetReport {
    Condition resonance;
    Condition rates;
    Condition phase_smooth;
    std::optional<Condition> broadening;  ///< network-derived models only
    double t_opt = 0.0;
    double bound = 0.0;
    double omega0 = 0.0;
    double gamma = 0.0;
    double tau = 0.0;
    double phase_slope = 0.0;
    double level_spacing = 0.0;  ///< 0 when not applicable
    double eta = 0.0;
    std::vector<std::string> warnings;
};

ApetReport apet_report(const ContinuumModel& model, const ApetThresholds& th = {});

}  // namespace wwt

#pragma once

#include <functional>
#include <vector>

#include "wwt/model.hpp"
#include "wwt/quadrature.hpp"

namespace wwt::detail {

/// Mesh scale for integrands that carry exp(i L(w)) on the model's band.
double phase_h_max(const ContinuumModel& model);

/// Features for Lorentzian-like structure of the model profiles.
std::vector<quad::Feature> profile_features(const ContinuumModel& model);

struct FilonRun {
    std::vector<cplx> amplitude;
    double error = 0.0;
    quad::PhaseKeyedRule rule;
    std::vector<cplx> values;  ///< samples at rule.nodes(), `stride` per node
};

using Sampler = std::function<std::vector<cplx>(const std::vector<double>&)>;

/// Integrates sampled u over `edges` for every t. Each panel is compared with its
/// trisection; panels whose change (max over t) is large are replaced by their thirds
/// until the summed change is below tol. Samples on shared nodes are reused. The
/// sampler returns `stride` values per node; the first is the integrand, the rest ride
/// along. NumericalError after max_rounds refinement rounds.
FilonRun filon_series(const std::vector<double>& edges, const std::function<double(double)>& phase,
                      const Sampler& sampler, const std::vector<double>& times, double tol,
                      int max_rounds, const char* what, std::size_t stride = 1);

/// Component `c` of strided samples.
std::vector<cplx> component(const std::vector<cplx>& values, std::size_t stride, std::size_t c);

/// Integral of real samples r over the rule (no oscillation).
double filon_norm(const quad::PhaseKeyedRule& rule, const std::vector<double>& r);

}  // namespace wwt::detail

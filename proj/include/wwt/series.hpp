#pragma once

#include <functional>
#include <vector>

#include "wwt/errors.hpp"

namespace wwt {

/// Uniform time grid description.
struct TimeGrid {
    double t_start = 0.0;
    double t_end = 1.0;
    int points = 2;

    std::vector<double> values() const;
};

/// Complex transfer amplitude on an ascending time grid; probability = |amplitude|^2.
struct AmplitudeSeries {
    std::vector<double> times;
    std::vector<cplx> amplitude;
    std::vector<double> probability;

    std::size_t size() const noexcept { return times.size(); }
};

/// Fills probability from amplitude. DomainError if the grid is not strictly increasing
/// or the lengths differ.
AmplitudeSeries make_series(std::vector<double> times, std::vector<cplx> amplitude);

struct Peak {
    double t = 0.0;
    double probability = 0.0;
};

/// Largest grid probability over all points, or over [t_lo, t_hi] when given.
Peak grid_peak(const AmplitudeSeries& s);
Peak grid_peak(const AmplitudeSeries& s, double t_lo, double t_hi);

/// Golden-section refinement of the maximum of p(t) on [lo, hi].
Peak refine_peak(const std::function<double(double)>& p, double lo, double hi, double tol = 1e-6);

struct Deviation {
    double sup_dP = 0.0;
    double l2_dP = 0.0;
    double sup_dA = 0.0;
    double l2_dA = 0.0;
};

/// Sup and L2 (trapezoidal in t) deviations. DomainError when the grids differ.
Deviation compare(const AmplitudeSeries& a, const AmplitudeSeries& b);

}  // namespace wwt

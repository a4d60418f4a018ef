#include "wwt/series.hpp"

#include <algorithm>
#include <cmath>

namespace wwt {

std::vector<double> TimeGrid::values() const {
    if (points < 2) throw DomainError("time grid needs at least 2 points");
    if (!(t_end > t_start) || !std::isfinite(t_start) || !std::isfinite(t_end))
        throw DomainError("time grid must be strictly increasing");
    std::vector<double> t(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) t[k] = t_start + (t_end - t_start) * k / (points - 1);
    t.back() = t_end;
    return t;
}

AmplitudeSeries make_series(std::vector<double> times, std::vector<cplx> amplitude) {
    if (times.size() != amplitude.size()) throw DomainError("series: times and amplitudes differ in length");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1])) throw DomainError("series: time grid is not strictly increasing");
    AmplitudeSeries s;
    s.probability.resize(amplitude.size());
    for (std::size_t k = 0; k < amplitude.size(); ++k) s.probability[k] = std::norm(amplitude[k]);
    s.times = std::move(times);
    s.amplitude = std::move(amplitude);
    return s;
}

Peak grid_peak(const AmplitudeSeries& s) {
    Peak p{s.times.empty() ? 0.0 : s.times.front(), -1.0};
    for (std::size_t k = 0; k < s.size(); ++k)
        if (s.probability[k] > p.probability) p = {s.times[k], s.probability[k]};
    if (p.probability < 0.0) p.probability = 0.0;
    return p;
}

Peak grid_peak(const AmplitudeSeries& s, double t_lo, double t_hi) {
    Peak p{t_lo, -1.0};
    for (std::size_t k = 0; k < s.size(); ++k)
        if (s.times[k] >= t_lo && s.times[k] <= t_hi && s.probability[k] > p.probability)
            p = {s.times[k], s.probability[k]};
    if (p.probability < 0.0) throw DomainError("grid_peak: no grid points in the window");
    return p;
}

Peak refine_peak(const std::function<double(double)>& p, double lo, double hi, double tol) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = p(c), fd = p(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = p(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = p(d);
        }
    }
    const double t = 0.5 * (a + b);
    return {t, p(t)};
}

Deviation compare(const AmplitudeSeries& a, const AmplitudeSeries& b) {
    if (a.size() != b.size()) throw DomainError("compare: series have different lengths");
    Deviation d;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double scale = std::max({1.0, std::abs(a.times[k]), std::abs(b.times[k])});
        if (std::abs(a.times[k] - b.times[k]) > 1e-12 * scale)
            throw DomainError("compare: time grids differ at index " + std::to_string(k));
    }
    double l2p = 0.0, l2a = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double dp = std::abs(a.probability[k] - b.probability[k]);
        const double da = std::abs(a.amplitude[k] - b.amplitude[k]);
        d.sup_dP = std::max(d.sup_dP, dp);
        d.sup_dA = std::max(d.sup_dA, da);
        if (k > 0) {
            const double h = a.times[k] - a.times[k - 1];
            const double dp0 = std::abs(a.probability[k - 1] - b.probability[k - 1]);
            const double da0 = std::abs(a.amplitude[k - 1] - b.amplitude[k - 1]);
            l2p += 0.5 * h * (dp * dp + dp0 * dp0);
            l2a += 0.5 * h * (da * da + da0 * da0);
        }
    }
    d.l2_dP = std::sqrt(l2p);
    d.l2_dA = std::sqrt(l2a);
    return d;
}

}  // namespace wwt

#include "wwt/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wwt/errors.hpp"

namespace wwt {

namespace {

// Fritsch-Carlson slopes with the three-point, shape-preserving end conditions.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> h(n - 1), delta(n - 1), d(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = x[k + 1] - x[k];
        delta[k] = (y[k + 1] - y[k]) / h[k];
    }
    if (n == 2) {
        d[0] = d[1] = delta[0];
        return d;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (delta[k - 1] * delta[k] <= 0.0) continue;
        const double w1 = 2.0 * h[k] + h[k - 1];
        const double w2 = h[k] + 2.0 * h[k - 1];
        d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    auto edge = [](double h0, double h1, double m0, double m1) {
        double dd = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
        if (std::signbit(dd) != std::signbit(m0)) {
            dd = 0.0;
        } else if (std::signbit(m0) != std::signbit(m1) && std::abs(dd) > 3.0 * std::abs(m0)) {
            dd = 3.0 * m0;
        }
        return dd;
    };
    d[0] = edge(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = edge(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    return d;
}

}  // namespace

Tabulated::Tabulated(std::vector<double> x, std::vector<double> y, Interpolation interp,
                     Extrapolation extrap)
    : x_(std::move(x)), y_(std::move(y)), interp_(interp), extrap_(extrap) {
    if (x_.size() != y_.size()) throw ModelError("tabulated profile: x and y differ in length");
    if (x_.size() < 2) throw ModelError("tabulated profile: need at least two samples");
    for (std::size_t k = 0; k < x_.size(); ++k) {
        if (!std::isfinite(x_[k]) || !std::isfinite(y_[k]))
            throw ModelError("tabulated profile: non-finite sample");
        if (k > 0 && !(x_[k] > x_[k - 1]))
            throw ModelError("tabulated profile: abscissae must be strictly increasing");
    }
    if (interp_ == Interpolation::monotone_cubic) slope_ = pchip_slopes(x_, y_);
}

double Tabulated::operator()(double x) const {
    if (x < x_.front() || x > x_.back()) {
        if (extrap_ == Extrapolation::error)
            throw DomainError("tabulated profile evaluated outside [" + std::to_string(x_.front()) +
                              ", " + std::to_string(x_.back()) + "] at " + std::to_string(x));
        return x < x_.front() ? y_.front() : y_.back();
    }
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t k = (it == x_.begin()) ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    if (k >= x_.size() - 1) k = x_.size() - 2;
    const double h = x_[k + 1] - x_[k];
    const double s = (x - x_[k]) / h;
    if (interp_ == Interpolation::linear) return y_[k] + s * (y_[k + 1] - y_[k]);
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    return h00 * y_[k] + h10 * h * slope_[k] + h01 * y_[k + 1] + h11 * h * slope_[k + 1];
}

double Profile::operator()(double x) const {
    using std::numbers::pi;
    return std::visit(
        [x](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, Constant>) {
                return p.value;
            } else if constexpr (std::is_same_v<P, Linear>) {
                return p.offset + p.slope * x;
            } else if constexpr (std::is_same_v<P, Lorentzian>) {
                const double u = x - p.center;
                return p.area / pi * p.width / (u * u + p.width * p.width);
            } else if constexpr (std::is_same_v<P, LorentzianSum>) {
                double s = 0.0;
                const double w2 = p.width * p.width;
                for (std::size_t a = 0; a < p.centers.size(); ++a) {
                    const double u = x - p.centers[a];
                    s += p.weights[a] / (u * u + w2);
                }
                return p.scale * s * p.width / pi;
            } else {
                return p(x);
            }
        },
        kind_);
}

std::string Profile::family() const {
    return std::visit(
        [](const auto& p) -> std::string {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, Constant>) return "constant";
            else if constexpr (std::is_same_v<P, Linear>) return "linear";
            else if constexpr (std::is_same_v<P, Lorentzian>) return "lorentzian";
            else if constexpr (std::is_same_v<P, LorentzianSum>) return "lorentzian_sum";
            else return "tabulated";
        },
        kind_);
}

bool Profile::is_zero() const {
    return std::visit(
        [](const auto& p) -> bool {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, Constant>) return p.value == 0.0;
            else if constexpr (std::is_same_v<P, Linear>) return p.slope == 0.0 && p.offset == 0.0;
            else if constexpr (std::is_same_v<P, Lorentzian>) return p.area == 0.0;
            else if constexpr (std::is_same_v<P, LorentzianSum>)
                return p.scale == 0.0 ||
                       std::all_of(p.weights.begin(), p.weights.end(), [](double w) { return w == 0.0; });
            else
                return std::all_of(p.y().begin(), p.y().end(), [](double v) { return v == 0.0; });
        },
        kind_);
}

double Profile::parameter_minimum() const {
    return std::visit(
        [](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, Constant>) {
                return p.value;
            } else if constexpr (std::is_same_v<P, Linear>) {
                return p.slope == 0.0 ? p.offset : -HUGE_VAL;
            } else if constexpr (std::is_same_v<P, Lorentzian>) {
                return p.width > 0.0 ? p.area : -HUGE_VAL;
            } else if constexpr (std::is_same_v<P, LorentzianSum>) {
                if (!(p.width > 0.0) || p.scale < 0.0 || p.centers.size() != p.weights.size())
                    return -HUGE_VAL;
                return p.weights.empty() ? 0.0 : *std::min_element(p.weights.begin(), p.weights.end());
            } else {
                return *std::min_element(p.y().begin(), p.y().end());
            }
        },
        kind_);
}

}  // namespace wwt

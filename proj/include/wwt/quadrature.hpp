#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <cstdio>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "wwt/errors.hpp"

namespace wwt::quad {

struct Options {
    double abs_tol = 1e-9;
    double rel_tol = 0.0;
    int max_intervals = 200000;
};

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    int intervals = 0;
};

template <std::size_t N>
std::array<std::complex<double>, N> operator+(const std::array<std::complex<double>, N>& a,
                                              const std::array<std::complex<double>, N>& b) {
    std::array<std::complex<double>, N> r;
    for (std::size_t k = 0; k < N; ++k) r[k] = a[k] + b[k];
    return r;
}
template <std::size_t N>
std::array<std::complex<double>, N> operator-(const std::array<std::complex<double>, N>& a,
                                              const std::array<std::complex<double>, N>& b) {
    std::array<std::complex<double>, N> r;
    for (std::size_t k = 0; k < N; ++k) r[k] = a[k] - b[k];
    return r;
}
template <std::size_t N>
std::array<std::complex<double>, N> operator*(const std::array<std::complex<double>, N>& a, double s) {
    std::array<std::complex<double>, N> r;
    for (std::size_t k = 0; k < N; ++k) r[k] = a[k] * s;
    return r;
}

namespace detail {

inline std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

// Kronrod 21-point abscissae on [-1, 1] (positive half) and weights, with the embedded
// 10-point Gauss weights on the odd-indexed abscissae.
inline constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208044764916, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }
template <std::size_t N>
double magnitude(const std::array<std::complex<double>, N>& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

template <class T>
struct Segment {
    double a, b;
    T value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class T, class F>
Segment<T> gk21(F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    T fc = f(c);
    T kron = fc * wgk[10];
    T gauss{};
    for (int k = 0; k < 10; ++k) {
        const double dx = h * xgk[k];
        T fsum = f(c - dx) + f(c + dx);
        kron = kron + fsum * wgk[k];
        if (k % 2 == 1) gauss = gauss + fsum * wg[k / 2];
    }
    T diff = kron - gauss;
    return {a, b, kron * h, magnitude(diff) * std::abs(h)};
}

}  // namespace detail

/// Globally adaptive G10/K21 quadrature over [breaks.front(), breaks.back()] with the
/// given initial subdivision. T is double, complex or a std::array of complex.
/// Throws NumericalError carrying the achieved estimate when the budget runs out.
template <class T, class F>
Result<T> integrate(F&& f, std::span<const double> breaks, const Options& opt = {}) {
    using Seg = detail::Segment<T>;
    if (breaks.size() < 2) return {};
    std::priority_queue<Seg> queue;
    T total{};
    double err = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        if (!(breaks[k + 1] > breaks[k])) continue;
        Seg s = detail::gk21<T>(f, breaks[k], breaks[k + 1]);
        total = total + s.value;
        err += s.error;
        queue.push(s);
    }
    int count = static_cast<int>(queue.size());
    auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total)); };
    while (err > tolerance()) {
        if (count >= opt.max_intervals || queue.empty())
            throw NumericalError("adaptive quadrature did not converge (error estimate " +
                                     detail::sci(err) + " above " + detail::sci(tolerance()) + ")",
                                 err);
        Seg worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw NumericalError("adaptive quadrature reached machine resolution (estimate " +
                                     std::to_string(err) + ")",
                                 err);
        Seg left = detail::gk21<T>(f, worst.a, mid);
        Seg right = detail::gk21<T>(f, mid, worst.b);
        total = total - worst.value + left.value + right.value;
        err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++count;
    }
    // Recompute from the segments to shed accumulated round-off in the running sum.
    T fresh{};
    double fresh_err = 0.0;
    while (!queue.empty()) {
        fresh = fresh + queue.top().value;
        fresh_err += queue.top().error;
        queue.pop();
    }
    return {fresh, fresh_err, count};
}

/// Uniform subdivision of [a, b] into n panels, merged with extra sorted points inside (a, b).
std::vector<double> panel_breaks(double a, double b, int n, std::vector<double> extra = {});

/// A feature the mesh must resolve: panel widths near `center` scale with distance + `width`.
struct Feature {
    double center;
    double width;
};

struct MeshOptions {
    double h_max = 0.0;           ///< coarsest panel; must be > 0
    double fraction = 0.25;       ///< width/(distance + feature width)
    double edge_fraction = 0.5;   ///< geometric grading toward the interval ends
    double h_floor_rel = 1e-9;    ///< smallest panel relative to b - a
};

/// Graded panel edges on [a, b].
std::vector<double> graded_mesh(double a, double b, std::span<const Feature> features,
                                const MeshOptions& opt);

/// Filon-type rule for integrals of u(w) exp(-i w t) over a panel mesh.
/// The sampled function is written as v(w) exp(i phi(w)) with phi the piecewise-linear
/// interpolant of a supplied phase, and v is fit by a quadratic through three interior
/// nodes per panel. The moments of sigma^n exp(i theta sigma) are exact, so the rule
/// stays accurate when t times the panel width is large.
class PhaseKeyedRule {
public:
    PhaseKeyedRule(std::vector<double> edges, const std::function<double(double)>& phase);

    std::size_t panels() const noexcept { return edges_.size() - 1; }
    const std::vector<double>& edges() const noexcept { return edges_; }
    /// Three nodes per panel at 1/6, 1/2, 5/6 of its width.
    const std::vector<double>& nodes() const noexcept { return nodes_; }

    /// Integral of u exp(-i w t); u holds values at nodes().
    cplx integrate(std::span<const cplx> u, double t) const;
    /// Contribution of panel p given its three node values.
    cplx integrate_panel(std::size_t p, const cplx* u3, double t) const;

    using Fit = std::array<cplx, 3>;
    /// Per-panel quadratic coefficients of u with the linearized phase removed. They do
    /// not depend on t, so one fit serves a whole time grid.
    std::vector<Fit> fit(std::span<const cplx> u) const;
    cplx integrate_fit(std::span<const Fit> c, double t) const;

    /// Each panel split in three. The nodes of this rule are a subset of the result's:
    /// node 3p+j maps to node 9p+3j+1.
    PhaseKeyedRule trisected(const std::function<double(double)>& phase) const;

    static std::size_t coarse_to_fine(std::size_t node) {
        return 9 * (node / 3) + 3 * (node % 3) + 1;
    }

private:
    Fit fit_panel(std::size_t p, const cplx* u3) const;
    cplx integrate_fit_panel(std::size_t p, const Fit& c, double t) const;

    std::vector<double> edges_;
    std::vector<double> phase_at_edges_;
    std::vector<double> nodes_;
};

/// Moments mu_n(theta) = int_0^1 s^n exp(i theta s) ds for n = 0, 1, 2.
std::array<cplx, 3> oscillatory_moments(double theta);

}  // namespace wwt::quad

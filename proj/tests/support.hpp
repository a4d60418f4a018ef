#pragma once

#include <cmath>
#include <random>

#include "wwt/wwt.hpp"

namespace wwt::test {

inline constexpr double pi = 3.14159265358979323846;

/// Flat coupling gamma/pi on `band` with L(w) = slope * w.
inline ContinuumSpec flat_spec(double gamma, double slope = 50.0, Band band = {0.0, 20.0},
                               double omega1 = 1.0, double omega2 = 1.0) {
    ContinuumSpec s;
    s.omega1 = omega1;
    s.omega2 = omega2;
    s.band = band;
    s.density = Constant{gamma / pi};
    s.phase = Linear{slope, 0.0};
    return s;
}

inline ContinuumModel canonical() { return build_continuum(flat_spec(0.05)); }

inline ContinuumModel uncoupled(double omega1 = 1.0, double omega2 = 1.0) {
    ContinuumSpec s = flat_spec(0.0, 50.0, {0.0, 20.0}, omega1, omega2);
    return build_continuum(s);
}

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

/// The four-site network: donor and acceptor hang off a two-site bridge.
inline DiscreteNetwork four_site() {
    return build_network({1.0, 1.0, 1.0, 1.0}, {{1, 3, 0.1}, {2, 4, 0.1}, {3, 4, 0.2}});
}

/// Random Hermitian network with h12 = 0 and orthogonal donor/acceptor couplings
/// (donor couples to the first half of the bridge, acceptor to the second).
inline DiscreteNetwork random_network(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> e(n);
    for (auto& x : e) x = 1.0 + 0.5 * u(rng);
    std::vector<Hopping> hops;
    const int mid = 3 + (n - 2) / 2;
    for (int k = 3; k <= n; ++k) {
        if (k < mid) hops.push_back({1, k, cplx(0.1 * u(rng), 0.1 * u(rng))});
        else hops.push_back({2, k, cplx(0.1 * u(rng), 0.1 * u(rng))});
        for (int l = k + 1; l <= n; ++l) hops.push_back({k, l, cplx(0.3 * u(rng), 0.3 * u(rng))});
    }
    return build_network(e, hops);
}

/// Tight-binding chain of `bridge` sites at `energy` with hopping J; the donor couples
/// to the first chain site and the acceptor to the last, both with strength `h_end`.
inline DiscreteNetwork chain(int bridge, double energy, double J, double h_end) {
    std::vector<double> e(bridge + 2, energy);
    std::vector<Hopping> hops{{1, 3, h_end}, {2, bridge + 2, h_end}};
    for (int k = 3; k < bridge + 2; ++k) hops.push_back({k, k + 1, J});
    return build_network(e, hops);
}

}  // namespace wwt::test

#include <doctest.h>

#include "../support.hpp"

using namespace wwt;
using doctest::Approx;

namespace {

ContinuumModel lorentz_model() {
    ContinuumSpec s = test::flat_spec(0.0, 40.0, {0.0, 10.0});
    s.density = Lorentzian{0.05, 1.2, 0.4};
    return build_continuum(s);
}

/// Principal value by subtracting the singular part, composite Simpson on n panels.
double pv_oracle(const std::function<double(double)>& f, double a, double b, double w, int n) {
    const double fw = f(w);
    auto g = [&](double x) { return std::abs(x - w) < 1e-300 ? 0.0 : (f(x) - fw) / (w - x); };
    auto simpson = [&](double lo, double hi, int m) {
        double h = (hi - lo) / m, s = g(lo) + g(hi);
        for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * g(lo + i * h);
        return s * h / 3.0;
    };
    return simpson(a, w, n) + simpson(w, b, n) + fw * std::log((w - a) / (b - w));
}

}  // namespace

TEST_CASE("decay rates") {
    ContinuumModel m = test::canonical();
    CHECK(decay_rate(m, 1, 3.7) == Approx(0.05).epsilon(1e-14));
    CHECK(decay_rate(m, 2, 0.2) == Approx(0.05).epsilon(1e-14));
    CHECK(decay_rate(m, 1, 25.0) == 0.0);
    CHECK(decay_rate(test::uncoupled(), 1, 1.0) == 0.0);
    CHECK(decay_rate(lorentz_model(), 1, 1.2) == Approx(0.05 / 0.4).epsilon(1e-14));
}

TEST_CASE("decay rate ignores the phase") {
    ContinuumSpec a = test::flat_spec(0.05, 10.0), b = test::flat_spec(0.05, 70.0);
    CHECK(decay_rate(build_continuum(a), 2, 1.3) == decay_rate(build_continuum(b), 2, 1.3));
}

TEST_CASE("radiative shift: symmetric, flat and Lorentzian couplings") {
    ContinuumModel sym = build_continuum(test::flat_spec(0.05, 50.0, {0.0, 2.0}));
    CHECK(std::abs(radiative_shift(sym, 1, 1.0)) < 1e-12);

    ContinuumModel m = test::canonical();
    const double c = 0.05 / test::pi;
    for (double w : {0.5, 1.0, 7.0, 19.5})
        CHECK(radiative_shift(m, 1, w) == Approx(c * std::log(w / (20.0 - w))).epsilon(1e-10));

    ContinuumModel lz = lorentz_model();
    auto f = [&](double x) { return lz.density(1, x); };
    for (double w : {0.3, 1.2, 1.5, 6.0}) {
        double ref = pv_oracle(f, 0.0, 10.0, w, 400000);
        CHECK(std::abs(radiative_shift(lz, 1, w) - ref) < 1e-6);
    }
}

TEST_CASE("radiative shift is undefined at a band edge") {
    ContinuumModel m = test::canonical();
    CHECK_THROWS_AS(radiative_shift(m, 1, 0.0), DomainError);
    CHECK_THROWS_AS(radiative_shift(m, 1, 20.0), DomainError);
}

TEST_CASE("flat coupling on a wide band gives a constant transform") {
    ContinuumSpec s = test::flat_spec(0.05, 0.0, {-1e6, 1e6});
    s.tol_orth = 1.0;
    ContinuumModel m = build_continuum(s);
    for (cplx z : {cplx(0.3, -1.0), cplx(2.0, 5.0), cplx(0.01, 0.0)})
        CHECK(std::abs(laplace_G(m, 1, 1, z).value - 0.05) < 1e-6);
    CHECK(std::abs(laplace_G(test::uncoupled(), 1, 2, {0.5, -1.0}).value) == 0.0);
}

TEST_CASE("cross transform matches the Laplace integral of the time-domain correlation") {
    ContinuumModel m = test::canonical();
    const cplx z(0.01, -1.0);
    const double c = 0.05 / test::pi;
    // G12(t) = c int exp(-i w (t + 50)) dw over [0, 20], checked against quadrature first
    auto g12 = [&](double t) {
        const double s = t + 50.0;
        return c * (1.0 - std::exp(cplx(0.0, -20.0 * s))) / cplx(0.0, s);
    };
    for (double t : {0.0, 3.0, 40.0}) {
        auto r = quad::integrate<cplx>(
            [&](double w) { return c * std::exp(cplx(0.0, -w * (t + 50.0))); }, quad::panel_breaks(0.0, 20.0, 400),
            {1e-13});
        CHECK(std::abs(r.value - g12(t)) < 1e-11);
    }
    const double T = 20.0 / z.real();
    auto r = quad::integrate<cplx>([&](double t) { return std::exp(-z * t) * g12(t); },
                                   quad::panel_breaks(0.0, T, 20000), {1e-12});
    CHECK(std::abs(laplace_G(m, 1, 2, z).value - r.value) < 1e-7);
}

TEST_CASE("time-domain correlations are Hermitian") {
    ContinuumModel m = lorentz_model();
    for (double t : {0.5, 3.0, 17.0})
        CHECK(std::abs(correlation(m, 1, 2, t) - std::conj(correlation(m, 2, 1, -t))) < 1e-10);
}

TEST_CASE("boundary values approach the decay rate linearly in the regulator") {
    ContinuumModel m = lorentz_model();
    const double w = 1.1, g = decay_rate(m, 1, w);
    double prev = 1.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        double err = std::abs(boundary_G(m, w, eps).g11.real() - g);
        CHECK(err < prev);
        CHECK(err < 5.0 * eps);
        prev = err;
    }
    CHECK(boundary_G(m, w, 0.0).g11.real() == Approx(g).epsilon(1e-9));
    CHECK(boundary_G(m, w, 0.0).g11.imag() == Approx(radiative_shift(m, 1, w)).epsilon(1e-8));
}

TEST_CASE("diagonal transforms have non-negative real part") {
    ContinuumModel m = lorentz_model();
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> re(1e-3, 3.0), im(-12.0, 12.0);
    for (int i = 0; i < 20; ++i) {
        LaplaceMatrix G = laplace_matrix(m, {re(rng), im(rng)});
        CHECK(G.g11.real() >= 0.0);
        CHECK(G.g22.real() >= 0.0);
    }
}

TEST_CASE("laplace domain errors") {
    ContinuumModel m = test::canonical();
    CHECK_THROWS_AS(laplace_matrix(m, {-0.1, 1.0}), DomainError);
    CHECK_THROWS_AS(laplace_matrix(m, {0.0, -20.0}), DomainError);
}

TEST_CASE("boundary table agrees with direct evaluation") {
    ContinuumModel m = lorentz_model();
    BoundaryTable tab(m);
    for (double w : {0.05, 1.2, 1.31, 4.0, 9.9}) {
        LaplaceMatrix a = tab(w), b = laplace_matrix(m, {0.0, -w});
        CHECK(std::abs(a.g11 - b.g11) < 1e-8);
        CHECK(std::abs(a.g12 - b.g12) < 1e-8);
        CHECK(std::abs(a.g21 - b.g21) < 1e-8);
        CHECK(std::abs(a.g22 - b.g22) < 1e-8);
    }
}

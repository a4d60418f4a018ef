#include <doctest.h>

#include "../support.hpp"
#include "wwt/quadrature.hpp"

using namespace wwt;
using doctest::Approx;

TEST_CASE("monotone cubic interpolant stays inside the sample range") {
    Tabulated t({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 1.0, 5.0});
    for (double x = 0.0; x <= 3.0; x += 0.01) {
        double y = t(x);
        if (x <= 2.0) CHECK(y <= 1.0 + 1e-15);
        CHECK(y >= -1e-15);
    }
    CHECK(t(1.0) == 1.0);
    CHECK_THROWS_AS(t(3.5), DomainError);
}

TEST_CASE("linear table with constant extrapolation") {
    Tabulated t({0.0, 2.0}, {1.0, 3.0}, Interpolation::linear, Extrapolation::constant);
    CHECK(t(1.0) == Approx(2.0));
    CHECK(t(-5.0) == 1.0);
    CHECK(t(9.0) == 3.0);
}

TEST_CASE("profile families evaluate as documented") {
    Profile c = Constant{2.0};
    Profile l = Linear{3.0, 1.0};
    Profile lz = Lorentzian{2.0, 1.0, 0.5};
    Profile ls = LorentzianSum{{0.0, 4.0}, {1.0, 3.0}, 0.5, 2.0};
    CHECK(c(7.0) == 2.0);
    CHECK(l(2.0) == 7.0);
    CHECK(lz(1.0) == Approx(2.0 / (test::pi * 0.5)));
    CHECK(ls(4.0) == Approx(2.0 * (1.0 * 0.5 / test::pi / 16.25 + 3.0 / (test::pi * 0.5))));
    CHECK(Profile(Constant{0.0}).is_zero());
    CHECK_FALSE(lz.is_zero());
    CHECK(lz.family() == "lorentzian");
}

TEST_CASE("Lorentzian carries its area") {
    Profile lz = Lorentzian{1.5, 0.0, 0.2};
    std::vector<double> br{-2000.0, -1.0, 0.0, 1.0, 2000.0};
    auto r = quad::integrate<double>([&](double x) { return lz(x); }, br, {1e-10});
    CHECK(r.value == Approx(1.5 * (1.0 - 2.0 * std::atan(0.2 / 2000.0) / test::pi)).epsilon(1e-9));
}

TEST_CASE("adaptive quadrature on smooth and peaked integrands") {
    std::vector<double> br{0.0, 1.0};
    auto r = quad::integrate<double>([](double x) { return x * x; }, br);
    CHECK(r.value == Approx(1.0 / 3.0).epsilon(1e-14));

    std::vector<double> wide{-1.0, 1.0};
    auto p = quad::integrate<double>([](double x) { return 1e-3 / (x * x + 1e-6); }, wide, {1e-10});
    CHECK(p.value == Approx(2.0 * std::atan(1000.0)).epsilon(1e-9));
    CHECK(p.error <= 1e-10);

    auto c = quad::integrate<cplx>([](double x) { return std::exp(cplx(0.0, 3.0 * x)); }, br);
    CHECK(std::abs(c.value - (std::exp(cplx(0.0, 3.0)) - 1.0) / cplx(0.0, 3.0)) < 1e-13);
}

TEST_CASE("quadrature budget exhaustion is reported") {
    std::vector<double> br{0.0, 1.0};
    quad::Options opt{1e-14, 0.0, 4};
    CHECK_THROWS_AS(quad::integrate<double>([](double x) { return std::sin(1.0 / (x + 1e-4)); }, br, opt),
                    NumericalError);
}

TEST_CASE("oscillatory moments match direct quadrature") {
    for (double theta : {0.0, 0.3, 0.99, 1.5, 40.0}) {
        auto mu = quad::oscillatory_moments(theta);
        std::vector<double> br{0.0, 0.25, 0.5, 0.75, 1.0};
        for (int k = 0; k < 3; ++k) {
            auto r = quad::integrate<cplx>(
                [&](double s) { return std::pow(s, k) * std::exp(cplx(0.0, theta * s)); }, br, {1e-14});
            CHECK(std::abs(mu[k] - r.value) < 1e-12);
        }
    }
}

TEST_CASE("phase-keyed Filon rule on a highly oscillatory integrand") {
    auto phase = [](double w) { return 50.0 * w; };
    auto u = [](double w) { return std::exp(cplx(0.0, 50.0 * w)) / (1.0 + (w - 1.0) * (w - 1.0)); };
    const double t = 60.0;

    std::vector<double> dense = quad::panel_breaks(0.0, 20.0, 4000);
    auto ref = quad::integrate<cplx>([&](double w) { return u(w) * std::exp(cplx(0.0, -w * t)); }, dense, {1e-12});

    quad::PhaseKeyedRule rule(quad::panel_breaks(0.0, 20.0, 400), phase);
    std::vector<cplx> vals;
    for (double w : rule.nodes()) vals.push_back(u(w));
    cplx coarse = rule.integrate(vals, t);

    auto fine = rule.trisected(phase);
    std::vector<cplx> fvals;
    for (double w : fine.nodes()) fvals.push_back(u(w));
    cplx refined = fine.integrate(fvals, t);

    CHECK(std::abs(refined - ref.value) < 1e-7);
    CHECK(std::abs(refined - ref.value) < std::abs(coarse - ref.value));
    for (std::size_t i = 0; i < rule.nodes().size(); ++i)
        CHECK(fine.nodes()[quad::PhaseKeyedRule::coarse_to_fine(i)] == Approx(rule.nodes()[i]).epsilon(1e-14));
}

TEST_CASE("graded mesh covers the interval and refines near a feature") {
    std::vector<quad::Feature> f{{5.0, 0.01}};
    auto mesh = quad::graded_mesh(0.0, 20.0, f, {0.5});
    REQUIRE(mesh.size() > 2);
    CHECK(mesh.front() == 0.0);
    CHECK(mesh.back() == 20.0);
    double near = 1e300, far = 0.0;
    for (std::size_t i = 1; i < mesh.size(); ++i) {
        CHECK(mesh[i] > mesh[i - 1]);
        double h = mesh[i] - mesh[i - 1], mid = 0.5 * (mesh[i] + mesh[i - 1]);
        if (std::abs(mid - 5.0) < 0.02) near = std::min(near, h);
        if (std::abs(mid - 15.0) < 1.0) far = std::max(far, h);
    }
    CHECK(near <= 0.01);
    CHECK(far <= 0.5 + 1e-12);
    CHECK(far > 10 * near);
}

#include <doctest.h>

#include "../support.hpp"

using namespace wwt;
using doctest::Approx;

TEST_CASE("canonical flat model is valid and nearly orthogonal") {
    ContinuumModel m = test::canonical();
    CHECK(orthogonality_overlap(m) < 0.01);
    CHECK(m.norm2(1) == Approx(0.05 / test::pi * 20.0));
    CHECK(m.formfactor(2, 0.3) == std::polar(std::sqrt(0.05 / test::pi), -15.0));
}

TEST_CASE("identical formfactors are rejected with overlap one") {
    ContinuumSpec s = test::flat_spec(0.05, 0.0);
    try {
        build_continuum(s);
        FAIL("expected a ModelError");
    } catch (const ModelError& e) {
        CHECK(e.measured() == Approx(1.0));
    }
}

TEST_CASE("zero coupling is a valid degenerate model with undefined overlap") {
    ContinuumModel m = test::uncoupled();
    CHECK(m.norm2(1) == 0.0);
    CHECK_THROWS_AS(orthogonality_overlap(m), ZeroNormError);
}

TEST_CASE("invalid continuum specs") {
    ContinuumSpec s = test::flat_spec(0.05);
    s.band = {2.0, 1.0};
    CHECK_THROWS_AS(build_continuum(s), ModelError);

    s = test::flat_spec(0.05);
    s.density = Linear{-1.0, 1.0};
    CHECK_THROWS_AS(build_continuum(s), ModelError);

    s = test::flat_spec(0.05);
    s.density = Tabulated({0.0, 10.0}, {0.01, 0.01});
    CHECK_THROWS_AS(build_continuum(s), ModelError);

    s = test::flat_spec(0.05);
    s.sink2 = -0.1;
    CHECK_THROWS_AS(build_continuum(s), ModelError);

    s = test::flat_spec(0.05);
    s.omega1 = -1.0;
    CHECK_THROWS_AS(build_continuum(s), ModelError);
}

TEST_CASE("overlap is invariant under a global phase") {
    ContinuumSpec a = test::flat_spec(0.05, 30.0);
    a.density = Lorentzian{0.1, 1.0, 0.5};
    ContinuumSpec b = a;
    b.phase = Linear{30.0, 1.234};
    CHECK(orthogonality_overlap(build_continuum(a)) ==
          Approx(orthogonality_overlap(build_continuum(b))).epsilon(1e-10));
}

TEST_CASE("decay rates of constructed models are finite and non-negative") {
    for (double g : {0.0, 0.01, 0.05, 0.2}) {
        ContinuumModel m = build_continuum(test::flat_spec(g));
        for (int j : {1, 2}) {
            double r = decay_rate(m, j, m.omega(j));
            CHECK(std::isfinite(r));
            CHECK(r >= 0.0);
        }
    }
}

TEST_CASE("four-site network") {
    DiscreteNetwork n = test::four_site();
    CHECK(n.sites() == 4);
    CHECK(n.h()(0, 1) == cplx(0.0));
    CHECK(n.h()(2, 0) == cplx(0.1));
    CHECK(n.h()(3, 2) == cplx(0.2));
}

TEST_CASE("hopping conjugate symmetry is exact") {
    DiscreteNetwork n = build_network({1.0, 1.0, 1.0}, {{1, 3, 0.1}, {2, 3, cplx(0.0, 0.1)}});
    CHECK(n.h()(2, 1) == cplx(0.0, -0.1));
    DiscreteNetwork r = test::random_network(30, 7);
    CHECK((r.h() - r.h().adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("network validation") {
    CHECK_THROWS_AS(build_network({1.0, 1.0, 1.0}, {{1, 1, 0.5}}), ModelError);
    CHECK_THROWS_AS(build_network({1.0, 1.0, 1.0}, {{1, 3, 0.1}, {3, 1, 0.1}}), ModelError);
    CHECK_THROWS_AS(build_network({1.0, 1.0, 1.0}, {{1, 4, 0.1}}), ModelError);
    CHECK_THROWS_AS(build_network({1.0, 1.0}, {}), ModelError);
    CHECK_THROWS_AS(build_network(std::vector<double>(2001, 1.0), {}), ModelError);
    CHECK_THROWS_AS(build_network({1.0, 1.0, 1.0}, {{1, 3, NAN}}), ModelError);
}

TEST_CASE("discrete overlap of disjoint couplings is zero") {
    DiscreteWW d;
    d.omega1 = d.omega2 = 1.0;
    d.levels = {0.5, 1.5};
    d.couplings1 = {0.3, 0.0};
    d.couplings2 = {0.0, cplx(0.0, 0.2)};
    CHECK(orthogonality_overlap(d) == 0.0);
    d.couplings2 = {0.0, 0.0};
    CHECK_THROWS_AS(orthogonality_overlap(d), ZeroNormError);
}

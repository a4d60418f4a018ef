#include <doctest.h>

#include "../support.hpp"

using namespace wwt;
using doctest::Approx;

namespace {

std::vector<cplx> random_z(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> re(1e-3, 2.0), im(-22.0, 2.0);
    std::vector<cplx> z;
    for (int i = 0; i < n; ++i) z.emplace_back(re(rng), im(rng));
    return z;
}

ContinuumModel structured() {
    ContinuumSpec s = test::flat_spec(0.0, 30.0, {0.0, 8.0}, 1.0, 1.1);
    s.density = Lorentzian{0.08, 1.0, 0.7};
    s.density2 = Profile(Lorentzian{0.06, 1.2, 0.5});
    return build_continuum(s);
}

}  // namespace

TEST_CASE("free resolvent") {
    ContinuumModel m = test::uncoupled(1.0, 2.0);
    ResolventS r = resolvent(m, {1.0, -1.0});
    CHECK(std::abs(r.s11 - 1.0) < 1e-15);
    CHECK(std::abs(r.s22 - 1.0 / cplx(1.0, 1.0)) < 1e-15);
    CHECK(r.s12 == cplx(0.0));
    CHECK(r.s21 == cplx(0.0));
}

TEST_CASE("constant bath transform reproduces the Lorentzian pole exactly") {
    ContinuumModel m = test::canonical();
    const double gamma = 0.05;
    for (double w : {0.7, 1.0, 1.3}) {
        LaplaceMatrix G{cplx(0.0, -w), gamma, 0.0, 0.0, gamma, 0.0};
        cplx want = 1.0 / cplx(gamma, 1.0 - w);
        CHECK(std::abs(resolvent_from_G(m, G).s11 - want) <= 1e-14 * std::abs(want));
        CHECK(std::abs(resolvent_weak_from_G(m, G).s11 - want) <= 1e-14 * std::abs(want));
    }
}

TEST_CASE("resolvent satisfies the Laplace-domain system") {
    for (const ContinuumModel& m : {test::canonical(), structured()}) {
        for (cplx z : random_z(20, 11)) {
            ResolventS r = resolvent(m, z);
            for (cplx e : laplace_residuals(m, r)) CHECK(std::abs(e) < 1e-10);
            ResolventS w = resolvent_weak(m, z);
            for (cplx e : weak_residuals(m, w)) CHECK(std::abs(e) < 1e-10);
        }
    }
}

TEST_CASE("diagonal resolvent entries obey the contraction bound") {
    ContinuumModel m = structured();
    for (cplx z : random_z(20, 5)) {
        ResolventS r = resolvent(m, z);
        CHECK(std::abs(r.s11) <= 1.0 / z.real() * (1.0 + 1e-12));
        CHECK(std::abs(r.s22) <= 1.0 / z.real() * (1.0 + 1e-12));
    }
}

TEST_CASE("vanishing determinant raises a pole error with its location") {
    ContinuumModel m = test::uncoupled();
    try {
        resolvent(m, {0.0, -1.0});
        FAIL("expected a PoleError");
    } catch (const PoleError& e) {
        CHECK(e.location() == cplx(0.0, -1.0));
    }
}

TEST_CASE("zero coupling gives zero packets and amplitude") {
    ContinuumModel m = test::uncoupled();
    auto grid = test::linspace(0.1, 19.9, 50);
    WavePackets p = wave_packets(m, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(p.f1[i] == cplx(0.0));
        CHECK(p.f2[i] == cplx(0.0));
    }
    ExactResult r = amplitude_exact(m, test::linspace(0.0, 100.0, 11));
    for (double v : r.series.probability) CHECK(v == 0.0);
}

TEST_CASE("weak coupling packets approach the Lorentzian form") {
    // Levels centred in the band so the radiative shift vanishes at resonance. With the
    // acceptor downstream (L' > 0) the donor packet carries the acceptor scattering term,
    // so the upstream packet of each level is the one that reduces to a single pole.
    const double g = 0.001;
    auto grid = test::linspace(10.0 - g, 10.0 + g, 21);
    {
        ContinuumModel m = build_continuum(test::flat_spec(g, -50.0, {0.0, 20.0}, 10.0, 10.0));
        WavePackets p = wave_packets(m, grid);
        MarkovPackets q = markov_wave_packets(m, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(p.f1[i] / q.f1[i] - 1.0) < 0.01);
    }
    {
        ContinuumModel m = build_continuum(test::flat_spec(g, 50.0, {0.0, 20.0}, 10.0, 10.0));
        WavePackets p = wave_packets(m, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            cplx lorentz = m.formfactor(2, grid[i]) / cplx(grid[i] - 10.0, g);
            CHECK(std::abs(p.f2_out[i] / lorentz - 1.0) < 0.01);
        }
    }
}

TEST_CASE("donor packet norm on the canonical model") {
    ContinuumModel m = test::canonical();
    auto grid = quad::panel_breaks(0.0, 20.0, 20000, test::linspace(0.9, 1.1, 2001));
    grid.front() = 1e-9;
    grid.back() = 20.0 - 1e-9;
    WavePackets p = wave_packets(m, grid);
    double n = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        n += 0.5 * (std::norm(p.f1[i]) + std::norm(p.f1[i - 1])) * (grid[i] - grid[i - 1]);
    CHECK(std::abs(n - (1.0 - 0.05 / test::pi)) <= 10.0 * 0.05 * 0.05);
}

TEST_CASE("exact amplitude respects the packet Cauchy-Schwarz bound") {
    ContinuumModel m = test::canonical();
    ExactResult r = amplitude_exact(m, test::linspace(0.0, 200.0, 81));
    CHECK(r.norm_f1 == Approx(1.0).epsilon(1e-6));
    CHECK(r.norm_f2 == Approx(1.0).epsilon(1e-6));
    for (double p : r.series.probability) {
        CHECK(p >= 0.0);
        CHECK(p <= r.norm_f1 * r.norm_f2 + 1e-9);
        CHECK(p <= transfer_bound(m) + 5e-3);
    }
    for (std::size_t i = 0; i < r.series.size(); ++i)
        CHECK(r.series.probability[i] == std::norm(r.series.amplitude[i]));
}

TEST_CASE("exact peak sits one lifetime after the phase delay") {
    ContinuumModel m = test::canonical();
    ExactResult r = amplitude_exact(m, test::linspace(40.0, 140.0, 201));
    Peak pk = grid_peak(r.series);
    CHECK(std::abs(pk.t - markov_peak_time(m)) <= 0.5 / 0.05);
    CHECK(pk.probability == Approx(4.0 * std::exp(-2.0)).epsilon(0.05));
}

TEST_CASE("global energy shift changes only the amplitude phase") {
    ContinuumModel a = test::canonical();
    ContinuumSpec s = test::flat_spec(0.05, 50.0, {5.0, 25.0}, 6.0, 6.0);
    s.phase = Linear{50.0, -250.0};
    ContinuumModel b = build_continuum(s);
    std::vector<double> t{20.0, 69.0, 120.0};
    ExactResult ra = amplitude_exact(a, t), rb = amplitude_exact(b, t);
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(std::abs(std::abs(ra.series.amplitude[i]) - std::abs(rb.series.amplitude[i])) < 1e-6);
        CHECK(std::abs(rb.series.amplitude[i] - ra.series.amplitude[i] * std::exp(cplx(0.0, -5.0 * t[i]))) < 1e-6);
    }
}

TEST_CASE("exact solver rejects sinks and bound states") {
    ContinuumSpec s = test::flat_spec(0.05);
    s.sink2 = 0.02;
    CHECK_THROWS_AS(amplitude_exact(build_continuum(s), {10.0}), DomainError);

    ContinuumSpec b = test::flat_spec(0.05, 50.0, {0.5, 20.0}, 0.3, 1.0);
    try {
        amplitude_exact(build_continuum(b), {10.0});
        FAIL("expected a ModelError");
    } catch (const ModelError& e) {
        CHECK(e.measured() > 1e-3);
    }
}

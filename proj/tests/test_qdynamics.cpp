// Grid dynamics checked against closed-form quantum mechanics:
//  - free Gaussian dispersion sigma(t)^2 = sigma0^2 + (hbar t / 2 m sigma0)^2
//  - Ehrenfest trajectories, exact for potentials at most quadratic in x
//  - unitarity, time reversal, and the boost-plus-shift map between the
//    freely-falling and uniform-field frames (two independent numerical
//    paths acting as each other's oracle).

#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

#include "gravphase/qdynamics.hpp"
#include "gravphase/units.hpp"
#include "gravphase/wf_io.hpp"

using namespace gravphase;

namespace {
const PhysParams unitp;  // m = g = hbar = 1

Grid grid_1024() { return Grid{-16.0, 16.0, 1024}; }
}  // namespace

TEST_CASE("Grid: validation and momentum layout") {
    Grid g{-2.0, 2.0, 256};
    g.validate();
    CHECK(g.dx() == doctest::Approx(4.0 / 256).epsilon(1e-15));
    CHECK(g.k(0) == 0.0);
    CHECK(g.k(1) == doctest::Approx(2.0 * std::numbers::pi / 4.0).epsilon(1e-14));
    CHECK(g.k(255) == doctest::Approx(-2.0 * std::numbers::pi / 4.0).epsilon(1e-14));

    CHECK_THROWS_AS((Grid{0.0, 0.0, 256}.validate()), invalid_parameter);
    CHECK_THROWS_AS((Grid{-1.0, 1.0, 100}.validate()), invalid_parameter);
    CHECK_THROWS_AS((Grid{-1.0, 1.0, 8}.validate()), invalid_parameter);
}

TEST_CASE("gaussian_packet: normalization, moments, containment") {
    const Grid g = grid_1024();
    const Wavefunction psi = gaussian_packet(g, unitp, 1.0, 0.0, 0.7);
    CHECK(std::abs(psi.norm_sq() - 1.0) <= 1e-12);
    CHECK(std::abs(expectation_x(psi) - 1.0) <= 1e-10 * 0.7);
    CHECK(variance_x(psi) == doctest::Approx(0.49).epsilon(1e-8));
    CHECK(std::abs(expectation_p(psi, unitp)) <= 1e-10 * (1.0 / 0.7));

    const Wavefunction kicked = gaussian_packet(g, unitp, 0.0, 2.0, 1.0);
    CHECK(expectation_p(kicked, unitp) == doctest::Approx(2.0).epsilon(1e-8));

    CHECK_THROWS_AS(gaussian_packet(g, unitp, 15.0, 0.0, 0.7), containment_error);
    CHECK_THROWS_AS(gaussian_packet(g, unitp, 0.0, 0.0, 0.05), containment_error);
    CHECK_THROWS_AS(gaussian_packet(g, unitp, 0.0, 0.0, -1.0), invalid_parameter);
}

TEST_CASE("evolve: symmetric free packet stays put") {
    const Wavefunction psi0 = gaussian_packet(grid_1024(), unitp, 0.0, 0.0, 1.0);
    const Wavefunction psi = evolve(psi0, Potential::free_particle(), unitp, 1e-3, 400);
    CHECK(std::abs(expectation_x(psi)) <= 1e-10);
}

TEST_CASE("evolve: free Gaussian follows the dispersion law") {
    Grid g{-24.0, 24.0, 2048};
    const double sigma0 = 1.0, t = 1.0;
    const Wavefunction psi0 = gaussian_packet(g, unitp, 0.0, 0.0, sigma0);
    const Wavefunction psi = evolve(psi0, Potential::free_particle(), unitp, 1e-3, 1000);
    const double expected = std::sqrt(sigma0 * sigma0 + t * t / (4.0 * sigma0 * sigma0));
    CHECK(std::sqrt(variance_x(psi)) == doctest::Approx(expected).epsilon(1e-8));
    CHECK(expected == doctest::Approx(std::sqrt(1.25)).epsilon(1e-15));
}

TEST_CASE("evolve: Ehrenfest trajectory is exact for the linear potential") {
    Grid g{-16.0, 16.0, 2048};
    const Wavefunction psi0 = gaussian_packet(g, unitp, 1.0, 0.0, 0.5);
    const Wavefunction psi =
        evolve(psi0, Potential::linear_gravity(), unitp, 5e-4, 1000);
    CHECK(expectation_x(psi) == doctest::Approx(0.875).epsilon(1e-8));
    CHECK(expectation_p(psi, unitp) == doctest::Approx(-0.5).epsilon(1e-7));
}

TEST_CASE("evolve: Ehrenfest for random initial conditions") {
    std::mt19937 rng(37u);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        Grid g{-24.0, 24.0, 2048};
        const double x0 = 2.0 * u(rng) - 1.0;
        const double p0 = 2.0 * u(rng) - 1.0;
        const double sigma = 0.4 + 0.4 * u(rng);
        PhysParams p = unitp;
        p.m = 0.5 + 1.5 * u(rng);
        p.g = 0.5 + 1.5 * u(rng);
        const double t = 0.6;
        const std::size_t steps = 600;
        const Wavefunction psi =
            evolve(gaussian_packet(g, p, x0, p0, sigma), Potential::linear_gravity(),
                   p, t / static_cast<double>(steps), steps);
        const double x_cl = x0 + p0 * t / p.m - 0.5 * p.g * t * t;
        const double p_cl = p0 - p.m * p.g * t;
        CHECK(std::abs(expectation_x(psi) - x_cl) <= 1e-8 * std::max(1.0, std::abs(x_cl)));
        CHECK(std::abs(expectation_p(psi, p) - p_cl) <= 1e-7 * std::max(1.0, std::abs(p_cl)));
    }
}

TEST_CASE("evolve: norm is conserved to roundoff") {
    const Wavefunction psi0 = gaussian_packet(grid_1024(), unitp, 0.5, 0.0, 0.6);
    const Wavefunction psi =
        evolve(psi0, Potential::linear_gravity(), unitp, 5e-4, 2000);
    CHECK(std::abs(psi.norm_sq() - 1.0) <= 1e-11);
}

TEST_CASE("evolve: backward evolution undoes forward evolution") {
    const Wavefunction psi0 = gaussian_packet(grid_1024(), unitp, 0.8, 0.3, 0.6);
    Wavefunction psi = evolve(psi0, Potential::linear_gravity(), unitp, 1e-3, 500);
    psi = evolve(psi, Potential::linear_gravity(), unitp, -1e-3, 500);
    const auto z = overlap(psi0, psi);
    CHECK(std::abs(z) >= 1.0 - 1e-10);
    CHECK(std::abs(std::arg(z)) <= 1e-10);
}

TEST_CASE("evolve: guards") {
    const Wavefunction psi0 = gaussian_packet(grid_1024(), unitp, 0.0, 0.0, 0.5);
    CHECK_THROWS_AS(evolve(psi0, Potential::free_particle(), unitp, 0.0, 10),
                    invalid_parameter);
    CHECK_THROWS_AS(evolve(psi0, Potential::free_particle(), unitp, 10.0, 10),
                    invalid_parameter);
    PhysParams p0 = unitp;
    p0.g = 0.0;
    CHECK_THROWS_AS(evolve(psi0, Potential::linear_gravity(), p0, 1e-3, 10),
                    invalid_parameter);
}

TEST_CASE("evolve: a runaway packet aborts with a containment error") {
    Grid g{-8.0, 8.0, 512};
    const Wavefunction psi0 = gaussian_packet(g, unitp, 0.0, 5.0, 0.5);
    try {
        evolve(psi0, Potential::free_particle(), unitp, 2e-3, 900);
        FAIL("expected containment_error");
    } catch (const containment_error& e) {
        CHECK(std::string(e.what()).find("step") != std::string::npos);
    }
}

TEST_CASE("overlap_phase: global phase recovery and the overlap threshold") {
    const Wavefunction a = gaussian_packet(grid_1024(), unitp, 0.0, 0.0, 0.8);
    Wavefunction b = a;
    CHECK(overlap_phase(a, b) == 0.0);
    for (auto& amp : b.amps) amp *= std::polar(1.0, 0.7);
    CHECK(overlap_phase(a, b) == doctest::Approx(0.7).epsilon(1e-12));

    const Wavefunction far = gaussian_packet(grid_1024(), unitp, 10.0, 0.0, 0.8);
    CHECK_THROWS_AS(overlap_phase(a, far), no_overlap_error);

    const Wavefunction other =
        gaussian_packet(Grid{-8.0, 8.0, 512}, unitp, 0.0, 0.0, 0.8);
    CHECK_THROWS_AS(overlap_phase(a, other), invalid_parameter);
}

TEST_CASE("spectral_shift and momentum_boost: exact displacements") {
    const Wavefunction psi = gaussian_packet(grid_1024(), unitp, -1.0, 0.4, 0.7);
    const Wavefunction moved = spectral_shift(psi, 2.5);
    CHECK(expectation_x(moved) == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(std::abs(moved.norm_sq() - 1.0) <= 1e-12);

    const Wavefunction boosted = momentum_boost(psi, unitp, -1.0);
    CHECK(expectation_p(boosted, unitp) == doctest::Approx(-0.6).epsilon(1e-8));
}

TEST_CASE("gauge_map: t=0 is the identity and the norm is preserved") {
    const Wavefunction psi0 = gaussian_packet(grid_1024(), unitp, 0.7, -0.2, 0.6);
    const Wavefunction mapped = gauge_map(psi0, unitp);
    CHECK(mapped.frame == Frame::gravitational);
    const auto z = overlap(psi0, mapped);
    CHECK(std::abs(z) >= 1.0 - 1e-12);
    CHECK(std::abs(std::arg(z)) <= 1e-12);

    std::mt19937 rng(41u);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 5; ++i) {
        Wavefunction psi = gaussian_packet(grid_1024(), unitp, u(rng), u(rng), 0.5);
        psi.t = u(rng);
        const Wavefunction m = gauge_map(psi, unitp);
        CHECK(std::abs(m.norm_sq() - psi.norm_sq()) <= 1e-12);
    }

    Wavefunction grav = psi0;
    grav.frame = Frame::gravitational;
    CHECK_THROWS_AS(gauge_map(grav, unitp), invalid_parameter);
}

TEST_CASE("gauge_map: mapped free evolution equals direct gravitational evolution") {
    // The core mutual-oracle check, including the global phase.
    Grid g{-16.0, 16.0, 1024};
    const double t = 0.4;
    const Wavefunction psi0 = gaussian_packet(g, unitp, 0.0, 0.0, 0.5);
    const double dt = t / 200.0;

    Wavefunction direct = evolve(psi0, Potential::linear_gravity(), unitp, dt, 200);
    Wavefunction free_leg = evolve(psi0, Potential::free_particle(), unitp, dt, 200);
    free_leg.t = t;
    const Wavefunction mapped = gauge_map(free_leg, unitp);

    const auto z = overlap(direct, mapped);
    CHECK(std::abs(z) >= 1.0 - 1e-6);
    CHECK(std::abs(std::arg(z)) <= 1e-5);
}

TEST_CASE("check_gauge_equivalence: random parameters") {
    std::mt19937 rng(43u);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Grid g{-64.0, 64.0, 4096};
    for (int i = 0; i < 3; ++i) {
        PhysParams p = unitp;
        p.m = 0.5 + 1.5 * u(rng);
        p.g = 0.5 + 1.5 * u(rng);
        const double t = (0.3 + 0.5 * u(rng)) * std::sqrt(2.0 / p.g);
        const double x0 = u(rng) - 0.5;
        const double p0 = u(rng) - 0.5;
        const double sigma = 0.3 + 0.2 * u(rng);
        const GaugeCheckResult r = check_gauge_equivalence(p, g, x0, p0, sigma, t);
        CHECK(r.fidelity >= 1.0 - 1e-6);
        CHECK(std::abs(r.phase) <= 1e-5);
    }
}

TEST_CASE("schrodinger_residual: solutions sit at the floor, junk does not") {
    SUBCASE("free packet") {
        Grid g{-20.0, 20.0, 1024};
        const Wavefunction psi = gaussian_packet(g, unitp, 0.0, 0.0, 1.0);
        CHECK(schrodinger_residual(psi, Potential::free_particle(), unitp) <= 1e-6);
    }
    SUBCASE("gauge-mapped free solution solves the gravitational equation") {
        Grid g{-20.0, 20.0, 2048};
        const Wavefunction psi0 = gaussian_packet(g, unitp, 0.0, 0.0, 0.6);
        Wavefunction free_leg =
            evolve(psi0, Potential::free_particle(), unitp, 1e-3, 300);
        const Wavefunction mapped = gauge_map(free_leg, unitp);
        CHECK(schrodinger_residual(mapped, Potential::linear_gravity(), unitp) <= 1e-5);
    }
    SUBCASE("windowed noise is not a solution") {
        Grid g{-20.0, 20.0, 2048};
        std::mt19937 rng(47u);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Wavefunction psi;
        psi.grid = g;
        psi.amps.resize(g.n);
        for (std::size_t i = 0; i < g.n; ++i) {
            const double x = g.x(i);
            const double w = std::exp(-std::pow(x / 8.0, 4.0));
            psi.amps[i] = std::complex<double>(u(rng), u(rng)) * w;
        }
        const double norm = std::sqrt(psi.norm_sq());
        for (auto& a : psi.amps) a /= norm;
        CHECK(schrodinger_residual(psi, Potential::free_particle(), unitp) >= 0.1);
    }
}

TEST_CASE("wavefunction dump round-trips") {
    Grid g{-4.0, 4.0, 64};
    Wavefunction psi = gaussian_packet(g, unitp, 0.0, 1.0, 0.6, Frame::gravitational);
    psi.t = 0.37;
    std::stringstream buf;
    save_wavefunction(psi, buf);
    const Wavefunction back = load_wavefunction(buf);
    CHECK(back.grid == psi.grid);
    CHECK(back.t == psi.t);
    CHECK(back.frame == psi.frame);
    REQUIRE(back.amps.size() == psi.amps.size());
    for (std::size_t i = 0; i < psi.amps.size(); ++i)
        CHECK(back.amps[i] == psi.amps[i]);
}

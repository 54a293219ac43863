#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gravphase/interferometer.hpp"
#include "gravphase/phases.hpp"
#include "gravphase/qdynamics.hpp"
#include "gravphase/text.hpp"
#include "gravphase/units.hpp"

namespace gravphase {

/// Thresholds of the verification suite. The defaults are the contract;
/// overrides exist so a deliberately injected violation can prove the
/// reporting and exit-code path works.
struct AcceptanceOptions {
    double tol_fidelity = 1e-6;      // gauge check: fidelity >= 1 - tol
    double tol_phase = 1e-5;         // gauge check: |overlap phase| <= tol [rad]
    double tol_c3 = 1e-3;            // t^3 coefficient, relative
    double tol_method_agree = 1e-10; // analytic vs quadrature [rad]
    std::vector<int> only;           // run only these criteria (1-based); empty = all
};

struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double budget_seconds = 0.0;
};

namespace detail {

class CriterionTimer {
public:
    CriterionTimer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

inline double log_uniform(std::mt19937& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return lo * std::pow(hi / lo, u(rng));
}

}  // namespace detail

/// 1. Wavefunction-level frame equivalence: direct evolution in the uniform
/// field versus gauge-mapped free evolution, equality including the global
/// phase, over 10 random dimensionless parameter sets at n = 4096.
inline CriterionResult criterion_gauge_equivalence(const AcceptanceOptions& opt) {
    detail::CriterionTimer timer;
    std::mt19937 rng(202408u);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Grid grid{-64.0, 64.0, 4096};

    double worst_fidelity = 1.0, worst_phase = 0.0;
    for (int i = 0; i < 10; ++i) {
        PhysParams p;
        p.m = 0.5 + 1.5 * u(rng);
        p.g = 0.5 + 1.5 * u(rng);
        const double t = (0.3 + 0.5 * u(rng)) * std::sqrt(2.0 / p.g);
        const double x0 = u(rng) - 0.5;
        const double p0 = u(rng) - 0.5;
        const double sigma = 0.3 + 0.2 * u(rng);
        const GaugeCheckResult r =
            check_gauge_equivalence(p, grid, x0, p0, sigma, t);
        worst_fidelity = std::min(worst_fidelity, r.fidelity);
        worst_phase = std::max(worst_phase, std::abs(r.phase));
    }

    CriterionResult res;
    res.index = 1;
    res.name = "gauge equivalence (direct vs mapped evolution)";
    res.budget_seconds = 30.0;
    res.seconds = timer.seconds();
    res.passed = worst_fidelity >= 1.0 - opt.tol_fidelity &&
                 worst_phase <= opt.tol_phase && res.seconds <= res.budget_seconds;
    std::ostringstream d;
    d << "min fidelity " << g17(worst_fidelity) << ", max |phase| "
      << g17(worst_phase) << " rad";
    res.detail = d.str();
    return res;
}

/// 2. t^3 detection: the wavepacket-method series at sigma = d/50, n = 4096
/// fits to c3 = -m g^2 / (6 hbar) within 1e-3 relative, and the quadratic
/// model is worse than the cubic one by a factor >= 100 on the analytic series.
inline CriterionResult criterion_t3_detection(const AcceptanceOptions& opt) {
    detail::CriterionTimer timer;
    const PhysParams p;  // dimensionless

    Protocol wp;
    wp.params = p;
    wp.d = 1.0;
    wp.sigma = 1.0 / 50.0;
    wp.method = Method::wavepacket;
    wp.grid.n = 4096;
    wp.t_samples = default_time_grid(p, 1.0, 20);
    const CubicFit fit = fit_cubic(run_protocol(wp));
    const double c3_expected = -p.m * p.g * p.g / (6.0 * p.hbar);
    const double c3_rel = std::abs(fit.c3 - c3_expected) / std::abs(c3_expected);

    Protocol ana = wp;
    ana.method = Method::analytic;
    const PhaseSeries ana_series = run_protocol(ana);
    const double ratio =
        t3_significance(fit_cubic(ana_series), fit_quadratic(ana_series));

    CriterionResult res;
    res.index = 2;
    res.name = "t^3 detection (wavepacket fit + significance)";
    res.budget_seconds = 60.0;
    res.seconds = timer.seconds();
    res.passed =
        c3_rel <= opt.tol_c3 && ratio >= 100.0 && res.seconds <= res.budget_seconds;
    std::ostringstream d;
    d << "c3 rel err " << g17(c3_rel) << ", significance ratio " << g17(ratio);
    res.detail = d.str();
    return res;
}

/// 3. Method agreement: the analytic and adaptive-quadrature drop phases
/// agree pointwise, and the t = 1 spot value equals 5/6.
inline CriterionResult criterion_method_agreement(const AcceptanceOptions& opt) {
    detail::CriterionTimer timer;
    const PhysParams p;

    Protocol ana;
    ana.params = p;
    ana.d = 1.0;
    ana.sigma = 0.02;
    ana.method = Method::analytic;
    ana.t_samples = default_time_grid(p, 1.0, 20);
    Protocol quad = ana;
    quad.method = Method::quadrature;

    const PhaseSeries sa = run_protocol(ana);
    const PhaseSeries sq = run_protocol(quad);
    double worst = 0.0;
    for (std::size_t i = 0; i < sa.times.size(); ++i)
        worst = std::max(worst, std::abs(sa.phases_unwrapped[i] -
                                         sq.phases_unwrapped[i]));

    Protocol spot = quad;
    spot.t_samples = {1.0};
    const double spot_err =
        std::abs(run_protocol(spot).phases_unwrapped[0] - 5.0 / 6.0);

    CriterionResult res;
    res.index = 3;
    res.name = "method agreement (analytic vs quadrature)";
    res.budget_seconds = 5.0;
    res.seconds = timer.seconds();
    res.passed = worst <= opt.tol_method_agree && spot_err <= 1e-10 &&
                 res.seconds <= res.budget_seconds;
    std::ostringstream d;
    d << "max |diff| " << g17(worst) << " rad, spot |err| " << g17(spot_err);
    res.detail = d.str();
    return res;
}

/// 4. Accelerated-frame time: the asinh transform against its cubic Taylor
/// term, and the exact coincidence of the cubic phase with the gauge
/// function's t^3 component.
inline CriterionResult criterion_rindler(const AcceptanceOptions&) {
    detail::CriterionTimer timer;
    std::mt19937 rng(77001u);
    const PhysParams p;  // c = 1

    bool deficit_ok = true;
    double worst_margin = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double uu = detail::log_uniform(rng, 1e-3, 0.3);
        const double t = detail::log_uniform(rng, 0.1, 10.0);
        const double a = uu * p.c / t;
        const double tp = rindler_time(p, a, t);
        const double two_term = t - a * a * t * t * t / (6.0 * p.c * p.c);
        const double err = std::abs(tp - two_term);
        const double bound = 0.08 * uu * uu * uu * uu * t;
        deficit_ok = deficit_ok && err <= bound;
        worst_margin = std::max(worst_margin, err / bound);
    }

    std::uniform_real_distribution<double> u(0.01, 5.0);
    double worst_rel = 0.0;
    for (int i = 0; i < 50; ++i) {
        PhysParams q;
        q.m = u(rng);
        q.hbar = u(rng);
        const double a = u(rng), t = u(rng);
        PhysParams qg = q;
        qg.g = a;
        const double lhs = rindler_cubic_phase(q, a, t);
        const double rhs = gauge_phase(qg, 0.0, t).phase;
        worst_rel = std::max(worst_rel, std::abs(lhs - rhs) / std::abs(rhs));
    }

    CriterionResult res;
    res.index = 4;
    res.name = "accelerated-frame time consistency";
    res.budget_seconds = 1.0;
    res.seconds = timer.seconds();
    res.passed = deficit_ok && worst_rel <= 1e-15 && res.seconds <= res.budget_seconds;
    std::ostringstream d;
    d << "worst deficit/bound " << g17(worst_margin) << ", cubic-phase rel "
      << g17(worst_rel);
    res.detail = d.str();
    return res;
}

/// 5. Clock-rate budget: the two-term series against the exact rate
/// difference within the Taylor remainder bound, plus exact zeros.
inline CriterionResult criterion_gr_budget(const AcceptanceOptions&) {
    detail::CriterionTimer timer;
    std::mt19937 rng(77002u);
    PhysParams base = *find_preset("neutron");

    bool ok = true;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double eps = detail::log_uniform(rng, 1e-7, 0.05);
        const double del = detail::log_uniform(rng, 1e-6, 10.0);
        const double x = detail::log_uniform(rng, 1e3, 1e10);
        const double tau = detail::log_uniform(rng, 1e-3, 1e3);
        PhysParams p = base;
        p.M = eps * p.c * p.c * x / p.G;
        const GrPhaseBudget b = gr_budget(p, x, del * x, tau);
        const double bound =
            2.0 * (p.G * p.M * del * x / (p.c * p.c * x * x)) + 10.0 * eps * eps;
        const double rel = std::abs(b.dt_series - b.dt_exact) / std::abs(b.dt_exact);
        ok = ok && rel <= bound;
        worst = std::max(worst, rel / bound);
    }

    const GrPhaseBudget zero_sep = gr_budget(base, 6.37e6, 0.0, 1.0);
    PhysParams flat = base;
    flat.M = 0.0;
    const GrPhaseBudget zero_mass = gr_budget(flat, 6.37e6, 1.0, 1.0);
    const bool zeros_ok = zero_sep.dt_exact == 0.0 && zero_sep.dt_series == 0.0 &&
                          zero_sep.newtonian_term == 0.0 && zero_sep.gr_term == 0.0 &&
                          zero_mass.dt_exact == 0.0 && zero_mass.dt_series == 0.0 &&
                          zero_mass.newtonian_term == 0.0 && zero_mass.gr_term == 0.0;

    CriterionResult res;
    res.index = 5;
    res.name = "clock-rate budget (series vs exact)";
    res.budget_seconds = 1.0;
    res.seconds = timer.seconds();
    res.passed = ok && zeros_ok && res.seconds <= res.budget_seconds;
    std::ostringstream d;
    d << "worst rel/bound " << g17(worst) << ", exact zeros "
      << (zeros_ok ? "ok" : "BROKEN");
    res.detail = d.str();
    return res;
}

/// 6. Solver quality gates: norm drift over 1e4 steps, the free dispersion
/// law, Ehrenfest trajectories, time reversal, and second-order convergence
/// of the splitting phase error.
inline CriterionResult criterion_dynamics_gates(const AcceptanceOptions&) {
    detail::CriterionTimer timer;
    const PhysParams p;
    std::ostringstream d;
    bool ok = true;

    {  // norm drift over 1e4 split steps
        Grid g{-60.0, 60.0, 2048};
        const Wavefunction psi0 = gaussian_packet(g, p, 0.5, 0.0, 1.0);
        const Wavefunction psi =
            evolve(psi0, Potential::linear_gravity(), p, 1e-4, 10000);
        const double drift = std::abs(psi.norm_sq() - 1.0);
        ok = ok && drift <= 1e-10;
        d << "norm drift " << g17(drift);
    }
    {  // free Gaussian dispersion law
        Grid g{-24.0, 24.0, 2048};
        const Wavefunction psi =
            evolve(gaussian_packet(g, p, 0.0, 0.0, 1.0), Potential::free_particle(),
                   p, 1e-3, 1000);
        const double width = std::sqrt(variance_x(psi));
        const double rel = std::abs(width - std::sqrt(1.25)) / std::sqrt(1.25);
        ok = ok && rel <= 1e-8;
        d << ", width rel " << g17(rel);
    }
    {  // Ehrenfest trajectory under V = m g x
        Grid g{-16.0, 16.0, 2048};
        const Wavefunction psi =
            evolve(gaussian_packet(g, p, 1.0, 0.0, 0.5), Potential::linear_gravity(),
                   p, 5e-4, 1000);
        const double rel = std::abs(expectation_x(psi) - 0.875) / 0.875;
        ok = ok && rel <= 1e-8;
        d << ", ehrenfest rel " << g17(rel);
    }
    {  // time reversal
        Grid g{-16.0, 16.0, 1024};
        const Wavefunction psi0 = gaussian_packet(g, p, 0.8, 0.3, 0.6);
        Wavefunction psi = evolve(psi0, Potential::linear_gravity(), p, 1e-3, 500);
        psi = evolve(psi, Potential::linear_gravity(), p, -1e-3, 500);
        const double fidelity = std::abs(overlap(psi0, psi));
        ok = ok && fidelity >= 1.0 - 1e-10;
        d << ", reversal fidelity " << g17(fidelity);
    }
    {  // convergence order of the splitting phase error
        Grid g{-24.0, 24.0, 1024};
        const double t = 0.8;
        auto phase_err = [&](std::size_t steps) {
            const Wavefunction psi0 = gaussian_packet(g, p, 0.0, 0.0, 0.5);
            const double dt = t / static_cast<double>(steps);
            Wavefunction direct =
                evolve(psi0, Potential::linear_gravity(), p, dt, steps);
            Wavefunction free_leg =
                evolve(psi0, Potential::free_particle(), p, dt, steps);
            free_leg.t = t;
            return std::abs(overlap_phase(direct, gauge_map(free_leg, p)));
        };
        const double e1 = phase_err(200), e2 = phase_err(400), e3 = phase_err(800);
        const double order12 = std::log2(e1 / e2);
        const double order23 = std::log2(e2 / e3);
        ok = ok && std::abs(order12 - 2.0) <= 0.2 && std::abs(order23 - 2.0) <= 0.2;
        d << ", convergence order " << g17(order12) << " / " << g17(order23);
    }

    CriterionResult res;
    res.index = 6;
    res.name = "dynamics quality gates";
    res.budget_seconds = 60.0;
    res.seconds = timer.seconds();
    res.passed = ok && res.seconds <= res.budget_seconds;
    res.detail = d.str();
    return res;
}

/// 7. Universality cross-check: doubling the mass leaves the wavepacket
/// trajectory untouched while doubling both fitted phase coefficients.
inline CriterionResult criterion_universality(const AcceptanceOptions&) {
    detail::CriterionTimer timer;
    std::ostringstream d;
    bool ok = true;

    {  // <x>(t) does not depend on the mass
        Grid g{-20.0, 20.0, 2048};
        auto trajectory = [&](double mass) {
            PhysParams p;
            p.m = mass;
            Wavefunction psi = gaussian_packet(g, p, 0.0, 0.0, 0.35);
            std::vector<double> xs;
            for (int seg = 0; seg < 8; ++seg) {
                psi = evolve(psi, Potential::linear_gravity(), p, 1e-3, 100);
                xs.push_back(expectation_x(psi));
            }
            return xs;
        };
        const auto x1 = trajectory(1.0), x2 = trajectory(2.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < x1.size(); ++i)
            worst = std::max(worst, std::abs(x1[i] - x2[i]) /
                                        std::max(1.0, std::abs(x1[i])));
        ok = ok && worst <= 1e-8;
        d << "trajectory rel diff " << g17(worst);
    }
    {  // both fitted coefficients double with the mass
        const PhysParams p1;
        PhysParams p2 = p1;
        p2.m = 2.0;
        auto fit_for = [&](const PhysParams& pp) {
            Protocol proto;
            proto.params = pp;
            proto.d = 1.0;
            proto.sigma = 0.02;
            proto.method = Method::analytic;
            proto.t_samples = default_time_grid(pp, 1.0, 20);
            return fit_cubic(run_protocol(proto));
        };
        const CubicFit f1 = fit_for(p1), f2 = fit_for(p2);
        const double r1 = std::abs(f2.c1 / f1.c1 - 2.0) / 2.0;
        const double r3 = std::abs(f2.c3 / f1.c3 - 2.0) / 2.0;
        ok = ok && r1 <= 1e-9 && r3 <= 1e-9;
        d << ", c1 doubling rel " << g17(r1) << ", c3 doubling rel " << g17(r3);
    }

    CriterionResult res;
    res.index = 7;
    res.name = "universality cross-check (mass dependence)";
    res.budget_seconds = 30.0;
    res.seconds = timer.seconds();
    res.passed = ok && res.seconds <= res.budget_seconds;
    res.detail = d.str();
    return res;
}

/// 8. Rest-energy bookkeeping: the relativistic action-difference residual
/// stays below 10 (g t / c)^2 across c/(g t) from 10 to 1000.
inline CriterionResult criterion_action_difference(const AcceptanceOptions&) {
    detail::CriterionTimer timer;
    bool ok = true;
    double worst = 0.0;
    for (int i = 0; i <= 12; ++i) {
        PhysParams p;
        p.c = 10.0 * std::pow(100.0, i / 12.0);  // log-spaced [10, 1000]
        const double res = action_difference_check(p, 1.0, 1.0);
        const double bound = 10.0 / (p.c * p.c);
        ok = ok && std::abs(res) <= bound;
        worst = std::max(worst, std::abs(res) / bound);
    }

    CriterionResult res;
    res.index = 8;
    res.name = "action-difference residual (rest energy)";
    res.budget_seconds = 5.0;
    res.seconds = timer.seconds();
    res.passed = ok && res.seconds <= res.budget_seconds;
    std::ostringstream d;
    d << "worst residual/bound " << g17(worst);
    res.detail = d.str();
    return res;
}

inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {}) {
    std::vector<CriterionResult> out;
    auto wanted = [&](int idx) {
        return opt.only.empty() ||
               std::find(opt.only.begin(), opt.only.end(), idx) != opt.only.end();
    };
    if (wanted(1)) out.push_back(criterion_gauge_equivalence(opt));
    if (wanted(2)) out.push_back(criterion_t3_detection(opt));
    if (wanted(3)) out.push_back(criterion_method_agreement(opt));
    if (wanted(4)) out.push_back(criterion_rindler(opt));
    if (wanted(5)) out.push_back(criterion_gr_budget(opt));
    if (wanted(6)) out.push_back(criterion_dynamics_gates(opt));
    if (wanted(7)) out.push_back(criterion_universality(opt));
    if (wanted(8)) out.push_back(criterion_action_difference(opt));
    return out;
}

inline void print_acceptance(const std::vector<CriterionResult>& results,
                             std::ostream& os) {
    for (const auto& r : results) {
        os << (r.passed ? "[PASS] " : "[FAIL] ") << r.index << ". " << r.name
           << ": " << r.detail << " (" << g17(r.seconds) << " s of "
           << g17(r.budget_seconds) << " s budget)\n";
    }
}

inline bool all_passed(const std::vector<CriterionResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CriterionResult& r) { return r.passed; });
}

}  // namespace gravphase

#pragma once

#include <cmath>
#include <limits>

#include "gravphase/errors.hpp"
#include "gravphase/quadrature.hpp"
#include "gravphase/units.hpp"

namespace gravphase {

/// Action value of the gauge function relating the uniformly accelerated and
/// gravitational frames, Lambda(x,t) = -m g x t - m g^2 t^3 / 6, together
/// with the phase -Lambda/hbar it imprints on a wavefunction.
struct GaugeEval {
    double lambda_action;  // [J s]
    double phase;          // [rad], always exactly -lambda_action/hbar
};

inline GaugeEval gauge_phase(const PhysParams& p, double x, double t) {
    if (!std::isfinite(x) || !std::isfinite(t))
        throw invalid_parameter("gauge_phase: non-finite input");
    const double lambda = -(p.m * p.g * x * t) - (p.m * p.g * p.g * t * t * t) / 6.0;
    return GaugeEval{lambda, -lambda / p.hbar};
}

/// COW phase between two arms separated by delta_h in a uniform field:
/// m g delta_h t / hbar.
inline double cow_phase(const PhysParams& p, double delta_h, double t) {
    if (!std::isfinite(delta_h) || !std::isfinite(t))
        throw invalid_parameter("cow_phase: non-finite input");
    return p.m * p.g * delta_h * t / p.hbar;
}

/// Drop-interferometer phase (one branch held at height d, one released from
/// rest), (m g / hbar) (d t - g t^3 / 6). Valid while the falling branch is
/// above the lower arm; outside that window the value is still returned but
/// flagged, since phase scans may probe slightly past the fall time.
struct DropPhase {
    double phase;         // [rad]
    bool in_fall_window;  // 0 <= t <= sqrt(2d/g)
};

inline DropPhase drop_phase(const PhysParams& p, double d, double t) {
    if (!std::isfinite(d) || !std::isfinite(t) || d <= 0)
        throw invalid_parameter("drop_phase: need finite t and d > 0");
    const double phase = (p.m * p.g / p.hbar) * (d * t - p.g * t * t * t / 6.0);
    bool in_window = t >= 0;
    if (p.g > 0) in_window = in_window && t <= std::sqrt(2.0 * d / p.g);
    return DropPhase{phase, in_window};
}

/// Clock-rate comparison between heights x and x + delta_h outside a mass M,
/// with the matching phase terms. dt_exact is the difference of the two
/// Schwarzschild rate factors (upper minus lower) over lab time tau;
/// dt_series is its two-term Taylor expansion in 2GM/(c^2 r).
struct GrPhaseBudget {
    double newtonian_term;  // m g_loc dh tau / hbar            [rad]
    double gr_term;         // m g_loc^2 dh^2 tau / (c^2 hbar)  [rad]
    double dt_exact;        // [s]
    double dt_series;       // [s]
    double omega;           // m c^2 / hbar  [rad/s]
};

inline GrPhaseBudget gr_budget(const PhysParams& p, double x, double delta_h,
                               double tau) {
    if (!std::isfinite(x) || !std::isfinite(delta_h) || !std::isfinite(tau) || x <= 0)
        throw invalid_parameter("gr_budget: need finite inputs and x > 0");
    const double upper = x + delta_h;
    if (upper <= 0) throw invalid_parameter("gr_budget: x + delta_h must be > 0");
    const double gm = p.G * p.M;
    const double c2 = p.c * p.c;
    const double a_low = 2.0 * gm / (c2 * x);
    const double a_up = 2.0 * gm / (c2 * upper);
    if (a_low >= 1.0 || a_up >= 1.0)
        throw domain_error("gr_budget: height inside the 2GM/c^2 radius");

    // upper-minus-lower, written without the cancellation of the raw sqrts:
    // sqrt(1-a_up) - sqrt(1-a_low) = (a_low - a_up) / (sum of sqrts)
    const double da = 2.0 * gm * delta_h / (c2 * x * upper);  // a_low - a_up
    const double dt_exact =
        da / (std::sqrt(1.0 - a_up) + std::sqrt(1.0 - a_low)) * tau;
    // two-term expansion of the same difference: da/2 + (a_low^2 - a_up^2)/8
    const double dt_series = (da / 2.0 + da * (a_low + a_up) / 8.0) * tau;

    const double g_loc = gm / (x * x);
    GrPhaseBudget b;
    b.newtonian_term = p.m * g_loc * delta_h * tau / p.hbar;
    b.gr_term = p.m * g_loc * g_loc * delta_h * delta_h * tau / (c2 * p.hbar);
    b.dt_exact = dt_exact;
    b.dt_series = dt_series;
    b.omega = p.m * c2 / p.hbar;
    return b;
}

/// Proper time of a uniformly accelerated observer, t' = (c/a) asinh(a t / c).
/// Below a*t/c = 1e-4 the asinh is evaluated by its series so that the small
/// deficit t - t' survives in double precision.
inline double rindler_time(const PhysParams& p, double a, double t) {
    if (!std::isfinite(a) || !std::isfinite(t))
        throw invalid_parameter("rindler_time: non-finite input");
    if (a < 0) throw invalid_parameter("rindler_time: a must be >= 0");
    if (a == 0) return t;
    const double u = a * t / p.c;
    if (std::abs(u) < 1e-4) {
        const double u2 = u * u;
        return t * (1.0 - u2 / 6.0 + 3.0 * u2 * u2 / 40.0);
    }
    return (p.c / a) * std::asinh(u);
}

/// The cubic-in-time phase a uniformly accelerated frame picks up,
/// m a^2 t^3 / (6 hbar): the t^3 part of gauge_phase evaluated with g = a.
inline double rindler_cubic_phase(const PhysParams& p, double a, double t) {
    if (!std::isfinite(a) || !std::isfinite(t))
        throw invalid_parameter("rindler_cubic_phase: non-finite input");
    // written to match gauge_phase's t^3 term operation-for-operation
    return -(-(p.m * a * a * t * t * t) / 6.0) / p.hbar;
}

/// Consistency check on the rest-energy bookkeeping: the relativistic action
/// difference m c^2 (t - T) between a branch falling from rest and the lab
/// clock should reproduce m g x t + m g^2 t^3 / 6 up to O((gt/c)^2) relative.
/// T is the proper-time integral with rate factor
/// sqrt(1 - (g tau / c)^2 - 2 g x / c^2); the deficit t - T is integrated
/// directly (adaptive quadrature) to avoid cancellation.
inline double action_difference_check(const PhysParams& p, double x, double t) {
    if (!std::isfinite(x) || !std::isfinite(t))
        throw invalid_parameter("action_difference_check: non-finite input");
    const double denom =
        p.m * p.g * x * t + p.m * p.g * p.g * t * t * t / 6.0;
    if (p.g == 0 || t == 0) return 0.0;

    const double c2 = p.c * p.c;
    const double q_max = (p.g * t / p.c) * (p.g * t / p.c) + 2.0 * p.g * x / c2;
    if (q_max >= 1.0)
        throw domain_error("action_difference_check: outside the weak-field domain");

    auto rate_deficit = [&](double tau) {
        const double q = (p.g * tau / p.c) * (p.g * tau / p.c) + 2.0 * p.g * x / c2;
        return q / (1.0 + std::sqrt(1.0 - q));  // 1 - sqrt(1-q), stably
    };
    const double t_minus_T = integrate(rate_deficit, 0.0, t, 1e-14);
    const double num = p.m * c2 * t_minus_T;
    if (denom == 0)
        return num == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    return (num - denom) / std::abs(denom);
}

}  // namespace gravphase

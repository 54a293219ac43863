#pragma once

#include <cmath>
#include <cstddef>

#include "gravphase/errors.hpp"

namespace gravphase {

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1,1]. Column 0: abscissa,
// column 1: Gauss-7 weight (0 for Kronrod-only nodes), column 2: K15 weight.
inline constexpr double gk15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

template <class F>
double gk15_panel(const F& f, double a, double b, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = f(mid);
    double g7 = gk15[0][1] * f0;
    double k15 = gk15[0][2] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * gk15[i][0];
        const double fi = f(mid + dx) + f(mid - dx);
        g7 += gk15[i][1] * fi;
        k15 += gk15[i][2] * fi;
    }
    err = std::abs(k15 - g7) * std::abs(half);
    return k15 * half;
}

template <class F>
double adapt(const F& f, double a, double b, double tol, int depth) {
    double err = 0;
    const double s = gk15_panel(f, a, b, err);
    if (err <= tol || err <= 1e-17 * std::abs(s)) return s;
    if (depth <= 0)
        throw numerical_error("integrate: adaptive bisection did not converge");
    const double mid = 0.5 * (a + b);
    return adapt(f, a, mid, 0.5 * tol, depth - 1) +
           adapt(f, mid, b, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b]. The tolerance is
/// interpreted as |error| <= abs_tol + rel_tol * |estimate of integral|.
template <class F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-13,
                 double abs_tol = 0.0, int max_depth = 48) {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw invalid_parameter("integrate: non-finite interval");
    if (a == b) return 0.0;
    double err0 = 0;
    const double coarse = detail::gk15_panel(f, a, b, err0);
    const double tol = abs_tol + rel_tol * std::abs(coarse);
    if (err0 <= tol) return coarse;
    return detail::adapt(f, a, b, tol > 0 ? tol : 1e-300, max_depth);
}

}  // namespace gravphase

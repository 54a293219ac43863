#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gravphase/errors.hpp"
#include "gravphase/phases.hpp"
#include "gravphase/polyfit.hpp"
#include "gravphase/qdynamics.hpp"
#include "gravphase/quadrature.hpp"
#include "gravphase/text.hpp"
#include "gravphase/units.hpp"

namespace gravphase {

enum class Method { analytic, quadrature, wavepacket };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::analytic: return "analytic";
        case Method::quadrature: return "quadrature";
        default: return "wavepacket";
    }
}

inline std::optional<Method> parse_method(std::string_view s) {
    if (s == "analytic") return Method::analytic;
    if (s == "quadrature") return Method::quadrature;
    if (s == "wavepacket") return Method::wavepacket;
    return std::nullopt;
}

/// Grid request for the wavepacket method. x_min == x_max means "pick a
/// range that contains the protocol", in scaled units where d maps to 1.
struct GridSpec {
    std::size_t n = 4096;
    double x_min = 0.0;
    double x_max = 0.0;
    bool auto_range() const { return x_min == x_max; }
};

/// Drop-interferometer run: one branch held at height d, the other released
/// from rest at d, relative phase sampled at the listed drop times.
struct Protocol {
    PhysParams params;
    double d = 1.0;                 // arm separation [m]
    double sigma = 0.02;            // packet width [m]
    std::vector<double> t_samples;  // strictly increasing drop times [s]
    Method method = Method::analytic;
    GridSpec grid;                  // wavepacket method only
    double dt_factor = 1.0;         // scales the internal step (convergence studies)

    void validate() const {
        params.validate();
        if (!(d > 0) || !std::isfinite(d))
            throw invalid_parameter("Protocol: d must be finite and > 0");
        if (!(sigma > 0) || sigma > d / 10.0)
            throw invalid_parameter("Protocol: need 0 < sigma <= d/10");
        if (t_samples.empty())
            throw invalid_parameter("Protocol: empty time grid");
        double prev = 0.0;
        for (double t : t_samples) {
            if (!(t > prev))
                throw invalid_parameter("Protocol: drop times must be positive and strictly increasing");
            prev = t;
        }
        if (params.g > 0) {
            const double cap = 1.2 * std::sqrt(2.0 * d / params.g);
            if (t_samples.back() > cap)
                throw invalid_parameter("Protocol: max drop time exceeds 1.2 sqrt(2d/g)");
        }
        if (!(dt_factor > 0) || dt_factor > 64)
            throw invalid_parameter("Protocol: dt_factor out of range");
    }
};

/// Sampled relative phase with the continuity-restored (unwrapped) values,
/// the raw principal values they wrap to, and the per-sample overlap
/// magnitude (identically 1 for the analytic and quadrature routes).
struct PhaseSeries {
    std::vector<double> times;
    std::vector<double> phases_unwrapped;
    std::vector<double> phases_raw;  // in (-pi, pi]
    std::vector<double> overlap_mag;
    Method method = Method::analytic;
    double fall_time = 0.0;  // sqrt(2d/g); 0 when g = 0
};

/// Cubic least-squares fit of a PhaseSeries in physical units.
struct CubicFit {
    double c0 = 0, c1 = 0, c2 = 0, c3 = 0;  // [rad / s^k]
    double rms_residual = 0;                 // [rad]
    double condition = 0;                    // scaled-design diagnostic
    int degree = 3;
};

/// 20 samples uniform over [0.1, 1.0] sqrt(2d/g): skips the degenerate t->0
/// region while spanning enough window to condition a cubic fit.
inline std::vector<double> default_time_grid(const PhysParams& p, double d,
                                             std::size_t n_samples = 20) {
    p.validate();
    if (!(p.g > 0)) throw invalid_parameter("default_time_grid: needs g > 0");
    if (!(d > 0)) throw invalid_parameter("default_time_grid: needs d > 0");
    if (n_samples < 2) throw invalid_parameter("default_time_grid: needs >= 2 samples");
    const double t_fall = std::sqrt(2.0 * d / p.g);
    std::vector<double> out(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k)
        out[k] = (0.1 + 0.9 * static_cast<double>(k) /
                            static_cast<double>(n_samples - 1)) *
                 t_fall;
    return out;
}

inline double wrap_phase(double phi) { return std::remainder(phi, 2.0 * std::numbers::pi); }

namespace detail {

/// One co-moving split step of the dropped branch. With the kinetic
/// dispersion factored out (the state is premultiplied by the inverse free
/// evolution), what remains evolves under the generator m g x + g tau p:
/// a potential kick plus a time-linear drift of the packet position. Both
/// split stages are diagonal, the packet keeps its initial width, and the
/// missed commutator term is a pure global phase of order dt^3 per step.
inline void comoving_step(Wavefunction& chi, const PhysParams& q, const FftPlan& plan,
                          const std::vector<std::complex<double>>& half_kick,
                          double t_mid, double h) {
    auto* a = chi.amps.data();
    const std::size_t n = chi.grid.n;
    for (std::size_t i = 0; i < n; ++i) a[i] *= half_kick[i];
    plan.forward(a);
    const double shift = q.g * t_mid * h;
    for (std::size_t i = 0; i < n; ++i)
        a[i] *= std::polar(1.0, -chi.grid.k(i) * shift);
    plan.inverse(a);
    for (std::size_t i = 0; i < n; ++i) a[i] *= half_kick[i];
}

inline PhaseSeries run_wavepacket(const Protocol& proto) {
    // Everything runs non-dimensionalized: d maps to 1 and the classical
    // fall time to 1, so the grid and step sizes are O(1) regardless of the
    // preset. Phases are dimensionless and carry over unchanged.
    const ScaleSystem scales = build_scales(proto.params, proto.d);
    const PhysParams q = to_dimensionless(proto.params, scales);
    const double d = 1.0;
    const double sigma = proto.sigma / scales.L0;

    Grid grid;
    grid.n = proto.grid.n;
    if (proto.grid.auto_range()) {
        grid.x_min = -0.5;
        grid.x_max = 3.5;
    } else {
        grid.x_min = proto.grid.x_min;
        grid.x_max = proto.grid.x_max;
    }

    const Wavefunction packet0 = gaussian_packet(grid, q, d, 0.0, sigma);
    Wavefunction chi = packet0;

    const double t_max = proto.t_samples.back() / scales.T0;
    // the recentering de-boost must stay inside the momentum grid
    const double k_boost = q.m * q.g * t_max / q.hbar;
    const double k_band = 4.0 / sigma;  // packet bandwidth, ~8 sigma_k
    const double k_nyq = std::numbers::pi / grid.dx();
    if (k_boost + k_band > 0.9 * k_nyq)
        throw containment_error(
            "run_protocol: grid cannot resolve the fall momentum; "
            "increase n or the de Broglie wavelength");
    // step size from the splitting-phase error model m g^2 t dt^2 / (12 hbar)
    double dt = std::sqrt(12.0 * q.hbar * 1e-6 / (q.m * q.g * q.g * t_max));
    dt = std::min(dt, t_max / 64.0) * proto.dt_factor;

    FftPlan plan(grid.n);
    std::vector<std::complex<double>> half_kick(grid.n);

    PhaseSeries series;
    series.method = Method::wavepacket;
    series.times = proto.t_samples;
    series.fall_time = std::sqrt(2.0 * proto.d / proto.params.g);

    double t_now = 0.0;
    double prev_unwrapped = 0.0;
    for (std::size_t k = 0; k < proto.t_samples.size(); ++k) {
        const double t_k = proto.t_samples[k] / scales.T0;
        const auto substeps =
            static_cast<std::size_t>(std::ceil((t_k - t_now) / dt));
        const double h = (t_k - t_now) / static_cast<double>(substeps);
        for (std::size_t i = 0; i < grid.n; ++i)
            half_kick[i] =
                std::polar(1.0, -q.m * q.g * grid.x(i) * h / (2.0 * q.hbar));
        for (std::size_t s = 0; s < substeps; ++s) {
            comoving_step(chi, q, plan, half_kick,
                          t_now + (static_cast<double>(s) + 0.5) * h, h);
        }
        t_now = t_k;
        check_contained(chi, "run_protocol");

        // recenter the branch on the held arm: undo the accumulated
        // co-moving displacement and the classical momentum kick
        Wavefunction proc = spectral_shift(chi, -0.5 * q.g * t_k * t_k);
        proc = momentum_boost(proc, q, q.m * q.g * t_k);

        // held branch: the initial packet carrying the analytic potential
        // phase at height d, its free kinetic evolution already divided out
        Wavefunction ref = packet0;
        const double held = q.m * q.g * d * t_k / q.hbar;
        for (auto& ampl : ref.amps) ampl *= std::polar(1.0, -held);

        const auto z = overlap(ref, proc);
        if (std::abs(z) < 0.1)
            throw no_overlap_error("run_protocol: overlap " + std::to_string(std::abs(z)) +
                                   " < 0.1 at sample " + std::to_string(k));
        const double raw = std::arg(z);
        const double unwrapped =
            raw + 2.0 * std::numbers::pi *
                      std::round((prev_unwrapped - raw) / (2.0 * std::numbers::pi));
        if (std::abs(unwrapped - prev_unwrapped) >= std::numbers::pi)
            throw numerical_error("run_protocol: time grid too coarse to unwrap at sample " +
                                  std::to_string(k));
        series.phases_raw.push_back(raw);
        series.phases_unwrapped.push_back(unwrapped);
        series.overlap_mag.push_back(std::abs(z));
        prev_unwrapped = unwrapped;
    }
    return series;
}

}  // namespace detail

/// Runs the protocol and returns the sampled relative phase, referenced to
/// zero at t = 0. The analytic route is the closed form, the quadrature
/// route integrates (1/hbar) m g x(tau) along x(tau) = d - g tau^2 / 2, and
/// the wavepacket route propagates the released branch on a grid and reads
/// the phase off the overlap with the held branch.
inline PhaseSeries run_protocol(const Protocol& proto) {
    proto.validate();
    if (proto.method == Method::wavepacket) {
        if (!(proto.params.g > 0))
            throw invalid_parameter("run_protocol: wavepacket method needs g > 0");
        return detail::run_wavepacket(proto);
    }

    PhaseSeries series;
    series.method = proto.method;
    series.times = proto.t_samples;
    series.fall_time =
        proto.params.g > 0 ? std::sqrt(2.0 * proto.d / proto.params.g) : 0.0;
    const PhysParams& p = proto.params;
    for (double t : proto.t_samples) {
        double phi = 0;
        if (proto.method == Method::analytic) {
            phi = drop_phase(p, proto.d, t).phase;
        } else {
            phi = integrate(
                      [&](double tau) {
                          return p.m * p.g * (proto.d - 0.5 * p.g * tau * tau);
                      },
                      0.0, t, 1e-14) /
                  p.hbar;
        }
        series.phases_unwrapped.push_back(phi);
        series.phases_raw.push_back(wrap_phase(phi));
        series.overlap_mag.push_back(1.0);
    }
    return series;
}

namespace detail {
inline void check_fit_preconditions(const PhaseSeries& s) {
    if (s.times.size() < 8)
        throw invalid_parameter("fit: need at least 8 samples");
    if (s.fall_time > 0 &&
        s.times.back() - s.times.front() < 0.5 * s.fall_time)
        throw invalid_parameter("fit: samples must span at least half the fall window");
}

inline CubicFit fit_series(const PhaseSeries& s, int degree) {
    check_fit_preconditions(s);
    const PolyFit f = poly_fit(s.times, s.phases_unwrapped, degree);
    return CubicFit{f.c[0], f.c[1], f.c[2], f.c[3], f.rms_residual, f.condition,
                    degree};
}
}  // namespace detail

inline CubicFit fit_cubic(const PhaseSeries& s) { return detail::fit_series(s, 3); }
inline CubicFit fit_quadratic(const PhaseSeries& s) { return detail::fit_series(s, 2); }

/// rms residual ratio of the quadratic-only model over the full cubic model.
/// Much greater than 1 means the data statistically requires the t^3 term.
inline double t3_significance(const CubicFit& cubic, const CubicFit& quadratic) {
    if (cubic.rms_residual == 0)
        return quadratic.rms_residual == 0
                   ? 1.0
                   : std::numeric_limits<double>::infinity();
    return quadratic.rms_residual / cubic.rms_residual;
}

/// Interference fringe intensity I = (1 + V cos phi) / 2, with the
/// visibility taken from the per-sample overlap magnitude.
inline std::vector<double> fringes(const PhaseSeries& s) {
    std::vector<double> out(s.times.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = 0.5 * (1.0 + s.overlap_mag[i] * std::cos(s.phases_unwrapped[i]));
    return out;
}

inline void write_phase_series_csv(const PhaseSeries& s, std::ostream& os) {
    os << "t,phase_rad,method,overlap_mag\n";
    for (std::size_t i = 0; i < s.times.size(); ++i)
        os << g17(s.times[i]) << ',' << g17(s.phases_unwrapped[i]) << ','
           << method_name(s.method) << ',' << g17(s.overlap_mag[i]) << '\n';
}

inline void write_phase_series_csv(const PhaseSeries& s, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw io_error("write_phase_series_csv: cannot open " + path);
    write_phase_series_csv(s, os);
    if (!os) throw io_error("write_phase_series_csv: write failed for " + path);
}

}  // namespace gravphase

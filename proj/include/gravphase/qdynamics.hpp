#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "gravphase/errors.hpp"
#include "gravphase/fft.hpp"
#include "gravphase/units.hpp"

namespace gravphase {

/// Uniform 1-D spatial grid. The point count must be a power of two so the
/// spectral transforms stay exact and fast; the implied momentum grid spans
/// +-pi/dx.
struct Grid {
    double x_min = -32.0;
    double x_max = 32.0;
    std::size_t n = 1024;

    void validate() const {
        if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max))
            throw invalid_parameter("Grid: need finite x_max > x_min");
        if (n < 16 || !is_power_of_two(n))
            throw invalid_parameter("Grid: n must be a power of two >= 16");
    }
    double dx() const { return (x_max - x_min) / static_cast<double>(n); }
    double x(std::size_t i) const { return x_min + dx() * static_cast<double>(i); }
    /// FFT-ordered wavenumber of bin i.
    double k(std::size_t i) const {
        const double dk = 2.0 * std::numbers::pi / (x_max - x_min);
        const auto half = n / 2;
        return dk * (i < half ? static_cast<double>(i)
                              : static_cast<double>(i) - static_cast<double>(n));
    }
    bool operator==(const Grid& o) const {
        return x_min == o.x_min && x_max == o.x_max && n == o.n;
    }
};

enum class Frame { freely_falling, gravitational };

inline const char* frame_name(Frame f) {
    return f == Frame::freely_falling ? "freely-falling" : "gravitational";
}

/// Complex amplitudes on a grid. Value type: copying one is copying the
/// state. The global phase of amps is physical here and no operation in this
/// module is allowed to renormalize it away.
struct Wavefunction {
    Grid grid;
    std::vector<std::complex<double>> amps;
    Frame frame = Frame::freely_falling;
    double t = 0.0;

    double norm_sq() const {
        double s = 0;
        for (const auto& a : amps) s += std::norm(a);
        return s * grid.dx();
    }
    double max_abs() const {
        double m = 0;
        for (const auto& a : amps) m = std::max(m, std::abs(a));
        return m;
    }
};

enum class PotentialKind { linear_gravity, free_particle };

/// V = m g x, or V = 0. Parameters come from the PhysParams passed alongside.
struct Potential {
    PotentialKind kind = PotentialKind::free_particle;
    static Potential linear_gravity() { return {PotentialKind::linear_gravity}; }
    static Potential free_particle() { return {PotentialKind::free_particle}; }
    void validate(const PhysParams& p) const {
        if (kind == PotentialKind::linear_gravity && p.g <= 0)
            throw invalid_parameter("Potential: linear gravity requires g > 0");
    }
};

namespace detail {
constexpr double edge_fraction = 1e-8;  // containment: |psi(edge)| <= this * max|psi|

inline void check_contained(const Wavefunction& psi, const std::string& what) {
    const double cap = edge_fraction * psi.max_abs();
    const std::size_t n = psi.grid.n;
    for (std::size_t i : {std::size_t{0}, std::size_t{1}, n - 2, n - 1}) {
        if (std::abs(psi.amps[i]) > cap)
            throw containment_error(what + ": packet reached the grid edge");
    }
}
}  // namespace detail

/// Normalized Gaussian packet exp(-(x-x0)^2/(4 sigma^2) + i p0 x / hbar).
/// <x> = x0 and Var(x) = sigma^2. Must sit at least 5 sigma inside the grid
/// and be resolved by at least 4 grid points per sigma.
inline Wavefunction gaussian_packet(const Grid& grid, const PhysParams& p,
                                    double x0, double p0, double sigma,
                                    Frame frame = Frame::freely_falling) {
    grid.validate();
    if (!(sigma > 0) || !std::isfinite(x0) || !std::isfinite(p0))
        throw invalid_parameter("gaussian_packet: bad x0/p0/sigma");
    if (sigma < 4.0 * grid.dx())
        throw containment_error("gaussian_packet: grid too coarse, need sigma >= 4 dx");
    if (x0 - 5.0 * sigma < grid.x_min || x0 + 5.0 * sigma > grid.x_max)
        throw containment_error("gaussian_packet: grid too small, need 5 sigma margins");

    Wavefunction psi;
    psi.grid = grid;
    psi.frame = frame;
    psi.amps.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double x = grid.x(i);
        const double u = (x - x0) / (2.0 * sigma);
        psi.amps[i] = std::polar(std::exp(-u * u), p0 * x / p.hbar);
    }
    const double norm = std::sqrt(psi.norm_sq());
    for (auto& a : psi.amps) a /= norm;
    return psi;
}

inline double expectation_x(const Wavefunction& psi) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < psi.grid.n; ++i) {
        const double w = std::norm(psi.amps[i]);
        num += w * psi.grid.x(i);
        den += w;
    }
    return num / den;
}

inline double variance_x(const Wavefunction& psi) {
    const double mean = expectation_x(psi);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < psi.grid.n; ++i) {
        const double w = std::norm(psi.amps[i]);
        const double d = psi.grid.x(i) - mean;
        num += w * d * d;
        den += w;
    }
    return num / den;
}

inline double expectation_p(const Wavefunction& psi, const PhysParams& p) {
    std::vector<std::complex<double>> ft = psi.amps;
    FftPlan plan(psi.grid.n);
    plan.forward(ft.data());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < psi.grid.n; ++i) {
        const double w = std::norm(ft[i]);
        num += w * p.hbar * psi.grid.k(i);
        den += w;
    }
    return num / den;
}

/// <a|b> = sum conj(a) b dx. Grids must match.
inline std::complex<double> overlap(const Wavefunction& a, const Wavefunction& b) {
    if (!(a.grid == b.grid))
        throw invalid_parameter("overlap: wavefunctions live on different grids");
    std::complex<double> s = 0;
    for (std::size_t i = 0; i < a.grid.n; ++i)
        s += std::conj(a.amps[i]) * b.amps[i];
    return s * a.grid.dx();
}

/// arg <a|b> in (-pi, pi]. Meaningless without overlap, hence the threshold.
inline double overlap_phase(const Wavefunction& a, const Wavefunction& b) {
    const auto z = overlap(a, b);
    if (std::abs(z) < 0.1)
        throw no_overlap_error("overlap_phase: |<a|b>| = " + std::to_string(std::abs(z)) +
                               " < 0.1");
    return std::arg(z);
}

/// Exact spectral translation: returns psi shifted so features at x move to
/// x + a. Phase-exact for band-limited, contained states.
inline Wavefunction spectral_shift(const Wavefunction& psi, double a) {
    Wavefunction out = psi;
    FftPlan plan(psi.grid.n);
    plan.forward(out.amps.data());
    for (std::size_t i = 0; i < psi.grid.n; ++i) {
        const double k = psi.grid.k(i);
        out.amps[i] *= std::polar(1.0, -k * a);
    }
    plan.inverse(out.amps.data());
    detail::check_contained(out, "spectral_shift");
    return out;
}

/// Pointwise boost exp(i dp x / hbar): displaces <p> by +dp.
inline Wavefunction momentum_boost(const Wavefunction& psi, const PhysParams& p,
                                   double dp) {
    Wavefunction out = psi;
    for (std::size_t i = 0; i < psi.grid.n; ++i)
        out.amps[i] *= std::polar(1.0, dp * psi.grid.x(i) / p.hbar);
    return out;
}

namespace detail {

/// Energy scale of the occupied part of the state: kinetic energy at the
/// spectrally occupied bandwidth plus the potential range over the packet's
/// spatial support. Used only for the dt stability-accuracy guard; the grid's
/// own k_max would demand absurdly small steps the accuracy does not need.
inline double occupied_energy_scale(const Wavefunction& psi, const Potential& v,
                                    const PhysParams& p) {
    const std::size_t n = psi.grid.n;
    std::vector<std::complex<double>> ft = psi.amps;
    FftPlan plan(n);
    plan.forward(ft.data());
    double ft_max = 0;
    for (const auto& a : ft) ft_max = std::max(ft_max, std::abs(a));
    const double k_floor = 1e-10 * ft_max;
    double k_occ = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(ft[i]) > k_floor) k_occ = std::max(k_occ, std::abs(psi.grid.k(i)));

    double e_kin = p.hbar * p.hbar * k_occ * k_occ / (2.0 * p.m);
    double e_pot = 0;
    if (v.kind == PotentialKind::linear_gravity) {
        const double x_floor = edge_fraction * psi.max_abs();
        double x_abs = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(psi.amps[i]) > x_floor)
                x_abs = std::max(x_abs, std::abs(psi.grid.x(i)));
        // packets fall; leave room for the fall to widen the support
        e_pot = p.m * p.g * std::max(x_abs, std::abs(psi.grid.x_min));
    }
    return e_kin + e_pot;
}

}  // namespace detail

/// Largest |dt| the stability-accuracy guard in evolve() will accept.
inline double max_stable_dt(const Wavefunction& psi, const Potential& v,
                            const PhysParams& p) {
    return 0.5 * p.hbar / detail::occupied_energy_scale(psi, v, p);
}

namespace detail {

/// Precomputed diagonal factors of one symmetric split step: half potential
/// kick, spectral kinetic drift, half kick.
struct SplitStepper {
    FftPlan plan;
    std::vector<std::complex<double>> half_kick, drift;

    SplitStepper(const Grid& grid, const Potential& v, const PhysParams& p,
                 double dt)
        : plan(grid.n), half_kick(grid.n), drift(grid.n) {
        for (std::size_t i = 0; i < grid.n; ++i) {
            const double V = v.kind == PotentialKind::linear_gravity
                                 ? p.m * p.g * grid.x(i)
                                 : 0.0;
            half_kick[i] = std::polar(1.0, -V * dt / (2.0 * p.hbar));
            const double k = grid.k(i);
            drift[i] = std::polar(1.0, -p.hbar * k * k * dt / (2.0 * p.m));
        }
    }

    void apply(std::complex<double>* a) const {
        const std::size_t n = half_kick.size();
        for (std::size_t i = 0; i < n; ++i) a[i] *= half_kick[i];
        plan.forward(a);
        for (std::size_t i = 0; i < n; ++i) a[i] *= drift[i];
        plan.inverse(a);
        for (std::size_t i = 0; i < n; ++i) a[i] *= half_kick[i];
    }
};

}  // namespace detail

/// Second-order symmetric split-step propagation of the Schroedinger
/// equation under V = m g x or V = 0. The global phase is physical and is
/// never renormalized. Norm and containment are checked every step; a packet
/// touching the boundary aborts with the offending step in the message.
inline Wavefunction evolve(Wavefunction psi, const Potential& v,
                           const PhysParams& p, double dt, std::size_t steps) {
    psi.grid.validate();
    v.validate(p);
    if (!std::isfinite(dt) || dt == 0)
        throw invalid_parameter("evolve: dt must be finite and nonzero");
    if (steps == 0) return psi;
    if (std::abs(dt) > max_stable_dt(psi, v, p))
        throw invalid_parameter("evolve: |dt| exceeds the stability-accuracy guard");

    const std::size_t n = psi.grid.n;
    const detail::SplitStepper stepper(psi.grid, v, p, dt);

    auto* a = psi.amps.data();
    for (std::size_t s = 0; s < steps; ++s) {
        stepper.apply(a);

        double norm2 = 0, amax = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double m2 = std::norm(a[i]);
            norm2 += m2;
            amax = std::max(amax, m2);
        }
        norm2 *= psi.grid.dx();
        amax = std::sqrt(amax);
        if (std::abs(norm2 - 1.0) > 1e-9)
            throw numerical_error("evolve: norm drifted past 1e-9 at step " +
                                  std::to_string(s + 1));
        const double cap = detail::edge_fraction * amax;
        if (std::abs(a[0]) > cap || std::abs(a[1]) > cap ||
            std::abs(a[n - 2]) > cap || std::abs(a[n - 1]) > cap)
            throw containment_error("evolve: containment lost at step " +
                                    std::to_string(s + 1));
        psi.t += dt;
    }
    return psi;
}

/// Maps a freely-falling-frame solution onto the gravitational-frame solution
/// at the same time: resample at the fallen coordinate x + g t^2 / 2, then
/// apply the boost-plus-cubic gauge factor exp(-i (m g t x + m g^2 t^3 / 6) / hbar).
/// The sign/shift convention is pinned by the Schroedinger residual and
/// direct-evolution cross-checks in the test suite, not by any one textbook.
inline Wavefunction gauge_map(const Wavefunction& psi_F, const PhysParams& p) {
    if (psi_F.frame != Frame::freely_falling)
        throw invalid_parameter("gauge_map: input must be a freely-falling-frame state");
    const double t = psi_F.t;
    Wavefunction out = spectral_shift(psi_F, -0.5 * p.g * t * t);
    const double cubic = p.m * p.g * p.g * t * t * t / 6.0;
    for (std::size_t i = 0; i < out.grid.n; ++i) {
        const double x = out.grid.x(i);
        out.amps[i] *= std::polar(1.0, -(p.m * p.g * t * x + cubic) / p.hbar);
    }
    out.frame = Frame::gravitational;
    return out;
}

/// ||i hbar dpsi/dt - H psi|| / ||H psi|| with the time derivative taken from
/// a centered one-step evolution difference and H applied spectrally.
/// delta_t is a fixed probe step: solutions of the Schroedinger equation sit
/// at the (E delta_t / hbar)^2 / 6 discretization floor, anything else shows
/// up O(1). The probe steps deliberately bypass the dt guard of evolve();
/// a state whose occupied bandwidth breaks the guard is exactly the kind
/// this diagnostic should flag with a large residual.
inline double schrodinger_residual(const Wavefunction& psi, const Potential& v,
                                   const PhysParams& p, double delta_t = 1e-4) {
    psi.grid.validate();
    v.validate(p);
    if (!(delta_t > 0))
        throw invalid_parameter("schrodinger_residual: delta_t must be > 0");
    const std::size_t n = psi.grid.n;

    // H psi, spectrally for the kinetic part
    std::vector<std::complex<double>> hpsi = psi.amps;
    FftPlan plan(n);
    plan.forward(hpsi.data());
    for (std::size_t i = 0; i < n; ++i) {
        const double k = psi.grid.k(i);
        hpsi[i] *= p.hbar * p.hbar * k * k / (2.0 * p.m);
    }
    plan.inverse(hpsi.data());
    if (v.kind == PotentialKind::linear_gravity)
        for (std::size_t i = 0; i < n; ++i)
            hpsi[i] += p.m * p.g * psi.grid.x(i) * psi.amps[i];

    std::vector<std::complex<double>> fwd = psi.amps, bwd = psi.amps;
    detail::SplitStepper(psi.grid, v, p, delta_t).apply(fwd.data());
    detail::SplitStepper(psi.grid, v, p, -delta_t).apply(bwd.data());

    double num = 0, den = 0;
    const std::complex<double> ih{0.0, p.hbar};
    for (std::size_t i = 0; i < n; ++i) {
        const auto dpsi_dt = (fwd[i] - bwd[i]) / (2.0 * delta_t);
        num += std::norm(ih * dpsi_dt - hpsi[i]);
        den += std::norm(hpsi[i]);
    }
    return std::sqrt(num / den);
}

/// Mutual-oracle comparison at time t: the same initial packet is (a) evolved
/// directly under V = m g x, and (b) evolved freely then pushed through
/// gauge_map. Equality including the global phase is the wavefunction-level
/// statement of the equivalence principle for uniform fields.
struct GaugeCheckResult {
    double fidelity;       // |<direct|mapped>|
    double phase;          // arg <direct|mapped>  [rad]
    std::size_t steps;     // split steps used per leg
};

inline GaugeCheckResult check_gauge_equivalence(const PhysParams& p,
                                                const Grid& grid, double x0,
                                                double p0, double sigma,
                                                double t,
                                                double phase_tol = 2e-6) {
    if (!(t > 0)) throw invalid_parameter("check_gauge_equivalence: t must be > 0");
    const Wavefunction psi0 = gaussian_packet(grid, p, x0, p0, sigma);

    // dt from the splitting-phase error model m g^2 t dt^2 / (24 hbar),
    // then clipped by the stability guard of the gravitational leg.
    double dt = std::sqrt(24.0 * p.hbar * phase_tol / (p.m * p.g * p.g * t));
    dt = std::min(dt, max_stable_dt(psi0, Potential::linear_gravity(), p));
    const auto steps = static_cast<std::size_t>(std::ceil(t / dt));
    dt = t / static_cast<double>(steps);

    Wavefunction direct = evolve(psi0, Potential::linear_gravity(), p, dt, steps);
    Wavefunction free_leg = evolve(psi0, Potential::free_particle(), p, dt, steps);
    free_leg.t = t;  // suppress accumulated fp drift before the analytic map
    const Wavefunction mapped = gauge_map(free_leg, p);

    const auto z = overlap(direct, mapped);
    return GaugeCheckResult{std::abs(z), std::arg(z), steps};
}

}  // namespace gravphase

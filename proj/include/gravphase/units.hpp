#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gravphase/errors.hpp"

namespace gravphase {

/// Physical constants and experiment parameters, in SI or dimensionless form.
/// G and M only enter the general-relativistic clock-rate corrections.
struct PhysParams {
    double m = 1.0;     // particle mass [kg]
    double g = 1.0;     // uniform field strength [m/s^2]
    double hbar = 1.0;  // reduced Planck constant [J s]
    double c = 1.0;     // speed of light [m/s]
    double G = 0.0;     // Newton constant [m^3/(kg s^2)]
    double M = 0.0;     // central body mass [kg]
    std::string label = "dimensionless";

    void validate() const {
        auto bad = [](double v) { return !std::isfinite(v); };
        if (bad(m) || bad(g) || bad(hbar) || bad(c) || bad(G) || bad(M))
            throw invalid_parameter("PhysParams: non-finite field in '" + label + "'");
        if (m <= 0) throw invalid_parameter("PhysParams: m must be > 0");
        if (hbar <= 0) throw invalid_parameter("PhysParams: hbar must be > 0");
        if (c <= 0) throw invalid_parameter("PhysParams: c must be > 0");
        if (g < 0) throw invalid_parameter("PhysParams: g must be >= 0");
        if (G < 0) throw invalid_parameter("PhysParams: G must be >= 0");
        if (M < 0) throw invalid_parameter("PhysParams: M must be >= 0");
    }
};

/// Characteristic length/time/energy used to bring the dynamics to O(1)
/// magnitudes before any grid propagation touches it.
struct ScaleSystem {
    double L0 = 1.0;  // [m]
    double T0 = 1.0;  // [s]
    double E0 = 1.0;  // [J]
    std::string derivation;

    double length_to_dimless(double x) const { return x / L0; }
    double time_to_dimless(double t) const { return t / T0; }
    double energy_to_dimless(double e) const { return e / E0; }
    double length_from_dimless(double x) const { return x * L0; }
    double time_from_dimless(double t) const { return t * T0; }
    double mass_unit() const { return E0 * T0 * T0 / (L0 * L0); }
};

/// Scale rule: L0 = d, T0 = sqrt(2d/g) (classical fall time through d),
/// E0 = m g d. For g = 0 the fall time degenerates, so T0 = m d^2 / hbar
/// (dispersion time) and E0 = hbar / T0 instead.
inline ScaleSystem build_scales(const PhysParams& p, double d) {
    p.validate();
    if (!std::isfinite(d) || d <= 0)
        throw invalid_parameter("build_scales: d must be finite and > 0");
    ScaleSystem s;
    s.L0 = d;
    if (p.g > 0) {
        s.T0 = std::sqrt(2.0 * d / p.g);
        s.E0 = p.m * p.g * d;
        s.derivation = "L0=d, T0=sqrt(2d/g), E0=mgd";
    } else {
        s.T0 = p.m * d * d / p.hbar;
        s.E0 = p.hbar / s.T0;
        s.derivation = "L0=d, T0=m d^2/hbar, E0=hbar/T0 (g=0 fallback)";
    }
    if (!std::isfinite(s.T0) || !std::isfinite(s.E0) || s.T0 <= 0 || s.E0 <= 0)
        throw invalid_parameter("build_scales: degenerate scale system");
    return s;
}

inline PhysParams to_dimensionless(const PhysParams& p, const ScaleSystem& s) {
    p.validate();
    const double M0 = s.mass_unit();
    PhysParams q = p;
    q.m = p.m / M0;
    q.g = p.g * s.T0 * s.T0 / s.L0;
    q.hbar = p.hbar / (s.E0 * s.T0);
    q.c = p.c * s.T0 / s.L0;
    q.G = p.G * M0 * s.T0 * s.T0 / (s.L0 * s.L0 * s.L0);
    q.M = p.M / M0;
    return q;
}

inline PhysParams from_dimensionless(const PhysParams& p, const ScaleSystem& s) {
    p.validate();
    const double M0 = s.mass_unit();
    PhysParams q = p;
    q.m = p.m * M0;
    q.g = p.g * s.L0 / (s.T0 * s.T0);
    q.hbar = p.hbar * s.E0 * s.T0;
    q.c = p.c * s.L0 / s.T0;
    q.G = p.G * s.L0 * s.L0 * s.L0 / (M0 * s.T0 * s.T0);
    q.M = p.M * M0;
    return q;
}

// Built-in presets. The SI values are CODATA 2018 inputs, not results:
//   neutron mass 1.67492749804e-27 kg, Rb-87 mass 86.909180531 u,
//   hbar 1.054571817e-34 J s, c 299792458 m/s (exact), G 6.67430e-11.
// Earth mass is included so the clock-rate budget has something to chew on.
inline const std::vector<PhysParams>& presets() {
    static const std::vector<PhysParams> table = {
        PhysParams{1.0, 1.0, 1.0, 1.0, 0.0, 0.0, "dimensionless"},
        PhysParams{1.67492749804e-27, 9.81, 1.054571817e-34, 299792458.0,
                   6.67430e-11, 5.9722e24, "neutron"},
        PhysParams{86.909180531 * 1.66053906660e-27, 9.81, 1.054571817e-34,
                   299792458.0, 6.67430e-11, 5.9722e24, "rb87"},
    };
    return table;
}

inline std::optional<PhysParams> find_preset(std::string_view name) {
    for (const auto& p : presets())
        if (p.label == name) return p;
    return std::nullopt;
}

}  // namespace gravphase

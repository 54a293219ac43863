#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gravphase/errors.hpp"
#include "gravphase/fft.hpp"
#include "gravphase/interferometer.hpp"
#include "gravphase/text.hpp"
#include "gravphase/units.hpp"

namespace gravphase {

/// Everything a batch run needs, resolved from a plain key=value config.
/// A `preset` is applied first wherever it appears; explicit keys override
/// its values regardless of order.
struct RunConfig {
    PhysParams params;  // dimensionless preset unless overridden

    // geometry
    double d = 1.0;
    std::optional<double> delta_h;  // default: d
    double x = 1.0;                 // reference height for the GR budget
    std::optional<double> sigma;    // default: d/50 (drop), 0.35 L0 (gauge-check)
    double a = 0.0;                 // proper acceleration for the rindler table
    double tau = 1.0;               // lab time for the GR budget
    std::optional<double> t;        // single time for gauge-check
    double x0 = 0.0;                // packet center offset for gauge-check
    double p0 = 0.0;                // packet momentum for gauge-check

    // time grid
    std::optional<double> t_min;         // default 0.1 sqrt(2d/g)
    std::optional<double> t_max;         // default sqrt(2d/g)
    std::size_t t_samples = 20;
    std::vector<double> times;           // explicit grid, overrides the above

    Method method = Method::analytic;

    // spatial grid for the wavepacket method
    std::size_t n = 4096;
    double x_min = 0.0, x_max = 0.0;  // 0,0 = automatic

    std::vector<double> masses{0.5, 1.0, 2.0};  // sweep

    // tolerance overrides for gauge-check and report
    double tol_fidelity = 1e-6;
    double tol_phase = 1e-5;
    double tol_method_agree = 1e-10;
    double tol_c3 = 1e-3;

    /// The time grid in effect: the explicit list, or the [t_min, t_max]
    /// linspace, defaulting to [0.1, 1.0] sqrt(2d/g).
    std::vector<double> resolve_times() const {
        if (!times.empty()) return times;
        double lo, hi;
        if (t_min && t_max) {
            lo = *t_min;
            hi = *t_max;
        } else {
            if (!(params.g > 0))
                throw invalid_parameter(
                    "config: need explicit times (or t_min/t_max) when g = 0");
            const double t_fall = std::sqrt(2.0 * d / params.g);
            lo = t_min.value_or(0.1 * t_fall);
            hi = t_max.value_or(t_fall);
        }
        if (!(hi > lo) || !(lo > 0))
            throw invalid_parameter("config: need 0 < t_min < t_max");
        std::vector<double> out(t_samples);
        for (std::size_t k = 0; k < t_samples; ++k)
            out[k] = lo + (hi - lo) * static_cast<double>(k) /
                              static_cast<double>(t_samples - 1);
        return out;
    }

    double resolve_delta_h() const { return delta_h.value_or(d); }
    double resolve_sigma() const { return sigma.value_or(d / 50.0); }
};

struct ConfigError {
    int line = 0;
    std::string message;
};

struct ParseResult {
    RunConfig config;
    std::vector<ConfigError> errors;
    bool ok() const { return errors.empty(); }
};

namespace detail {

inline bool parse_double_list(std::string_view v, std::vector<double>& out) {
    out.clear();
    for (auto part : split(v, ',')) {
        const auto x = parse_double(part);
        if (!x) return false;
        out.push_back(*x);
    }
    return !out.empty();
}

}  // namespace detail

/// Parses key=value text: '#' starts a comment, unknown keys are rejected,
/// and every error is reported with its line number rather than only the
/// first one.
inline ParseResult parse_config(std::string_view text) {
    ParseResult result;
    RunConfig& cfg = result.config;
    auto fail = [&](int line, const std::string& msg) {
        result.errors.push_back({line, msg});
    };

    struct Entry {
        int line;
        std::string key;
        std::string value;
    };
    std::vector<Entry> entries;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(line_no, "expected key=value");
            continue;
        }
        entries.push_back({line_no, std::string(trim(line.substr(0, eq))),
                           std::string(trim(line.substr(eq + 1)))});
    }

    // preset first, explicit keys override it in file order
    for (const auto& e : entries) {
        if (e.key != "preset") continue;
        const auto p = find_preset(e.value);
        if (!p)
            fail(e.line, "unknown preset '" + e.value + "'");
        else
            cfg.params = *p;
    }

    auto number = [&](const Entry& e) -> std::optional<double> {
        const auto v = parse_double(e.value);
        if (!v || !std::isfinite(*v)) {
            fail(e.line, "key '" + e.key + "': unparsable number '" + e.value + "'");
            return std::nullopt;
        }
        return v;
    };
    auto positive = [&](const Entry& e, const char* what) -> std::optional<double> {
        const auto v = number(e);
        if (v && !(*v > 0)) {
            fail(e.line, std::string("key '") + e.key + "' violates " + what);
            return std::nullopt;
        }
        return v;
    };
    auto non_negative = [&](const Entry& e, const char* what) -> std::optional<double> {
        const auto v = number(e);
        if (v && *v < 0) {
            fail(e.line, std::string("key '") + e.key + "' violates " + what);
            return std::nullopt;
        }
        return v;
    };

    for (const auto& e : entries) {
        const std::string& k = e.key;
        if (k == "preset") {
            continue;  // handled above
        } else if (k == "m") {
            if (auto v = positive(e, "m > 0")) cfg.params.m = *v;
        } else if (k == "g") {
            if (auto v = non_negative(e, "g >= 0")) cfg.params.g = *v;
        } else if (k == "hbar") {
            if (auto v = positive(e, "hbar > 0")) cfg.params.hbar = *v;
        } else if (k == "c") {
            if (auto v = positive(e, "c > 0")) cfg.params.c = *v;
        } else if (k == "G") {
            if (auto v = non_negative(e, "G >= 0")) cfg.params.G = *v;
        } else if (k == "M") {
            if (auto v = non_negative(e, "M >= 0")) cfg.params.M = *v;
        } else if (k == "d") {
            if (auto v = positive(e, "d > 0")) cfg.d = *v;
        } else if (k == "delta_h") {
            if (auto v = number(e)) cfg.delta_h = *v;
        } else if (k == "x") {
            if (auto v = number(e)) cfg.x = *v;
        } else if (k == "sigma") {
            if (auto v = positive(e, "sigma > 0")) cfg.sigma = *v;
        } else if (k == "a") {
            if (auto v = non_negative(e, "a >= 0")) cfg.a = *v;
        } else if (k == "tau") {
            if (auto v = number(e)) cfg.tau = *v;
        } else if (k == "t") {
            if (auto v = positive(e, "t > 0")) cfg.t = *v;
        } else if (k == "x0") {
            if (auto v = number(e)) cfg.x0 = *v;
        } else if (k == "p0") {
            if (auto v = number(e)) cfg.p0 = *v;
        } else if (k == "t_min") {
            if (auto v = positive(e, "t_min > 0")) cfg.t_min = *v;
        } else if (k == "t_max") {
            if (auto v = positive(e, "t_max > 0")) cfg.t_max = *v;
        } else if (k == "t_samples") {
            const auto v = parse_int(e.value);
            if (!v || *v < 2 || *v > 100000)
                fail(e.line, "key 't_samples' must be an integer >= 2");
            else
                cfg.t_samples = static_cast<std::size_t>(*v);
        } else if (k == "times") {
            if (!detail::parse_double_list(e.value, cfg.times)) {
                fail(e.line, "key 'times': unparsable number list");
            } else {
                double prev = 0.0;
                for (double tv : cfg.times) {
                    if (!(tv > prev)) {
                        fail(e.line,
                             "key 'times' violates: positive, strictly increasing");
                        break;
                    }
                    prev = tv;
                }
            }
        } else if (k == "method") {
            const auto m = parse_method(e.value);
            if (!m)
                fail(e.line, "key 'method' must be analytic|quadrature|wavepacket");
            else
                cfg.method = *m;
        } else if (k == "n") {
            const auto v = parse_int(e.value);
            if (!v || *v < 16 || !is_power_of_two(static_cast<std::size_t>(*v)))
                fail(e.line, "key 'n' violates: power of two >= 16");
            else
                cfg.n = static_cast<std::size_t>(*v);
        } else if (k == "x_min") {
            if (auto v = number(e)) cfg.x_min = *v;
        } else if (k == "x_max") {
            if (auto v = number(e)) cfg.x_max = *v;
        } else if (k == "masses") {
            if (!detail::parse_double_list(e.value, cfg.masses))
                fail(e.line, "key 'masses': unparsable number list");
            else
                for (double mv : cfg.masses)
                    if (!(mv > 0)) {
                        fail(e.line, "key 'masses' violates m > 0");
                        break;
                    }
        } else if (k == "tol_fidelity") {
            if (auto v = positive(e, "tol_fidelity > 0")) cfg.tol_fidelity = *v;
        } else if (k == "tol_phase") {
            if (auto v = positive(e, "tol_phase > 0")) cfg.tol_phase = *v;
        } else if (k == "tol_method_agree") {
            if (auto v = positive(e, "tol_method_agree > 0")) cfg.tol_method_agree = *v;
        } else if (k == "tol_c3") {
            if (auto v = positive(e, "tol_c3 > 0")) cfg.tol_c3 = *v;
        } else {
            fail(e.line, "unknown key '" + k + "'");
        }
    }

    if (result.ok()) {
        try {
            cfg.params.validate();
        } catch (const error& err) {
            fail(0, err.what());
        }
    }
    return result;
}

}  // namespace gravphase

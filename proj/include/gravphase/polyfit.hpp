#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "gravphase/errors.hpp"

namespace gravphase {

/// Least-squares polynomial fit y = sum_k c_k t^k, degree <= 3.
/// The abscissa is centered and scaled to [-1, 1] before the solve, so the
/// design stays well conditioned; reported coefficients are back-transformed
/// to physical t powers. Solved by Householder QR on the tall design matrix.
struct PolyFit {
    std::array<double, 4> c{};   // c[k] multiplies t^k; zero above the degree
    double rms_residual = 0.0;   // in the units of y
    double condition = 0.0;      // |R| diagonal ratio of the scaled design
    int degree = 3;
};

inline PolyFit poly_fit(std::span<const double> t, std::span<const double> y,
                        int degree = 3) {
    const std::size_t m = t.size();
    if (degree < 0 || degree > 3)
        throw invalid_parameter("poly_fit: degree must be in [0, 3]");
    const std::size_t nc = static_cast<std::size_t>(degree) + 1;
    if (y.size() != m) throw invalid_parameter("poly_fit: size mismatch");
    if (m < nc + 1) throw invalid_parameter("poly_fit: too few samples");

    // center/scale the abscissa
    double t_lo = t[0], t_hi = t[0];
    for (double v : t) {
        t_lo = std::min(t_lo, v);
        t_hi = std::max(t_hi, v);
    }
    const double mu = 0.5 * (t_lo + t_hi);
    const double scale = 0.5 * (t_hi - t_lo) > 0 ? 0.5 * (t_hi - t_lo) : 1.0;

    // column-major design matrix in powers of tau = (t - mu)/scale
    std::vector<double> A(m * nc);
    for (std::size_t i = 0; i < m; ++i) {
        const double tau = (t[i] - mu) / scale;
        double pw = 1.0;
        for (std::size_t j = 0; j < nc; ++j) {
            A[j * m + i] = pw;
            pw *= tau;
        }
    }
    std::vector<double> rhs(y.begin(), y.end());

    // Householder QR (JAMA-style, reflectors kept in place, |R| diag aside)
    std::vector<double> rdiag(nc, 0.0);
    for (std::size_t k = 0; k < nc; ++k) {
        double* ak = A.data() + k * m;
        double nrm = 0;
        for (std::size_t i = k; i < m; ++i) nrm = std::hypot(nrm, ak[i]);
        if (nrm != 0) {
            if (ak[k] < 0) nrm = -nrm;
            for (std::size_t i = k; i < m; ++i) ak[i] /= nrm;
            ak[k] += 1.0;
            for (std::size_t j = k + 1; j < nc; ++j) {
                double* aj = A.data() + j * m;
                double s = 0;
                for (std::size_t i = k; i < m; ++i) s += ak[i] * aj[i];
                s = -s / ak[k];
                for (std::size_t i = k; i < m; ++i) aj[i] += s * ak[i];
            }
            double s = 0;
            for (std::size_t i = k; i < m; ++i) s += ak[i] * rhs[i];
            s = -s / ak[k];
            for (std::size_t i = k; i < m; ++i) rhs[i] += s * ak[i];
        }
        rdiag[k] = -nrm;
    }

    double r_max = 0, r_min = 0;
    for (std::size_t k = 0; k < nc; ++k) {
        const double r = std::abs(rdiag[k]);
        r_max = std::max(r_max, r);
        r_min = k == 0 ? r : std::min(r_min, r);
    }
    if (r_min <= 1e-13 * r_max)
        throw numerical_error(
            "poly_fit: rank-deficient design (time span too narrow)");

    std::vector<double> beta(nc, 0.0);
    for (std::size_t k = nc; k-- > 0;) {
        double s = rhs[k];
        for (std::size_t j = k + 1; j < nc; ++j) s -= A[j * m + k] * beta[j];
        beta[k] = s / rdiag[k];
    }

    PolyFit fit;
    fit.degree = degree;
    fit.condition = r_max / r_min;

    // residuals against the scaled-basis model
    double ss = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double tau = (t[i] - mu) / scale;
        double pred = 0, pw = 1.0;
        for (std::size_t j = 0; j < nc; ++j) {
            pred += beta[j] * pw;
            pw *= tau;
        }
        const double r = y[i] - pred;
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(m));

    // back-transform: sum_j beta_j ((t - mu)/scale)^j  ->  sum_k c_k t^k
    // binomial expansion of each power
    std::array<double, 4> c{};
    for (std::size_t j = 0; j < nc; ++j) {
        const double bj = beta[j] / std::pow(scale, static_cast<double>(j));
        // (t - mu)^j = sum_k C(j,k) t^k (-mu)^(j-k)
        static constexpr int binom[4][4] = {
            {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
        for (std::size_t k = 0; k <= j; ++k)
            c[k] += bj * binom[j][k] * std::pow(-mu, static_cast<double>(j - k));
    }
    fit.c = c;
    return fit;
}

}  // namespace gravphase

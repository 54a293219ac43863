#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "gravphase/errors.hpp"

namespace gravphase {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Radix-2 complex FFT with precomputed twiddles and bit-reversal table.
/// One plan per transform size; plans own no global state, so independent
/// runs can each hold their own and execute concurrently.
/// Forward transform is unnormalized, inverse carries the 1/n factor
/// (exact for power-of-two n).
class FftPlan {
public:
    explicit FftPlan(std::size_t n) : n_(n) {
        if (!is_power_of_two(n) || n < 2)
            throw invalid_parameter("FftPlan: size must be a power of two >= 2");
        rev_.resize(n);
        std::size_t log2n = 0;
        while ((std::size_t{1} << log2n) < n) ++log2n;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (std::size_t b = 0; b < log2n; ++b)
                if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
            rev_[i] = r;
        }
        tw_.resize(n / 2);
        for (std::size_t j = 0; j < n / 2; ++j) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(j) /
                               static_cast<double>(n);
            tw_[j] = {std::cos(ang), std::sin(ang)};
        }
    }

    std::size_t size() const { return n_; }

    void forward(std::complex<double>* a) const { transform(a, false); }

    void inverse(std::complex<double>* a) const {
        transform(a, true);
        const double s = 1.0 / static_cast<double>(n_);
        for (std::size_t i = 0; i < n_; ++i) a[i] *= s;
    }

private:
    void transform(std::complex<double>* a, bool conj_tw) const {
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t r = rev_[i];
            if (i < r) std::swap(a[i], a[r]);
        }
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t half = len >> 1;
            const std::size_t stride = n_ / len;
            for (std::size_t base = 0; base < n_; base += len) {
                for (std::size_t j = 0; j < half; ++j) {
                    const std::complex<double>& w = tw_[j * stride];
                    const double wr = w.real();
                    const double wi = conj_tw ? -w.imag() : w.imag();
                    std::complex<double>& lo = a[base + j];
                    std::complex<double>& hi = a[base + j + half];
                    const double hr = hi.real(), hg = hi.imag();
                    const double tr = wr * hr - wi * hg;
                    const double ti = wr * hg + wi * hr;
                    const double lr = lo.real(), lg = lo.imag();
                    hi = {lr - tr, lg - ti};
                    lo = {lr + tr, lg + ti};
                }
            }
        }
    }

    std::size_t n_;
    std::vector<std::size_t> rev_;
    std::vector<std::complex<double>> tw_;
};

}  // namespace gravphase

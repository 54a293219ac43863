#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "gravphase/errors.hpp"
#include "gravphase/qdynamics.hpp"

namespace gravphase {

// Binary wavefunction dump, little-endian:
//   u64 n, f64 x_min, f64 x_max, f64 t, u8 frame (0 = freely-falling,
//   1 = gravitational), then n interleaved (f64 re, f64 im) pairs.
// Used for debugging and golden tests; not a long-term archive format.

namespace detail {
template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}
}  // namespace detail

inline void save_wavefunction(const Wavefunction& psi, std::ostream& os) {
    detail::put<std::uint64_t>(os, psi.grid.n);
    detail::put<double>(os, psi.grid.x_min);
    detail::put<double>(os, psi.grid.x_max);
    detail::put<double>(os, psi.t);
    detail::put<std::uint8_t>(os, psi.frame == Frame::gravitational ? 1 : 0);
    for (const auto& a : psi.amps) {
        detail::put<double>(os, a.real());
        detail::put<double>(os, a.imag());
    }
    if (!os) throw io_error("save_wavefunction: write failed");
}

inline void save_wavefunction(const Wavefunction& psi, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("save_wavefunction: cannot open " + path);
    save_wavefunction(psi, os);
}

inline Wavefunction load_wavefunction(std::istream& is) {
    Wavefunction psi;
    psi.grid.n = static_cast<std::size_t>(detail::get<std::uint64_t>(is));
    psi.grid.x_min = detail::get<double>(is);
    psi.grid.x_max = detail::get<double>(is);
    psi.t = detail::get<double>(is);
    psi.frame = detail::get<std::uint8_t>(is) ? Frame::gravitational
                                              : Frame::freely_falling;
    if (!is) throw error("load_wavefunction: truncated header");
    psi.grid.validate();
    psi.amps.resize(psi.grid.n);
    for (auto& a : psi.amps) {
        const double re = detail::get<double>(is);
        const double im = detail::get<double>(is);
        a = {re, im};
    }
    if (!is) throw error("load_wavefunction: truncated amplitudes");
    return psi;
}

inline Wavefunction load_wavefunction(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("load_wavefunction: cannot open " + path);
    return load_wavefunction(is);
}

}  // namespace gravphase

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "phono/errors.hpp"

namespace phono {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

namespace detail {

// Iterative radix-2 Cooley-Tukey. Length must be a power of two.
inline void fft_radix2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n <= 1) return;

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    const double pi = 3.14159265358979323846;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * pi / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

// Bluestein chirp-z: DFT of arbitrary length via one pow2 convolution.
inline void fft_bluestein(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    const double pi = 3.14159265358979323846;
    const double sgn = inverse ? 1.0 : -1.0;

    // chirp[k] = exp(sgn*i*pi*k^2/n); k^2 taken mod 2n to keep the angle small.
    std::vector<cplx> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint64_t k2 = (static_cast<std::uint64_t>(k) * k) % (2 * n);
        const double ang = sgn * pi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = cplx(std::cos(ang), std::sin(ang));
    }

    const std::size_t m = next_pow2(2 * n - 1);
    std::vector<cplx> f(m, cplx(0.0, 0.0));
    std::vector<cplx> g(m, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) f[k] = a[k] * chirp[k];
    for (std::size_t k = 0; k < n; ++k) {
        g[k] = std::conj(chirp[k]);
        if (k != 0) g[m - k] = std::conj(chirp[k]);
    }
    fft_radix2(f, false);
    fft_radix2(g, false);
    for (std::size_t k = 0; k < m; ++k) f[k] *= g[k];
    fft_radix2(f, true);
    for (std::size_t k = 0; k < n; ++k) a[k] = f[k] * chirp[k];
    if (inverse) {
        const double invn = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= invn;
    }
}

} // namespace detail

// In-place DFT of arbitrary length. inverse=true applies the 1/N factor.
inline void fft(std::vector<cplx>& a, bool inverse = false) {
    if (is_pow2(a.size()))
        detail::fft_radix2(a, inverse);
    else
        detail::fft_bluestein(a, inverse);
}

inline void ifft(std::vector<cplx>& a) { fft(a, true); }

// One-sided |DFT|^2 of a (windowed) frame zero-padded to n_fft.
// Returns n_fft/2 + 1 nonnegative bins.
inline std::vector<double> power_spectrum(std::span<const double> frame, std::size_t n_fft) {
    if (!is_pow2(n_fft)) throw BadBand("n_fft must be a power of two");
    if (n_fft < frame.size()) throw BadBand("n_fft smaller than frame length");
    std::vector<cplx> buf(n_fft, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < frame.size(); ++i) buf[i] = cplx(frame[i], 0.0);
    detail::fft_radix2(buf, false);
    std::vector<double> out(n_fft / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::norm(buf[k]);
    return out;
}

} // namespace phono

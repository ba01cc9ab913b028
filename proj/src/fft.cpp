#include "fiberspin/fft.hpp"

#include <numbers>
#include <stdexcept>

namespace fiberspin::fft {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace {

void transform(std::span<std::complex<double>> a, double sign) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n)) throw std::invalid_argument("fft: size must be a power of two");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

}  // namespace

void fft_inplace(std::span<std::complex<double>> data) { transform(data, -1.0); }

void ifft_inplace(std::span<std::complex<double>> data) {
    transform(data, 1.0);
    const double inv = 1.0 / static_cast<double>(data.size());
    for (auto& x : data) x *= inv;
}

std::vector<double> angular_frequencies(std::size_t n, double dtau) {
    std::vector<double> w(n);
    const double step = 2.0 * std::numbers::pi / (static_cast<double>(n) * dtau);
    for (std::size_t m = 0; m < n; ++m) {
        const auto half = static_cast<std::ptrdiff_t>(n / 2);
        const auto ms = static_cast<std::ptrdiff_t>(m);
        w[m] = step * static_cast<double>(ms <= half ? ms : ms - static_cast<std::ptrdiff_t>(n));
    }
    return w;
}

}  // namespace fiberspin::fft

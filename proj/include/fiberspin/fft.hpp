// Radix-2 complex FFT for power-of-two grids. Forward transform uses the
// e^{-2 pi i nm/N} kernel; the inverse applies the conjugate kernel and
// the 1/N factor, so ifft(fft(x)) == x. Frequencies follow the signed
// layout omega_m = 2 pi m~ / (N dtau) with m~ = m for m <= N/2 and m - N
// otherwise.

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace fiberspin::fft {

bool is_power_of_two(std::size_t n);

void fft_inplace(std::span<std::complex<double>> data);
void ifft_inplace(std::span<std::complex<double>> data);

/// Signed angular-frequency grid for sample spacing dtau.
std::vector<double> angular_frequencies(std::size_t n, double dtau);

}  // namespace fiberspin::fft

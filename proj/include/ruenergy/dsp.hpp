#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ruenergy {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

namespace dsp {

/// In-place unnormalized DFT. Forward uses exp(-j2pi kn/N). Any length.
void fft_forward(std::span<cplx> data);
void fft_inverse(std::span<cplx> data);

/// Unitary transforms (1/sqrt(N) scaling).
CVec dft_unitary(std::span<const cplx> x);
CVec idft_unitary(std::span<const cplx> x);

double energy(std::span<const cplx> x);
double mean_power(std::span<const cplx> x);

/// Centered-grid index (DC at n/2) to FFT bin and back.
inline std::size_t centered_to_bin(std::size_t c, std::size_t n) { return (c + n - n / 2) % n; }
inline std::size_t bin_to_centered(std::size_t k, std::size_t n) { return (k + n / 2) % n; }

} // namespace dsp
} // namespace ruenergy

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace mcsense {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

// Unnormalized forward DFT: X(k) = sum_n x(n) exp(-j2pi kn/N).
ComplexVector fft(std::span<const Complex> x);
// Inverse DFT with the 1/N factor.
ComplexVector ifft(std::span<const Complex> spectrum);

}  // namespace mcsense

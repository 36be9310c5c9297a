#include "mcsense/fft.hpp"

#include <unsupported/Eigen/FFT>

namespace mcsense {

namespace {

// kissfft caches twiddles per size inside the object; one per thread keeps
// the OpenMP trial loop free of shared state.
Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

}  // namespace

ComplexVector fft(std::span<const Complex> x) {
  if (x.size() <= 1) return ComplexVector(x.begin(), x.end());  // kissfft faults on n = 1
  ComplexVector out(x.size());
  engine().fwd(out.data(), x.data(), static_cast<Eigen::Index>(x.size()));
  return out;
}

ComplexVector ifft(std::span<const Complex> spectrum) {
  if (spectrum.size() <= 1) return ComplexVector(spectrum.begin(), spectrum.end());
  ComplexVector out(spectrum.size());
  engine().inv(out.data(), spectrum.data(), static_cast<Eigen::Index>(spectrum.size()));
  return out;
}

}  // namespace mcsense

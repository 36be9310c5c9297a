#include "mcsense/siggen.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "mcsense/error.hpp"
#include "mcsense/rng.hpp"

namespace mcsense {

namespace {

void check_spec(const MultibandSignalSpec& spec) {
  const auto L = static_cast<std::size_t>(spec.plan.channels());
  if (spec.n_samples == 0 || spec.n_samples % L != 0) {
    throw Error(ErrorKind::InvalidSpec, "n_samples must be a positive multiple of L");
  }
  if (spec.active.size() > spec.plan.max_occupied()) {
    throw Error(ErrorKind::InvalidSpec, "active set larger than N_max");
  }
  if (!spec.active.empty() && spec.active.indices().back() >= spec.plan.channels()) {
    throw Error(ErrorKind::IndexOutOfRange, "active channel outside the plan");
  }
  if (!(spec.noise_power >= 0.0) || !std::isfinite(spec.noise_power)) {
    throw Error(ErrorKind::InvalidSpec, "noise power must be finite and >= 0");
  }
  if (spec.noise_power > 0.0 && !std::isfinite(spec.snr_db)) {
    throw Error(ErrorKind::InvalidSpec, "infinite SNR requires noise_power = 0");
  }
}

Complex complex_normal(std::mt19937_64& gen, std::normal_distribution<double>& unit) {
  const double re = unit(gen);
  const double im = unit(gen);
  return {re, im};
}

ComplexVector signal_spectrum(const MultibandSignalSpec& spec) {
  const std::size_t n = spec.n_samples;
  const std::size_t width = n / spec.plan.channels();
  const double L = spec.plan.channels();
  const double band_target = spec.noise_power > 0.0
                                 ? std::pow(10.0, spec.snr_db / 10.0) * spec.noise_power / L
                                 : 1.0 / L;

  ComplexVector spectrum(n, Complex{0.0, 0.0});
  std::normal_distribution<double> unit(0.0, 1.0);
  for (int r : spec.active.indices()) {
    auto gen = make_stream(spec.seed, kChannelStreamBase + static_cast<std::uint64_t>(r));
    const std::size_t first = static_cast<std::size_t>(r) * width;
    double energy = 0.0;
    for (std::size_t k = 0; k < width; ++k) {
      spectrum[first + k] = complex_normal(gen, unit);
      energy += std::norm(spectrum[first + k]);
    }
    // band power = energy / n^2 after the 1/n inverse transform
    const double scale = std::sqrt(band_target * static_cast<double>(n) * n / energy);
    for (std::size_t k = 0; k < width; ++k) spectrum[first + k] *= scale;
  }
  return spectrum;
}

NyquistRecord synthesize(const MultibandSignalSpec& spec, bool with_noise) {
  check_spec(spec);
  NyquistRecord record{ifft(signal_spectrum(spec)), spec.plan};
  if (with_noise && spec.noise_power > 0.0) {
    auto gen = make_stream(spec.seed, kNoiseStream);
    std::normal_distribution<double> half(0.0, std::sqrt(spec.noise_power / 2.0));
    for (auto& x : record.samples) x += complex_normal(gen, half);
  }
  return record;
}

}  // namespace

NyquistRecord generate(const MultibandSignalSpec& spec) { return synthesize(spec, true); }

NyquistRecord generate_signal(const MultibandSignalSpec& spec) {
  return synthesize(spec, false);
}

double band_power(const NyquistRecord& record, int channel) {
  const int L = record.plan.channels();
  if (channel < 0 || channel >= L) {
    throw Error(ErrorKind::IndexOutOfRange, "channel index outside [0, L-1]");
  }
  const std::size_t n = record.samples.size();
  if (n == 0 || n % static_cast<std::size_t>(L) != 0) {
    throw Error(ErrorKind::LengthNotMultipleOfL, "record length must be a multiple of L");
  }
  const auto spectrum = fft(record.samples);
  const std::size_t width = n / L;
  double energy = 0.0;
  for (std::size_t k = channel * width; k < (channel + 1) * width; ++k) {
    energy += std::norm(spectrum[k]);
  }
  return energy / (static_cast<double>(n) * n);
}

std::vector<PsdPoint> empirical_psd(const NyquistRecord& record, std::size_t n_fft) {
  if (n_fft == 0 || n_fft > record.samples.size()) {
    throw Error(ErrorKind::InvalidSpec, "n_fft must lie in [1, record length]");
  }
  std::vector<double> window(n_fft, 1.0);
  if (n_fft > 1) {
    for (std::size_t i = 0; i < n_fft; ++i) {
      window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n_fft);
    }
  }
  double window_energy = 0.0;
  for (double w : window) window_energy += w * w;

  const std::size_t hop = std::max<std::size_t>(1, n_fft / 2);
  std::vector<double> accum(n_fft, 0.0);
  std::size_t segments = 0;
  ComplexVector segment(n_fft);
  for (std::size_t start = 0; start + n_fft <= record.samples.size(); start += hop) {
    for (std::size_t i = 0; i < n_fft; ++i) segment[i] = record.samples[start + i] * window[i];
    const auto spectrum = fft(segment);
    for (std::size_t k = 0; k < n_fft; ++k) accum[k] += std::norm(spectrum[k]);
    ++segments;
  }

  std::vector<PsdPoint> psd(n_fft);
  const double bin_hz = record.plan.total_bandwidth_hz() / n_fft;
  for (std::size_t k = 0; k < n_fft; ++k) {
    psd[k] = {k * bin_hz, accum[k] / (segments * window_energy)};
  }
  return psd;
}

}  // namespace mcsense

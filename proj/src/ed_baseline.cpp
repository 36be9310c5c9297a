#include "mcsense/ed_baseline.hpp"

#include <cmath>
#include <numbers>
#include <span>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "mcsense/error.hpp"

namespace mcsense {

void validate(const EdConfig& cfg) {
  if (!(cfg.p_fa > 0.0 && cfg.p_fa < 1.0)) {
    throw Error(ErrorKind::InvalidSpec, "P_fa must lie in (0, 1)");
  }
  if (cfg.samples < 2) throw Error(ErrorKind::InvalidSpec, "ED needs M >= 2");
  if (!(cfg.sigma2 > 0.0)) throw Error(ErrorKind::InvalidSpec, "sigma2 must be positive");
}

double q_function(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double inverse_q(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw Error(ErrorKind::OutOfDomain, "inverse Q-function needs 0 < prob < 1");
  }
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * prob);
}

double ed_threshold(const EdConfig& cfg) {
  validate(cfg);
  return cfg.sigma2 * (1.0 + inverse_q(cfg.p_fa) / std::sqrt(cfg.samples / 2.0));
}

std::vector<ComplexVector> channelize(const NyquistRecord& record) {
  const int L = record.plan.channels();
  const std::size_t n = record.samples.size();
  if (n == 0 || n % static_cast<std::size_t>(L) != 0) {
    throw Error(ErrorKind::LengthMismatch,
                "record length " + std::to_string(n) + " is not a multiple of L");
  }
  const std::size_t width = n / L;
  const auto spectrum = fft(record.samples);
  const double gain = 1.0 / std::sqrt(static_cast<double>(L));

  std::vector<ComplexVector> bands;
  bands.reserve(L);
  for (int r = 0; r < L; ++r) {
    auto band = ifft(std::span<const Complex>(spectrum).subspan(r * width, width));
    for (auto& x : band) x *= gain;
    bands.push_back(std::move(band));
  }
  return bands;
}

ActiveChannelSet EdDecision::flagged() const {
  std::vector<int> idx;
  for (std::size_t r = 0; r < occupied.size(); ++r) {
    if (occupied[r]) idx.push_back(static_cast<int>(r));
  }
  return ActiveChannelSet(std::move(idx), static_cast<int>(occupied.size()));
}

EdDecision energy_detect(const NyquistRecord& record, const EdConfig& cfg) {
  const double eta = ed_threshold(cfg);
  const auto bands = channelize(record);
  if (bands.front().size() < static_cast<std::size_t>(cfg.samples)) {
    throw Error(ErrorKind::InsufficientSamples,
                "channel has " + std::to_string(bands.front().size()) + " samples, need " +
                    std::to_string(cfg.samples));
  }
  EdDecision out;
  out.threshold = eta;
  out.statistics.reserve(bands.size());
  out.occupied.reserve(bands.size());
  for (const auto& band : bands) {
    double energy = 0.0;
    for (int m = 0; m < cfg.samples; ++m) energy += std::norm(band[m]);
    const double stat = energy / cfg.samples;
    out.statistics.push_back(stat);
    out.occupied.push_back(stat > eta);
  }
  return out;
}

}  // namespace mcsense

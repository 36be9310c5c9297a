#include "mcsense/multicoset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "mcsense/error.hpp"
#include "mcsense/rng.hpp"

namespace mcsense {

CosetPattern::CosetPattern(int channels, std::vector<int> cosets,
                           std::optional<std::uint64_t> seed)
    : channels_(channels), cosets_(std::move(cosets)), seed_(seed) {
  if (channels_ < 1 || cosets_.empty() || size() > channels_) {
    throw Error(ErrorKind::InvalidPattern, "coset pattern needs 1 <= p <= L");
  }
  std::vector<bool> seen(channels_, false);
  for (int c : cosets_) {
    if (c < 0 || c >= channels_) {
      throw Error(ErrorKind::InvalidPattern, "coset " + std::to_string(c) + " outside [0, L-1]");
    }
    if (seen[c]) {
      throw Error(ErrorKind::InvalidPattern, "coset " + std::to_string(c) + " repeated");
    }
    seen[c] = true;
  }
}

CosetPattern random_pattern(int channels, int p, std::uint64_t seed) {
  if (channels < 1 || p < 1 || p > channels) {
    throw Error(ErrorKind::InvalidPattern, "random pattern needs 1 <= p <= L");
  }
  std::vector<int> pool(channels);
  std::iota(pool.begin(), pool.end(), 0);
  auto gen = make_stream(seed, kPatternStream);
  // partial Fisher-Yates
  for (int i = 0; i < p; ++i) {
    std::uniform_int_distribution<int> pick(i, channels - 1);
    std::swap(pool[i], pool[pick(gen)]);
  }
  pool.resize(p);
  std::sort(pool.begin(), pool.end());
  return CosetPattern(channels, std::move(pool), seed);
}

double sub_nyquist_factor(const CosetPattern& pattern) {
  return static_cast<double>(pattern.size()) / pattern.channels();
}

double average_rate_hz(const CosetPattern& pattern, const ChannelPlan& plan) {
  return pattern.size() * plan.channel_bandwidth_hz();
}

std::vector<ComplexVector> sample(std::span<const Complex> record, const CosetPattern& pattern) {
  const auto L = static_cast<std::size_t>(pattern.channels());
  if (record.empty() || record.size() % L != 0) {
    throw Error(ErrorKind::LengthNotMultipleOfL,
                "record length " + std::to_string(record.size()) + " is not a multiple of L");
  }
  const std::size_t M = record.size() / L;
  std::vector<ComplexVector> out;
  out.reserve(pattern.size());
  for (int c : pattern.cosets()) {
    ComplexVector seq(M);
    for (std::size_t m = 0; m < M; ++m) seq[m] = record[m * L + c];
    out.push_back(std::move(seq));
  }
  return out;
}

std::vector<ComplexVector> sample(const NyquistRecord& record, const CosetPattern& pattern) {
  return sample(std::span<const Complex>(record.samples), pattern);
}

ComplexVector fractional_shift(std::span<const Complex> sequence, int coset, int channels) {
  if (coset == 0 || sequence.empty()) return {sequence.begin(), sequence.end()};
  const std::size_t M = sequence.size();
  auto spectrum = fft(sequence);
  const double step = -2.0 * std::numbers::pi * coset / (static_cast<double>(channels) * M);
  for (std::size_t k = 1; k < M; ++k) spectrum[k] *= std::polar(1.0, step * k);
  return ifft(spectrum);
}

SnapshotMatrix snapshots(std::span<const Complex> record, const CosetPattern& pattern) {
  const auto cosets = sample(record, pattern);
  const auto M = static_cast<Eigen::Index>(cosets.front().size());
  SnapshotMatrix out{Eigen::MatrixXcd(pattern.size(), M), pattern};
  for (int i = 0; i < pattern.size(); ++i) {
    const auto shifted = fractional_shift(cosets[i], pattern.cosets()[i], pattern.channels());
    out.entries.row(i) = Eigen::Map<const Eigen::RowVectorXcd>(shifted.data(), M);
  }
  return out;
}

SnapshotMatrix snapshots(const NyquistRecord& record, const CosetPattern& pattern) {
  return snapshots(std::span<const Complex>(record.samples), pattern);
}

}  // namespace mcsense

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mcsense/fft.hpp"
#include "mcsense/siggen.hpp"

namespace mcsense {

/// Multicoset sampling description: p distinct offsets c_i in [0, L-1].
class CosetPattern {
 public:
  /// Throws InvalidPattern on repeated or out-of-range offsets, or p > L.
  CosetPattern(int channels, std::vector<int> cosets,
               std::optional<std::uint64_t> seed = std::nullopt);

  int channels() const noexcept { return channels_; }
  int size() const noexcept { return static_cast<int>(cosets_.size()); }
  const std::vector<int>& cosets() const noexcept { return cosets_; }
  std::optional<std::uint64_t> seed() const noexcept { return seed_; }

  bool operator==(const CosetPattern& other) const {
    return channels_ == other.channels_ && cosets_ == other.cosets_;
  }

 private:
  int channels_;
  std::vector<int> cosets_;
  std::optional<std::uint64_t> seed_;
};

/// p offsets drawn uniformly without replacement from [0, L-1], sorted.
CosetPattern random_pattern(int channels, int p, std::uint64_t seed);

/// alpha = p / L.
double sub_nyquist_factor(const CosetPattern& pattern);
/// f_avg = alpha * B_max.
double average_rate_hz(const CosetPattern& pattern, const ChannelPlan& plan);

/// Coset sequences x_i(m) = x[mL + c_i], m = 0 .. n/L - 1.
std::vector<ComplexVector> sample(std::span<const Complex> record, const CosetPattern& pattern);
std::vector<ComplexVector> sample(const NyquistRecord& record, const CosetPattern& pattern);

/// Circular fractional delay of a coset sequence by c/L samples:
/// X_d(k) = X(k) exp(-j2pi k c / (L M)), k = 0..M-1. This is the block form of
/// upsample-by-L, ideal [0, B] interpolation, delay by c, downsample-by-L.
ComplexVector fractional_shift(std::span<const Complex> sequence, int coset, int channels);

/// p x M matrix whose row i is the fractionally shifted coset sequence i.
struct SnapshotMatrix {
  Eigen::MatrixXcd entries;
  CosetPattern pattern;

  int snapshots() const noexcept { return static_cast<int>(entries.cols()); }
};

SnapshotMatrix snapshots(std::span<const Complex> record, const CosetPattern& pattern);
SnapshotMatrix snapshots(const NyquistRecord& record, const CosetPattern& pattern);

}  // namespace mcsense

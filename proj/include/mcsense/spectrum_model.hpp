#pragma once

#include <optional>
#include <vector>

namespace mcsense {

/// Equal-width segmentation of [0, B_max] into L channels, with the
/// occupancy bound N_max. Construct through validate_plan().
///
/// Frequencies inside the library are normalized to B_max = 1; the Hz
/// values here only matter at the configuration and reporting boundary.
class ChannelPlan {
 public:
  int channels() const noexcept { return channels_; }
  double channel_bandwidth_hz() const noexcept { return channel_bw_hz_; }
  double total_bandwidth_hz() const noexcept { return total_bw_hz_; }
  int max_occupied() const noexcept { return max_occupied_; }
  /// Omega_max = N_max / L.
  double max_occupancy() const noexcept {
    return static_cast<double>(max_occupied_) / channels_;
  }

  bool operator==(const ChannelPlan&) const = default;

 private:
  friend ChannelPlan validate_plan(int, double, int, std::optional<double>);
  ChannelPlan(int channels, double channel_bw_hz, int max_occupied)
      : channels_(channels),
        channel_bw_hz_(channel_bw_hz),
        total_bw_hz_(channels * channel_bw_hz),
        max_occupied_(max_occupied) {}

  int channels_;
  double channel_bw_hz_;
  double total_bw_hz_;
  int max_occupied_;
};

/// Checks the raw configuration values and returns a plan whose total
/// bandwidth is recomputed as L * B. A supplied total bandwidth must agree
/// with L * B to 1e-9 relative.
ChannelPlan validate_plan(int channels, double channel_bw_hz, int max_occupied,
                          std::optional<double> total_bw_hz = std::nullopt);

/// Landau lower bound on the average sampling rate: Omega_max * B_max.
double landau_minimum_rate(const ChannelPlan& plan);

/// Sorted, duplicate-free list of channel indices in [0, L-1].
class ActiveChannelSet {
 public:
  ActiveChannelSet() = default;
  /// Sorts the indices. Throws on duplicates or indices outside [0, channels-1].
  ActiveChannelSet(std::vector<int> indices, int channels);

  const std::vector<int>& indices() const noexcept { return indices_; }
  int size() const noexcept { return static_cast<int>(indices_.size()); }
  bool empty() const noexcept { return indices_.empty(); }
  bool contains(int channel) const;

  bool operator==(const ActiveChannelSet&) const = default;

 private:
  std::vector<int> indices_;
};

/// b^c = {0..L-1} minus b.
ActiveChannelSet complement(const ActiveChannelSet& set, const ChannelPlan& plan);

}  // namespace mcsense

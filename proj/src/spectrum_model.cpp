#include "mcsense/spectrum_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mcsense/error.hpp"

namespace mcsense {

ChannelPlan validate_plan(int channels, double channel_bw_hz, int max_occupied,
                          std::optional<double> total_bw_hz) {
  if (channels < 1 || !(channel_bw_hz > 0.0) || !std::isfinite(channel_bw_hz)) {
    throw Error(ErrorKind::InconsistentDimensions,
                "channel plan needs L >= 1 and a positive channel bandwidth");
  }
  const double total = channels * channel_bw_hz;
  if (total_bw_hz && std::abs(*total_bw_hz - total) > 1e-9 * total) {
    throw Error(ErrorKind::InconsistentDimensions,
                "total bandwidth " + std::to_string(*total_bw_hz) + " Hz != L*B = " +
                    std::to_string(total) + " Hz");
  }
  if (max_occupied < 1 || max_occupied > channels) {
    throw Error(ErrorKind::OccupancyOutOfRange,
                "N_max must lie in [1, L], got " + std::to_string(max_occupied));
  }
  return ChannelPlan(channels, channel_bw_hz, max_occupied);
}

double landau_minimum_rate(const ChannelPlan& plan) {
  // N_max * B is exact where Omega_max * B_max would round.
  return plan.max_occupied() * plan.channel_bandwidth_hz();
}

ActiveChannelSet::ActiveChannelSet(std::vector<int> indices, int channels)
    : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw Error(ErrorKind::InvalidSpec, "active channel set has duplicate indices");
  }
  if (!indices_.empty() && (indices_.front() < 0 || indices_.back() >= channels)) {
    throw Error(ErrorKind::IndexOutOfRange, "active channel index outside [0, L-1]");
  }
}

bool ActiveChannelSet::contains(int channel) const {
  return std::binary_search(indices_.begin(), indices_.end(), channel);
}

ActiveChannelSet complement(const ActiveChannelSet& set, const ChannelPlan& plan) {
  std::vector<int> rest;
  rest.reserve(plan.channels() - set.size());
  for (int r = 0; r < plan.channels(); ++r) {
    if (!set.contains(r)) rest.push_back(r);
  }
  return ActiveChannelSet(std::move(rest), plan.channels());
}

}  // namespace mcsense

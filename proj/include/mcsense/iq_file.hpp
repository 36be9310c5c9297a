#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "mcsense/siggen.hpp"

namespace mcsense {

/// JSON sidecar next to a cf32le capture.
struct IqSidecar {
  double sample_rate_hz = 0.0;
  std::size_t length = 0;  // complex samples
  std::string format = "cf32le";
};

/// "<data>.json"
std::filesystem::path sidecar_path_for(const std::filesystem::path& data);

/// Writes interleaved little-endian float32 I/Q pairs plus the sidecar.
/// Samples are rounded to float.
void write_iq(const NyquistRecord& record, const std::filesystem::path& data,
              const std::filesystem::path& sidecar);

IqSidecar read_sidecar(const std::filesystem::path& sidecar);

/// Reads a cf32le capture described by its sidecar. Throws BadFormat for an
/// unknown format, LengthMismatch when the file size disagrees with the
/// sidecar or the length is not a multiple of L, and RateMismatch when the
/// sample rate differs from the plan's B_max.
NyquistRecord ingest_iq(const std::filesystem::path& data, const std::filesystem::path& sidecar,
                        const ChannelPlan& plan);

}  // namespace mcsense

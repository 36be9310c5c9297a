#include "mcsense/iq_file.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "mcsense/error.hpp"

namespace mcsense {

namespace {

static_assert(sizeof(float) == 4);

std::uint32_t to_le(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
  }
  return v;
}

}  // namespace

std::filesystem::path sidecar_path_for(const std::filesystem::path& data) {
  auto p = data;
  p += ".json";
  return p;
}

void write_iq(const NyquistRecord& record, const std::filesystem::path& data,
              const std::filesystem::path& sidecar) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * record.samples.size());
  for (const auto& x : record.samples) {
    words.push_back(to_le(std::bit_cast<std::uint32_t>(static_cast<float>(x.real()))));
    words.push_back(to_le(std::bit_cast<std::uint32_t>(static_cast<float>(x.imag()))));
  }
  std::ofstream out(data, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + data.string());
  out.write(reinterpret_cast<const char*>(words.data()),
            static_cast<std::streamsize>(words.size() * sizeof(std::uint32_t)));

  nlohmann::json meta = {{"sample_rate_hz", record.plan.total_bandwidth_hz()},
                         {"length", record.samples.size()},
                         {"format", "cf32le"},
                         {"channels", record.plan.channels()}};
  std::ofstream side(sidecar);
  if (!side) throw Error(ErrorKind::Io, "cannot write " + sidecar.string());
  side << meta.dump(2) << "\n";
}

IqSidecar read_sidecar(const std::filesystem::path& sidecar) {
  std::ifstream in(sidecar);
  if (!in) throw Error(ErrorKind::Io, "cannot open sidecar " + sidecar.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    const auto doc = nlohmann::json::parse(buf.str());
    return {doc.at("sample_rate_hz").get<double>(), doc.at("length").get<std::size_t>(),
            doc.at("format").get<std::string>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadFormat, "sidecar " + sidecar.string() + ": " + e.what());
  }
}

NyquistRecord ingest_iq(const std::filesystem::path& data, const std::filesystem::path& sidecar,
                        const ChannelPlan& plan) {
  const auto meta = read_sidecar(sidecar);
  if (meta.format != "cf32le") {
    throw Error(ErrorKind::BadFormat, "unsupported IQ format '" + meta.format + "'");
  }
  const double rate = plan.total_bandwidth_hz();
  if (std::abs(meta.sample_rate_hz - rate) > 1e-9 * rate) {
    throw Error(ErrorKind::RateMismatch, "sidecar rate " + std::to_string(meta.sample_rate_hz) +
                                             " Hz != B_max " + std::to_string(rate) + " Hz");
  }
  if (meta.length == 0 || meta.length % static_cast<std::size_t>(plan.channels()) != 0) {
    throw Error(ErrorKind::LengthMismatch, "length " + std::to_string(meta.length) +
                                               " is not a positive multiple of L");
  }
  std::error_code ec;
  const auto bytes = std::filesystem::file_size(data, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot stat " + data.string());
  if (bytes != meta.length * 8) {
    throw Error(ErrorKind::LengthMismatch, data.string() + " holds " + std::to_string(bytes) +
                                               " bytes, sidecar declares " +
                                               std::to_string(meta.length * 8));
  }

  std::vector<std::uint32_t> words(2 * meta.length);
  std::ifstream in(data, std::ios::binary);
  if (!in.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(bytes))) {
    throw Error(ErrorKind::Io, "short read from " + data.string());
  }
  NyquistRecord record{ComplexVector(meta.length), plan};
  for (std::size_t i = 0; i < meta.length; ++i) {
    const float re = std::bit_cast<float>(to_le(words[2 * i]));
    const float im = std::bit_cast<float>(to_le(words[2 * i + 1]));
    record.samples[i] = {re, im};
  }
  return record;
}

}  // namespace mcsense

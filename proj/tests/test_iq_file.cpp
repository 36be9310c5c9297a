#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "mcsense/error.hpp"
#include "mcsense/estimator.hpp"
#include "mcsense/iq_file.hpp"
#include "mcsense/multicoset.hpp"

using namespace mcsense;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "mcsense_iq_test";
  fs::create_directories(dir);
  return dir / name;
}

NyquistRecord sample_record(std::uint64_t seed = 2) {
  return generate({.plan = validate_plan(32, 10e6, 8),
                   .active = ActiveChannelSet({8, 16, 17, 18, 29, 30}, 32),
                   .snr_db = 12.0,
                   .noise_power = 1.0,
                   .n_samples = 32 * 64,
                   .seed = seed});
}

void rewrite_sidecar(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

}  // namespace

TEST_CASE("IQ round trip is exact after float rounding") {
  const auto rec = sample_record();
  const auto data = scratch("rt.cf32");
  write_iq(rec, data, sidecar_path_for(data));
  CHECK(fs::file_size(data) == rec.samples.size() * 8);

  const auto side = read_sidecar(sidecar_path_for(data));
  CHECK(side.length == rec.samples.size());
  CHECK(side.sample_rate_hz == 320e6);
  CHECK(side.format == "cf32le");

  const auto back = ingest_iq(data, sidecar_path_for(data), rec.plan);
  REQUIRE(back.samples.size() == rec.samples.size());
  for (std::size_t i = 0; i < rec.samples.size(); ++i) {
    CHECK(back.samples[i].real() == static_cast<double>(static_cast<float>(rec.samples[i].real())));
    CHECK(back.samples[i].imag() == static_cast<double>(static_cast<float>(rec.samples[i].imag())));
  }
}

TEST_CASE("ingested captures sense like in-memory records") {
  const auto rec = sample_record(5);
  const auto data = scratch("sense.cf32");
  write_iq(rec, data, sidecar_path_for(data));
  const auto back = ingest_iq(data, sidecar_path_for(data), rec.plan);

  const CosetPattern pattern(32, {0, 2, 5, 9, 11, 14, 20, 23, 27, 30});
  auto detect = [&](const NyquistRecord& r) {
    const auto x = snapshots(r, pattern);
    return sequential_forward_nlls(sample_correlation(x), pattern, 1.0, 8).b_hat;
  };
  CHECK(detect(back) == detect(rec));
}

TEST_CASE("IQ ingest errors") {
  const auto rec = sample_record();
  const auto plan = rec.plan;
  const auto data = scratch("bad.cf32");
  const auto side = sidecar_path_for(data);
  write_iq(rec, data, side);

  SUBCASE("truncated data") {
    fs::resize_file(data, fs::file_size(data) - 8);
    CHECK_THROWS_AS(ingest_iq(data, side, plan), Error);
  }
  SUBCASE("unknown format") {
    rewrite_sidecar(side, R"({"sample_rate_hz": 320000000, "length": 2048, "format": "ci16"})");
    try {
      ingest_iq(data, side, plan);
      FAIL("expected BadFormat");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::BadFormat);
    }
  }
  SUBCASE("rate mismatch") {
    rewrite_sidecar(side, R"({"sample_rate_hz": 100000000, "length": 2048, "format": "cf32le"})");
    try {
      ingest_iq(data, side, plan);
      FAIL("expected RateMismatch");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::RateMismatch);
    }
  }
  SUBCASE("missing sidecar") {
    CHECK_THROWS_AS(ingest_iq(data, scratch("nope.json"), plan), Error);
  }
}

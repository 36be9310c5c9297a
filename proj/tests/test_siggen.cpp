#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "mcsense/error.hpp"
#include "mcsense/fft.hpp"
#include "mcsense/siggen.hpp"

using namespace mcsense;

namespace {

MultibandSignalSpec fig1_spec(double snr_db, std::size_t n, std::uint64_t seed) {
  return {.plan = validate_plan(32, 10e6, 8),
          .active = ActiveChannelSet({8, 16, 17, 18, 29, 30}, 32),
          .snr_db = snr_db,
          .noise_power = 1.0,
          .n_samples = n,
          .seed = seed};
}

double mean_power(const NyquistRecord& r) {
  double e = 0.0;
  for (const auto& x : r.samples) e += std::norm(x);
  return e / r.samples.size();
}

}  // namespace

TEST_CASE("generate is deterministic per seed") {
  const auto a = generate(fig1_spec(10.0, 2048, 7));
  const auto b = generate(fig1_spec(10.0, 2048, 7));
  const auto c = generate(fig1_spec(10.0, 2048, 8));
  CHECK(a.samples == b.samples);
  CHECK(a.samples != c.samples);
}

TEST_CASE("generate rejects invalid specs") {
  auto spec = fig1_spec(10.0, 2047, 1);
  CHECK_THROWS_AS(generate(spec), Error);
  spec = fig1_spec(10.0, 2048, 1);
  spec.plan = validate_plan(32, 10e6, 4);  // six channels > N_max
  CHECK_THROWS_AS(generate(spec), Error);
}

TEST_CASE("active channels show elevated band power at 10 dB") {
  const auto rec = generate(fig1_spec(10.0, 2048, 7));
  const ActiveChannelSet truth({8, 16, 17, 18, 29, 30}, 32);
  double lowest_active = INFINITY, highest_vacant = 0.0;
  for (int r = 0; r < 32; ++r) {
    const double p = band_power(rec, r);
    if (truth.contains(r)) {
      lowest_active = std::min(lowest_active, p);
    } else {
      highest_vacant = std::max(highest_vacant, p);
    }
  }
  CHECK(lowest_active > 3.0 * highest_vacant);

  const auto psd = empirical_psd(rec, 256);
  REQUIRE(psd.size() == 256);
  // 8 PSD bins per channel; plateau means are an order of magnitude apart
  auto plateau = [&](int r) {
    double s = 0.0;
    for (int k = 8 * r + 1; k < 8 * r + 7; ++k) s += psd[k].power;
    return s / 6.0;
  };
  for (int r : truth.indices()) CHECK(plateau(r) > 4.0 * plateau(0));
  CHECK(psd[8].frequency_hz == doctest::Approx(10e6));
}

TEST_CASE("noise-only record has variance sigma^2") {
  auto spec = fig1_spec(0.0, 65536, 3);
  spec.active = {};
  spec.noise_power = 2.5;
  const auto rec = generate(spec);
  const double var = mean_power(rec);
  // exponential power samples: standard error sigma^2 / sqrt(n)
  CHECK(std::abs(var - 2.5) < 3.0 * 2.5 / std::sqrt(65536.0));
  CHECK(std::abs(var - 2.5) < 0.25);
}

TEST_CASE("noise-free record stays inside its channel") {
  MultibandSignalSpec spec{.plan = validate_plan(8, 1e6, 2),
                           .active = ActiveChannelSet({3}, 8),
                           .snr_db = INFINITY,
                           .noise_power = 0.0,
                           .n_samples = 4096,
                           .seed = 5};
  const auto rec = generate(spec);
  const auto X = fft(rec.samples);
  double inside = 0.0, total = 0.0;
  for (std::size_t k = 0; k < X.size(); ++k) {
    total += std::norm(X[k]);
    if (k >= 3 * 512 && k < 4 * 512) inside += std::norm(X[k]);
  }
  CHECK(inside / total >= 0.999);
  CHECK((total - inside) / total <= 1e-6);
  CHECK(band_power(rec, 3) == doctest::Approx(1.0 / 8));
}

TEST_CASE("band_power partitions total power") {
  const auto rec = generate(fig1_spec(5.0, 4096, 21));
  double sum = 0.0;
  for (int r = 0; r < 32; ++r) sum += band_power(rec, r);
  CHECK(std::abs(sum - mean_power(rec)) <= 1e-9 * mean_power(rec));
  CHECK_THROWS_AS(band_power(rec, 32), Error);
  CHECK_THROWS_AS(band_power(rec, -1), Error);
}

TEST_CASE("band_power of a tone at the centre of channel 5") {
  const auto plan = validate_plan(32, 10e6, 8);
  const std::size_t n = 2048;
  NyquistRecord rec{ComplexVector(n), plan};
  const double f = (5.0 + 0.5) / 32.0;  // cycles per Nyquist sample
  for (std::size_t t = 0; t < n; ++t) rec.samples[t] = std::polar(1.0, 2 * std::numbers::pi * f * t);
  CHECK(band_power(rec, 5) >= 0.99 * mean_power(rec));
}

TEST_CASE("in-band SNR calibration on the signal-only record") {
  for (double snr : {-3.0, 0.0, 7.5}) {
    auto spec = fig1_spec(snr, 16384, 99);
    spec.noise_power = 0.7;
    const auto sig = generate_signal(spec);
    const double noise_share = spec.noise_power / 32.0;
    for (int r : spec.active.indices()) {
      const double ratio = band_power(sig, r) / noise_share;
      CHECK(std::abs(ratio / std::pow(10.0, snr / 10.0) - 1.0) < 0.02);
    }
  }
}

TEST_CASE("0 dB: active band power is about twice the noise-only band power") {
  double active = 0.0, vacant = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto rec = generate(fig1_spec(0.0, 2048, seed));
    active += band_power(rec, 17);
    vacant += band_power(rec, 3);
  }
  const double ratio = active / vacant;
  CHECK(ratio >= 1.6);
  CHECK(ratio <= 2.4);
}

TEST_CASE("channel draws do not depend on the other channels") {
  auto one = fig1_spec(4.0, 2048, 12);
  one.active = ActiveChannelSet({8}, 32);
  auto two = one;
  two.active = ActiveChannelSet({8, 20}, 32);
  const auto a = fft(generate_signal(one).samples);
  const auto b = fft(generate_signal(two).samples);
  for (std::size_t k = 8 * 64; k < 9 * 64; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-9 * std::abs(a[k]) + 1e-12);
}

TEST_CASE("empirical_psd edge cases") {
  const auto plan = validate_plan(4, 1e6, 1);
  NyquistRecord zero{ComplexVector(64), plan};
  for (const auto& pt : empirical_psd(zero, 16)) CHECK(pt.power == 0.0);

  NyquistRecord tone{ComplexVector(256), plan};
  for (std::size_t t = 0; t < 256; ++t) tone.samples[t] = std::polar(1.0, 2 * std::numbers::pi * 5 * t / 32.0);
  const auto psd = empirical_psd(tone, 32);
  const auto peak = std::max_element(psd.begin(), psd.end(),
                                     [](auto& a, auto& b) { return a.power < b.power; });
  CHECK(peak - psd.begin() == 5);
  CHECK_THROWS_AS(empirical_psd(tone, 512), Error);
}

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mcsense/ed_baseline.hpp"
#include "mcsense/error.hpp"

using namespace mcsense;

namespace {

EdConfig cfg64() { return {.plan = validate_plan(32, 10e6, 8), .samples = 64, .p_fa = 0.01, .sigma2 = 1.0}; }

double energy(const ComplexVector& x) {
  double e = 0.0;
  for (const auto& v : x) e += std::norm(v);
  return e;
}

}  // namespace

TEST_CASE("inverse Q-function reference values") {
  CHECK(std::abs(inverse_q(0.5)) < 1e-15);
  // standard normal upper quantiles (scipy.stats.norm.isf)
  CHECK(inverse_q(0.01) == doctest::Approx(2.3263478740408408).epsilon(1e-12));
  CHECK(inverse_q(0.0013499) == doctest::Approx(2.999999555858321).epsilon(1e-9));
  CHECK(inverse_q(0.99) == doctest::Approx(-2.3263478740408408).epsilon(1e-12));
  CHECK_THROWS_AS(inverse_q(0.0), Error);
  CHECK_THROWS_AS(inverse_q(1.0), Error);
}

TEST_CASE("inverse Q round trip") {
  for (double p = 1e-12; p < 1.0; p *= 1.7) {
    CHECK(std::abs(q_function(inverse_q(p)) - p) <= 1e-10);
  }
  for (double p = 0.01; p < 1.0; p += 0.01) {
    CHECK(std::abs(q_function(inverse_q(p)) - p) <= 1e-10);
  }
}

TEST_CASE("ED threshold") {
  CHECK(ed_threshold(cfg64()) == doctest::Approx(1.0 + 2.3263478740408408 / std::sqrt(32.0)));
  CHECK(ed_threshold(cfg64()) == doctest::Approx(1.41126).epsilon(2e-5));

  auto median = cfg64();
  median.p_fa = 0.5;
  median.sigma2 = 3.0;
  CHECK(ed_threshold(median) == doctest::Approx(3.0).epsilon(1e-15));

  auto long_window = cfg64();
  long_window.samples = 100000000;
  const double excess = ed_threshold(long_window) - 1.0;
  CHECK(excess == doctest::Approx(2.3263478740408408 / std::sqrt(5e7)).epsilon(1e-9));
  CHECK(excess < 3.3e-4);

  auto bad = cfg64();
  bad.samples = 1;
  CHECK_THROWS_AS(ed_threshold(bad), Error);
  bad = cfg64();
  bad.p_fa = 1.0;
  CHECK_THROWS_AS(ed_threshold(bad), Error);
}

TEST_CASE("channelizer isolates a tone") {
  const auto plan = validate_plan(32, 10e6, 8);
  NyquistRecord rec{ComplexVector(2048), plan};
  const double f = (5.0 + 0.25) / 32.0;
  for (std::size_t t = 0; t < rec.samples.size(); ++t) {
    rec.samples[t] = std::polar(1.0, 2 * std::numbers::pi * f * t);
  }
  const auto bands = channelize(rec);
  REQUIRE(bands.size() == 32);
  const double e5 = energy(bands[5]);
  for (int r = 0; r < 32; ++r) {
    if (r != 5) CHECK(energy(bands[r]) <= 1e-8 * e5);
  }
}

TEST_CASE("channelizer conserves energy") {
  const MultibandSignalSpec spec{.plan = validate_plan(32, 10e6, 8),
                                 .active = ActiveChannelSet({8, 16, 17}, 32),
                                 .snr_db = 3.0,
                                 .noise_power = 1.0,
                                 .n_samples = 4096,
                                 .seed = 4};
  const auto rec = generate(spec);
  double total = 0.0;
  for (const auto& b : channelize(rec)) total += energy(b);
  CHECK(std::abs(total - energy(rec.samples)) <= 1e-9 * energy(rec.samples));

  NyquistRecord zero{ComplexVector(256), spec.plan};
  for (const auto& b : channelize(zero)) CHECK(energy(b) == 0.0);

  NyquistRecord ragged{ComplexVector(100), spec.plan};
  CHECK_THROWS_AS(channelize(ragged), Error);
}

TEST_CASE("white noise keeps per-sample variance sigma^2 in every channel") {
  MultibandSignalSpec spec{.plan = validate_plan(32, 10e6, 8), .active = {}, .snr_db = 0.0,
                           .noise_power = 1.0, .n_samples = 2048, .seed = 0};
  std::vector<double> per_channel(32, 0.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    spec.seed = seed;
    const auto bands = channelize(generate(spec));
    for (int r = 0; r < 32; ++r) per_channel[r] += energy(bands[r]) / bands[r].size();
  }
  // 6400 exponential samples per channel: standard error 0.0125
  for (double v : per_channel) CHECK(std::abs(v / 100.0 - 1.0) < 0.05);
}

TEST_CASE("energy detection decisions") {
  const auto cfg = cfg64();
  NyquistRecord zero{ComplexVector(2048), cfg.plan};
  const auto none = energy_detect(zero, cfg);
  CHECK(none.flagged().empty());
  CHECK(none.threshold == doctest::Approx(ed_threshold(cfg)));

  NyquistRecord small{ComplexVector(32 * 16), cfg.plan};
  CHECK_THROWS_AS(energy_detect(small, cfg), Error);

  const ActiveChannelSet truth({8, 16, 17, 18, 29, 30}, 32);
  int hits = 0, false_alarms = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const MultibandSignalSpec spec{.plan = cfg.plan, .active = truth, .snr_db = 10.0,
                                   .noise_power = 1.0, .n_samples = 2048, .seed = seed};
    const auto flagged = energy_detect(generate(spec), cfg).flagged();
    for (int r : flagged.indices()) (truth.contains(r) ? hits : false_alarms)++;
  }
  CHECK(hits == 300);
  CHECK(false_alarms <= 26);  // ~1 expected at the calibrated rate
}

TEST_CASE("ED detection rate does not fall with SNR") {
  const auto cfg = cfg64();
  const ActiveChannelSet truth({8, 16, 17, 18, 29, 30}, 32);
  double previous = 0.0;
  for (double snr : {-6.0, -3.0, 0.0, 3.0}) {
    int hits = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
      const MultibandSignalSpec spec{.plan = cfg.plan, .active = truth, .snr_db = snr,
                                     .noise_power = 1.0, .n_samples = 2048,
                                     .seed = static_cast<std::uint64_t>(t)};
      hits += energy_detect(generate(spec), cfg).flagged().size();
    }
    const double rate = hits / (6.0 * trials);
    const double se = std::sqrt(std::max(rate * (1 - rate), 1e-4) / (6.0 * trials));
    CHECK(rate >= previous - se);
    previous = rate;
  }
}

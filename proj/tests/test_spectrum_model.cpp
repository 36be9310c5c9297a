#include <doctest.h>

#include <random>

#include "mcsense/error.hpp"
#include "mcsense/spectrum_model.hpp"
#include "oracles.hpp"

using namespace mcsense;

TEST_CASE("validate_plan accepts the 32-channel wideband setup") {
  const auto plan = validate_plan(32, 10e6, 8);
  CHECK(plan.total_bandwidth_hz() == doctest::Approx(320e6));
  CHECK(plan.max_occupancy() == 0.25);
  CHECK(landau_minimum_rate(plan) == doctest::Approx(80e6));
}

TEST_CASE("validate_plan degenerate and invalid plans") {
  const auto single = validate_plan(1, 1.0, 1);
  CHECK(single.max_occupancy() == 1.0);
  CHECK(landau_minimum_rate(single) == single.total_bandwidth_hz());

  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Io;
  };
  CHECK(kind_of([] { validate_plan(8, 1e6, 9); }) == ErrorKind::OccupancyOutOfRange);
  CHECK(kind_of([] { validate_plan(8, 1e6, 0); }) == ErrorKind::OccupancyOutOfRange);
  CHECK(kind_of([] { validate_plan(8, 1e6, 2, 9e6); }) == ErrorKind::InconsistentDimensions);
  CHECK_NOTHROW(validate_plan(8, 1e6, 2, 8e6));
}

TEST_CASE("landau rate of one channel in four") {
  const auto plan = validate_plan(4, 5e6, 1);
  CHECK(landau_minimum_rate(plan) == doctest::Approx(5e6));
}

TEST_CASE("landau rate never exceeds B_max") {
  for (int L = 1; L <= 40; ++L) {
    for (int n = 1; n <= L; ++n) {
      const auto plan = validate_plan(L, 1.5e6, n);
      const double rate = landau_minimum_rate(plan);
      CHECK(rate <= plan.total_bandwidth_hz() * (1 + 1e-15));
      if (n == L) CHECK(rate == doctest::Approx(plan.total_bandwidth_hz()));
    }
  }
}

TEST_CASE("active set canonical form") {
  ActiveChannelSet b({30, 8, 17}, 32);
  CHECK(b.indices() == std::vector<int>{8, 17, 30});
  CHECK(ActiveChannelSet(b.indices(), 32) == b);
  CHECK_THROWS_AS(ActiveChannelSet({1, 1}, 4), Error);
  CHECK_THROWS_AS(ActiveChannelSet({4}, 4), Error);
  CHECK_THROWS_AS(ActiveChannelSet({-1}, 4), Error);
}

TEST_CASE("complement of the six-channel example") {
  const auto plan = validate_plan(32, 10e6, 8);
  const ActiveChannelSet b({8, 16, 17, 18, 29, 30}, 32);
  const auto c = complement(b, plan);
  CHECK(c.size() == 26);
  for (int r : b.indices()) CHECK_FALSE(c.contains(r));

  CHECK(complement(ActiveChannelSet{}, plan).size() == 32);
  std::vector<int> all(32);
  for (int r = 0; r < 32; ++r) all[r] = r;
  CHECK(complement(ActiveChannelSet(all, 32), plan).empty());
}

TEST_CASE("complement is an involution") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int L = 1 + static_cast<int>(gen() % 40);
    const int n = static_cast<int>(gen() % (L + 1));
    const auto plan = validate_plan(L, 1e6, L);
    const ActiveChannelSet b(oracle::distinct(n, L, gen), L);
    const auto c = complement(b, plan);
    CHECK(b.size() + c.size() == L);
    CHECK(complement(c, plan) == b);
  }
}

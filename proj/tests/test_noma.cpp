#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "udnsync/noma.hpp"
#include "udnsync/random.hpp"

using namespace udnsync;

namespace {

PairLink unit_link(double gs, double gw, double as, double aw) {
  PairLink l;
  l.gain_strong = gs;
  l.gain_weak = gw;
  l.alpha_strong = as;
  l.alpha_weak = aw;
  l.noise = 1.0;
  l.tx_power = 1.0;
  l.bandwidth_hz = 1.0;
  l.payload_bits = 1.0;
  return l;
}

oracle::Link to_oracle(const PairLink& l) {
  return {l.gain_strong, l.gain_weak, l.alpha_strong, l.alpha_weak, l.noise, l.tx_power, l.bandwidth_hz,
          l.payload_bits};
}

PairLink random_link(RandomSource& rng) {
  double a = std::exp(rng.uniform(-25.0, -5.0));
  double b = std::exp(rng.uniform(-25.0, -5.0));
  PairLink l;
  l.gain_strong = std::max(a, b);
  l.gain_weak = std::min(a, b);
  l.alpha_strong = rng.uniform(0.01, 0.99);
  l.alpha_weak = 1.0 - l.alpha_strong;
  l.noise = 1e-14;
  l.tx_power = 0.2;
  l.bandwidth_hz = 180e3 / 3.0;
  l.payload_bits = 8192;
  return l;
}

}  // namespace

TEST(Sinr, Examples) {
  auto l = unit_link(2.0, 2.0, 0.5, 0.5);
  EXPECT_DOUBLE_EQ(sinr_strong(l), 0.5);
  EXPECT_DOUBLE_EQ(sinr_weak(l), 1.0);
  EXPECT_DOUBLE_EQ(sinr_strong_alone(l), 1.0);
  EXPECT_DOUBLE_EQ(rate(1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(rate(3.0, 2.0), 4.0);
  EXPECT_EQ(rate(0.0, 5.0), 0.0);
  EXPECT_THROW(rate(-1.0, 1.0), std::invalid_argument);
}

TEST(Sinr, StrongRateSaturatesAtHighSnr) {
  // Interference from the weak share caps the strong SINR at a_i / a_j.
  auto l = unit_link(1e12, 1.0, 0.75, 0.25);
  EXPECT_NEAR(sinr_strong(l), 3.0, 1e-9);
  EXPECT_NEAR(rate(sinr_strong(l), 1.0), std::log2(1.0 / 0.25), 1e-9);
}

TEST(NomaTime, WeakFinishesFirst) {
  // R_i = log2 1.5, R_j = R_alone = 1, L = 1.
  auto t = pair_completion_noma(unit_link(2.0, 2.0, 0.5, 0.5));
  EXPECT_DOUBLE_EQ(t.t_weak, 1.0);
  EXPECT_NEAR(t.t_strong, 2.0 - std::log2(1.5), 1e-15);
  EXPECT_DOUBLE_EQ(t.t_pair, t.t_strong);
}

TEST(NomaTime, StrongFinishesFirst) {
  auto l = unit_link(1e6, 1.0, 0.5, 0.5);
  auto t = pair_completion_noma(l);
  EXPECT_NEAR(t.t_strong, 1.0 / std::log2(1.0 + 5e5 / (5e5 + 1.0)), 1e-12);
  EXPECT_NEAR(t.t_weak, 1.0 / std::log2(1.5), 1e-12);
  EXPECT_EQ(t.t_pair, t.t_weak);
}

TEST(NomaTime, AgreesWithEventDrivenOracle) {
  RandomSource rng(31);
  for (int i = 0; i < 20'000; ++i) {
    auto l = random_link(rng);
    auto got = try_pair_completion_noma(l);
    auto want = oracle::event_driven_noma(to_oracle(l));
    if (!got) {
      EXPECT_TRUE(std::isinf(want.pair) || std::isnan(want.pair));
      continue;
    }
    ASSERT_NEAR(got->t_pair, want.pair, 1e-9 * want.pair) << i;
    ASSERT_NEAR(got->t_strong, want.strong, 1e-9 * want.strong) << i;
    ASSERT_NEAR(got->t_weak, want.weak, 1e-9 * want.weak) << i;
  }
}

TEST(NomaTime, ContinuousAcrossTheCrossover) {
  // Sweep the split through the point where both legs finish together.
  auto l = unit_link(4.0, 4.0, 0.5, 0.5);
  double prev = -1.0;
  for (int i = 100; i < 2000; ++i) {
    l.alpha_strong = i / 2000.0;
    l.alpha_weak = 1.0 - l.alpha_strong;
    double t = pair_completion_noma(l).t_strong;
    if (prev > 0.0) EXPECT_LT(std::abs(t - prev), 0.05 * prev) << l.alpha_strong;
    prev = t;
  }
}

TEST(NomaTime, MonotoneInPayload) {
  auto l = unit_link(8.0, 1.0, 0.3, 0.7);
  double prev = 0.0;
  for (double bits : {1.0, 2.0, 5.0, 100.0}) {
    l.payload_bits = bits;
    double t = pair_completion_noma(l).t_pair;
    EXPECT_GT(t, prev);
    prev = t;
  }
  // Linear in L: every phase scales together.
  l.payload_bits = 3.0;
  double three = pair_completion_noma(l).t_pair;
  l.payload_bits = 1.0;
  EXPECT_NEAR(three, 3.0 * pair_completion_noma(l).t_pair, 1e-12);
}

TEST(NomaTime, ZeroRatesAreInfinite) {
  auto l = unit_link(1.0, 1.0, 1.0, 0.0);  // weak leg gets nothing
  EXPECT_FALSE(try_pair_completion_noma(l).has_value());
  try {
    pair_completion_noma(l);
    FAIL();
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("infinite completion"), std::string::npos);
  }
  // A vanishing but positive weak share is finite.
  l.alpha_strong = 1.0 - 1e-9;
  l.alpha_weak = 1e-9;
  auto t = pair_completion_noma(l);
  EXPECT_TRUE(std::isfinite(t.t_pair));
  // Interference-free limit: the strong leg runs at its clean rate, 1 bit/s here.
  EXPECT_NEAR(t.t_strong, 1.0, 1e-8);
  EXPECT_NEAR(rate(sinr_strong(l), 1.0), rate(sinr_strong_alone(l), 1.0), 1e-8);
}

TEST(NomaTime, RejectsBadLinks) {
  EXPECT_THROW(pair_completion_noma(unit_link(1.0, 2.0, 0.5, 0.5)), std::invalid_argument);
  EXPECT_THROW(pair_completion_noma(unit_link(2.0, 1.0, 0.7, 0.7)), std::invalid_argument);
  EXPECT_THROW(pair_completion_noma(unit_link(2.0, 1.0, -0.1, 0.5)), std::invalid_argument);
  auto l = unit_link(2.0, 1.0, 0.5, 0.5);
  l.payload_bits = 0.0;
  EXPECT_THROW(pair_completion_noma(l), std::invalid_argument);
  l = unit_link(2.0, 1.0, 0.5, 0.5);
  l.bandwidth_hz = 0.0;
  EXPECT_THROW(pair_completion_noma(l), std::invalid_argument);
}

TEST(OmaTime, Examples) {
  auto l = unit_link(1.0, 1.0, 0.5, 0.5);
  auto full = pair_completion_oma(l, OmaPower::full);
  EXPECT_DOUBLE_EQ(full.t_strong, 1.0);
  EXPECT_DOUBLE_EQ(full.t_weak, 1.0);
  EXPECT_DOUBLE_EQ(full.t_pair, 2.0);
  auto split = pair_completion_oma(l, OmaPower::split);
  EXPECT_NEAR(split.t_pair, 2.0 / std::log2(1.5), 1e-12);
  EXPECT_FALSE(try_pair_completion_oma(unit_link(1.0, 0.0, 0.5, 0.5)).has_value());
  EXPECT_THROW(pair_completion_oma(unit_link(1.0, 0.0, 0.5, 0.5)), std::domain_error);
}

TEST(OmaTime, SplitComparatorNeverBeatsNoma) {
  // Same power shares: the superposed pair finishes no later than the serial one.
  RandomSource rng(77);
  for (int i = 0; i < 10'000; ++i) {
    auto l = random_link(rng);
    auto n = try_pair_completion_noma(l);
    auto o = try_pair_completion_oma(l, OmaPower::split);
    if (!n || !o) continue;
    ASSERT_LE(n->t_pair, o->t_pair * (1.0 + 1e-12)) << i;
  }
}

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <sstream>

#include "oracles.hpp"
#include "udnsync/scheduler.hpp"

using namespace udnsync;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MatrixD table(std::initializer_list<std::initializer_list<double>> rows) {
  MatrixD m(rows.size(), rows.begin()->size());
  std::size_t r = 0;
  for (const auto& row : rows) {
    std::size_t c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

MatrixD random_table(int t_count, int n_count, RandomSource& rng) {
  MatrixD m(t_count, n_count);
  for (int t = 0; t < t_count; ++t)
    for (int n = 0; n < n_count; ++n) m(t, n) = rng.uniform(0.1, 10.0);
  return m;
}

Matrix<LinkGain> random_links(int t_count, int n_count, RandomSource& rng) {
  Matrix<LinkGain> links(t_count, n_count);
  for (int t = 0; t < t_count; ++t)
    for (int n = 0; n < n_count; ++n)
      links(t, n) = {rng.exponential(1.0) * std::pow(rng.uniform(0.5, 10.0), -4.0),
                     rng.exponential(1.0) * std::pow(rng.uniform(10.0, 100.0), -4.0)};
  return links;
}

LinkBudget budget() {
  SimConfig c;
  c.num_subbands = 3;
  return link_budget(c);
}

}  // namespace

TEST(Preferences, RankByTime) {
  auto p = build_preferences(table({{3, 1, 2}, {1, 1, 5}}));
  EXPECT_EQ(p.triplet_prefs[0], (std::vector<int>{1, 2, 0}));
  EXPECT_EQ(p.triplet_prefs[1], (std::vector<int>{0, 1, 2}));  // tie to lower index
  EXPECT_EQ(p.subband_prefs[0], (std::vector<int>{1, 0}));
  EXPECT_EQ(p.subband_prefs[1], (std::vector<int>{0, 1}));
  EXPECT_EQ(p.subband_prefs[2], (std::vector<int>{0, 1}));
}

TEST(Preferences, InfiniteTimesRankLast) {
  auto p = build_preferences(table({{kInf, 2.0}}));
  EXPECT_EQ(p.triplet_prefs[0], (std::vector<int>{1, 0}));
}

TEST(StableMarriage, TwoByTwo) {
  // Both triplets want sub-band 0; it prefers triplet 1.
  auto times = table({{1, 4}, {0.5, 3}});
  auto a = stable_marriage(build_preferences(times));
  EXPECT_EQ(a.triplet_of_subband, (std::vector<int>{1, 0}));
  EXPECT_FALSE(oracle::has_blocking_pair(times, a.triplet_of_subband));
  EXPECT_EQ(max_time(a, times), 4.0);
  EXPECT_EQ(oracle::brute_force_min_max(times), 3.0);
}

TEST(StableMarriage, NoBlockingPairs) {
  RandomSource rng(3);
  for (int i = 0; i < 500; ++i) {
    int t = rng.uniform_int(1, 7), n = rng.uniform_int(1, 7);
    auto times = random_table(t, n, rng);
    auto a = stable_marriage(build_preferences(times));
    a.check();
    EXPECT_EQ(static_cast<int>(a.matched_triplets().size()), std::min(t, n));
    EXPECT_FALSE(oracle::has_blocking_pair(times, a.triplet_of_subband)) << i;
  }
}

TEST(StableMarriage, PigeonholeLeavesExtrasUnmatched) {
  auto times = table({{1}, {2}, {0.5}});
  auto a = stable_marriage(build_preferences(times));
  EXPECT_EQ(a.triplet_of_subband, (std::vector<int>{2}));
  EXPECT_EQ(a.subband_of(0), kIdle);
  EXPECT_EQ(a.subband_of(2), 0);
}

TEST(StableMarriage, SingleSubbandPicksFastest) {
  RandomSource rng(4);
  for (int i = 0; i < 200; ++i) {
    auto times = random_table(rng.uniform_int(1, 9), 1, rng);
    auto a = stable_marriage(build_preferences(times));
    EXPECT_EQ(max_time(a, times), oracle::brute_force_min_max(times));
  }
}

TEST(StableMarriage, RejectsRaggedPreferences) {
  Preferences p;
  p.triplet_prefs = {{0, 1}};
  p.subband_prefs = {{0}};
  EXPECT_THROW(stable_marriage(p), std::invalid_argument);
}

TEST(Assignment, CheckCatchesDuplicates) {
  Assignment a{{0, 0}, 0};
  EXPECT_THROW(a.check(), std::logic_error);
  Assignment b{{kIdle, 1, 0}, 0};
  EXPECT_NO_THROW(b.check());
  EXPECT_EQ(b.matched_triplets(), (std::vector<int>{0, 1}));
}

TEST(Swap, CrossedAssignmentIsUncrossed) {
  auto times = table({{1, 5, 9}, {5, 1, 9}, {9, 9, 2}});
  Assignment crossed{{1, 0, 2}, 0};
  auto step = swap_matching_round(crossed, times);
  EXPECT_TRUE(step.changed);
  EXPECT_EQ(step.assignment.triplet_of_subband, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(step.candidates_evaluated, 3);
  auto run = swap_matching(crossed, times, 10);
  EXPECT_EQ(run.iterations, 1);
  EXPECT_TRUE(run.fixed_point);
  EXPECT_EQ(run.max_time_trace, (std::vector<double>{5.0, 2.0}));
  EXPECT_FALSE(has_admissible_swap(run.assignment, times));
}

TEST(Swap, RejectsSwapThatHurtsOneSide) {
  auto times = table({{1, 5}, {1, 2}});
  Assignment a{{1, 0}, 0};  // t0 gains, t1 loses
  EXPECT_FALSE(swap_matching_round(a, times).changed);
}

TEST(Swap, MovesToPreferredIdleSubband) {
  auto times = table({{4, 1, 3}});
  Assignment a{{0, kIdle, kIdle}, 0};
  auto step = swap_matching_round(a, times);
  EXPECT_TRUE(step.changed);
  EXPECT_EQ(step.assignment.triplet_of_subband, (std::vector<int>{kIdle, 0, kIdle}));
  EXPECT_EQ(step.candidates_evaluated, 2);
}

TEST(Swap, StableMatchingIsAlreadyAFixedPoint) {
  RandomSource rng(8);
  for (int i = 0; i < 500; ++i) {
    int t = rng.uniform_int(1, 8), n = rng.uniform_int(1, 8);
    auto times = random_table(t, n, rng);
    auto run = swap_matching(stable_marriage(build_preferences(times)), times, 100);
    EXPECT_EQ(run.iterations, 0);
    EXPECT_TRUE(run.fixed_point);
  }
}

TEST(Swap, CandidateCountBounded) {
  RandomSource rng(9);
  for (int i = 0; i < 300; ++i) {
    int t = rng.uniform_int(1, 8), n = rng.uniform_int(1, 8);
    auto times = random_table(t, n, rng);
    // Random injective start so swaps have work to do.
    std::vector<int> owner(n, kIdle);
    std::vector<int> order(t);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng.engine());
    for (int k = 0; k < std::min(t, n); ++k) owner[k] = order[k];
    auto run = swap_matching(Assignment{owner, 0}, times, 1000);
    EXPECT_TRUE(run.fixed_point);
    for (int c : run.candidates_per_iteration) EXPECT_LE(c, n * (n - 1) / 2);
    for (std::size_t k = 1; k < run.max_time_trace.size(); ++k)
      EXPECT_LE(run.max_time_trace[k], run.max_time_trace[k - 1] + 1e-12);
    EXPECT_FALSE(has_admissible_swap(run.assignment, times));
  }
}

TEST(Swap, IterationCap) {
  auto times = table({{1, 5, 9}, {5, 1, 9}, {9, 9, 2}});
  auto run = swap_matching(Assignment{{1, 0, 2}, 0}, times, 0);
  EXPECT_EQ(run.iterations, 0);
  EXPECT_FALSE(run.fixed_point);
}

TEST(GridSearch, PicksTheBestGridPoint) {
  RandomSource rng(10);
  auto b = budget();
  for (int i = 0; i < 30; ++i) {
    auto links = random_links(rng.uniform_int(1, 5), rng.uniform_int(1, 3), rng);
    auto slot = grid_search_alpha(links, b, 0.05, 100);
    ASSERT_EQ(slot.delay_per_alpha.size(), 21u);
    double best = *std::min_element(slot.delay_per_alpha.begin(), slot.delay_per_alpha.end());
    EXPECT_EQ(slot.max_time, best);
    int first = static_cast<int>(std::find(slot.delay_per_alpha.begin(), slot.delay_per_alpha.end(), best) -
                                 slot.delay_per_alpha.begin());
    EXPECT_NEAR(slot.alpha_strong, first * 0.05, 1e-12);
    EXPECT_LT(slot.alpha_strong, 1.0);
    EXPECT_TRUE(std::isinf(slot.delay_per_alpha.back()));
    EXPECT_TRUE(std::isfinite(slot.max_time));
    EXPECT_EQ(slot.max_time, max_time(slot.assignment, slot.noma_times));
  }
}

TEST(GridSearch, SingleSubbandMatchesFineScan) {
  // One sub-band, one triplet: the slot delay is the pair time itself, so the
  // coarse grid optimum lies within one step of a fine scan.
  RandomSource rng(11);
  auto b = budget();
  for (int i = 0; i < 20; ++i) {
    auto links = random_links(1, 1, rng);
    auto slot = grid_search_alpha(links, b, 0.01, 10);
    auto f = [&](double a) {
      auto t = try_pair_completion_noma(make_pair_link(links(0, 0), a, b));
      return t ? t->t_pair : kInf;
    };
    double fine = oracle::argmin_scan(f, 0.0, 0.999, 9991);
    EXPECT_LE(std::abs(slot.alpha_strong - fine), 0.01 + 1e-9);
    EXPECT_LE(slot.max_time, f(fine) * 1.05);
  }
}

TEST(PairLink, StrongRoleFollowsLargerGain) {
  auto b = budget();
  auto l = make_pair_link({1e-6, 1e-3}, 0.3, b);
  EXPECT_EQ(l.gain_strong, 1e-3);
  EXPECT_EQ(l.gain_weak, 1e-6);
  EXPECT_DOUBLE_EQ(l.alpha_weak, 0.7);
}

TEST(Tables, NomaNeverSlowerThanSplitOma) {
  RandomSource rng(12);
  auto b = budget();
  b.oma_power = OmaPower::split;
  for (int i = 0; i < 50; ++i) {
    auto links = random_links(4, 3, rng);
    double alpha = rng.uniform(0.0, 0.95);
    auto n = noma_time_table(links, alpha, b);
    auto o = oma_time_table(links, alpha, b);
    for (int t = 0; t < 4; ++t)
      for (int s = 0; s < 3; ++s) EXPECT_LE(n(t, s), o(t, s) * (1 + 1e-12));
  }
}

namespace {

Topology triplet_topology(int triplets, std::uint64_t seed) {
  SimConfig c;
  c.num_nodes = 3 * triplets;
  RandomSource rng(seed);
  return place_nodes(c, rng);
}

}  // namespace

TEST(Schedule, FitsInOneRoundWhenSubbandsSuffice) {
  SimConfig c;
  c.num_subbands = 4;
  auto topo = triplet_topology(3, 1);
  RandomSource rng(2);
  auto s = schedule_exchange(topo, c, rng);
  ASSERT_EQ(s.noma.rounds.size(), 1u);
  EXPECT_EQ(s.noma.rounds[0].local_assignment.matched_triplets().size(), 3u);
  EXPECT_EQ(s.noma.exchange_delay_total, s.noma.rounds[0].t_max);
}

TEST(Schedule, SingleSubbandServesOnePerRound) {
  SimConfig c;
  c.num_subbands = 1;
  auto topo = triplet_topology(3, 3);
  RandomSource rng(4);
  auto s = schedule_exchange(topo, c, rng);
  ASSERT_EQ(s.noma.rounds.size(), 3u);
  std::vector<int> served;
  double total = 0.0;
  for (const auto& r : s.noma.rounds) {
    EXPECT_EQ(r.candidates.size(), 3u - r.round);
    served.push_back(r.triplet_of_subband[0]);
    total += r.t_max;
  }
  std::sort(served.begin(), served.end());
  EXPECT_EQ(served, (std::vector<int>{0, 1, 2}));
  EXPECT_DOUBLE_EQ(s.noma.exchange_delay_total, total);
}

TEST(Schedule, ComparatorSharesTheSlots) {
  SimConfig c;
  c.num_subbands = 2;
  auto topo = triplet_topology(5, 5);
  RandomSource rng(6);
  auto s = schedule_exchange(topo, c, rng);
  ASSERT_EQ(s.noma.rounds.size(), s.oma.rounds.size());
  for (std::size_t r = 0; r < s.noma.rounds.size(); ++r) {
    EXPECT_EQ(s.noma.rounds[r].triplet_of_subband, s.oma.rounds[r].triplet_of_subband);
    EXPECT_EQ(s.noma.rounds[r].alpha_strong, s.oma.rounds[r].alpha_strong);
    EXPECT_LE(s.noma.rounds[r].t_max, s.oma.rounds[r].t_max);
  }
  EXPECT_LE(s.noma.exchange_delay_total, s.oma.exchange_delay_total);
}

TEST(Schedule, SlotNearBruteForce) {
  // K' = 4 on N = 2 at a fixed split: the matched slot against the best
  // assignment serving two triplets.
  RandomSource rng(13);
  auto b = budget();
  double worst_ratio = 1.0;
  for (int i = 0; i < 200; ++i) {
    auto links = random_links(4, 2, rng);
    auto times = noma_time_table(links, 0.2, b);
    auto a = stable_marriage(build_preferences(times));
    double opt = oracle::brute_force_min_max(times);
    EXPECT_GE(max_time(a, times), opt);
    worst_ratio = std::max(worst_ratio, max_time(a, times) / opt);
  }
  EXPECT_TRUE(std::isfinite(worst_ratio));
}

TEST(Schedule, Errors) {
  SimConfig c;
  RandomSource rng(1);
  EXPECT_THROW(schedule_exchange(make_topology({{0, 0}, {1, 1}}, {}), c, rng), std::invalid_argument);
}

TEST(Schedule, Csv) {
  ScheduleOutcome o;
  RoundOutcome r;
  r.round = 0;
  r.alpha_strong = 0.25;
  r.triplet_of_subband = {kIdle, 3};
  r.times_per_subband = {PairTimes{}, PairTimes{0.5, 1.5, 1.5}};
  o.rounds.push_back(r);
  std::ostringstream os;
  write_schedule_csv(o, os);
  EXPECT_EQ(os.str(), "round,sub_band,triplet,alpha,t_strong,t_weak,t_pair\n0,1,3,0.25,0.5,1.5,1.5\n");
}

#include "udnsync/scheduler.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace udnsync {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> ranked(std::size_t count, auto key) {
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });
  return order;
}

}  // namespace

LinkBudget link_budget(const SimConfig& config) {
  return {config.tx_power_w(), noise_power(config), config.subband_bandwidth_hz(), config.payload_bits,
          config.oma_power};
}

PairLink make_pair_link(const LinkGain& gain, double alpha_strong, const LinkBudget& budget) {
  PairLink link;
  link.gain_strong = std::max(gain.strong, gain.weak);
  link.gain_weak = std::min(gain.strong, gain.weak);
  link.alpha_strong = alpha_strong;
  link.alpha_weak = 1.0 - alpha_strong;
  link.noise = budget.noise_w;
  link.tx_power = budget.tx_power_w;
  link.bandwidth_hz = budget.bandwidth_hz;
  link.payload_bits = budget.payload_bits;
  return link;
}

MatrixD noma_time_table(const Matrix<LinkGain>& links, double alpha_strong, const LinkBudget& budget) {
  MatrixD times(links.rows(), links.cols());
  for (std::size_t t = 0; t < links.rows(); ++t)
    for (std::size_t n = 0; n < links.cols(); ++n) {
      auto pt = try_pair_completion_noma(make_pair_link(links(t, n), alpha_strong, budget));
      times(t, n) = pt ? pt->t_pair : kInf;
    }
  return times;
}

MatrixD oma_time_table(const Matrix<LinkGain>& links, double alpha_strong, const LinkBudget& budget) {
  MatrixD times(links.rows(), links.cols());
  for (std::size_t t = 0; t < links.rows(); ++t)
    for (std::size_t n = 0; n < links.cols(); ++n) {
      auto pt = try_pair_completion_oma(make_pair_link(links(t, n), alpha_strong, budget), budget.oma_power);
      times(t, n) = pt ? pt->t_pair : kInf;
    }
  return times;
}

Preferences build_preferences(const MatrixD& times) {
  Preferences prefs;
  const auto num_triplets = times.rows();
  const auto num_subbands = times.cols();
  prefs.triplet_prefs.reserve(num_triplets);
  for (std::size_t t = 0; t < num_triplets; ++t)
    prefs.triplet_prefs.push_back(ranked(num_subbands, [&](int n) { return times(t, n); }));
  prefs.subband_prefs.reserve(num_subbands);
  for (std::size_t n = 0; n < num_subbands; ++n)
    prefs.subband_prefs.push_back(ranked(num_triplets, [&](int t) { return times(t, n); }));
  return prefs;
}

Preferences build_preferences(const Matrix<LinkGain>& links, double alpha_strong, const LinkBudget& budget) {
  return build_preferences(noma_time_table(links, alpha_strong, budget));
}

int Assignment::subband_of(int triplet) const {
  for (int n = 0; n < num_subbands(); ++n)
    if (triplet_of_subband[n] == triplet) return n;
  return kIdle;
}

std::vector<int> Assignment::matched_triplets() const {
  std::vector<int> out;
  for (int t : triplet_of_subband)
    if (t != kIdle) out.push_back(t);
  std::sort(out.begin(), out.end());
  return out;
}

void Assignment::check() const {
  auto matched = matched_triplets();
  if (std::adjacent_find(matched.begin(), matched.end()) != matched.end())
    throw std::logic_error("assignment places one triplet on two sub-bands");
}

Assignment stable_marriage(const Preferences& prefs) {
  const auto num_triplets = prefs.triplet_prefs.size();
  const auto num_subbands = prefs.subband_prefs.size();

  // rank[n][t]: position of triplet t in sub-band n's list.
  std::vector<std::vector<int>> rank(num_subbands, std::vector<int>(num_triplets));
  for (std::size_t n = 0; n < num_subbands; ++n) {
    if (prefs.subband_prefs[n].size() != num_triplets) throw std::invalid_argument("incomplete sub-band preference list");
    for (std::size_t pos = 0; pos < num_triplets; ++pos) rank[n][prefs.subband_prefs[n][pos]] = static_cast<int>(pos);
  }
  for (const auto& list : prefs.triplet_prefs)
    if (list.size() != num_subbands) throw std::invalid_argument("incomplete triplet preference list");

  Assignment out;
  out.triplet_of_subband.assign(num_subbands, kIdle);
  std::vector<std::size_t> next_choice(num_triplets, 0);
  std::vector<int> free_triplets(num_triplets);
  std::iota(free_triplets.rbegin(), free_triplets.rend(), 0);  // pop lowest index first

  while (!free_triplets.empty()) {
    int t = free_triplets.back();
    if (next_choice[t] >= num_subbands) {  // rejected everywhere; waits for a later slot
      free_triplets.pop_back();
      continue;
    }
    int n = prefs.triplet_prefs[t][next_choice[t]++];
    int holder = out.triplet_of_subband[n];
    if (holder == kIdle) {
      out.triplet_of_subband[n] = t;
      free_triplets.pop_back();
    } else if (rank[n][t] < rank[n][holder]) {
      out.triplet_of_subband[n] = t;
      free_triplets.back() = holder;
    }
  }
  return out;
}

double max_time(const Assignment& assignment, const MatrixD& times) {
  double worst = 0.0;
  for (int n = 0; n < assignment.num_subbands(); ++n)
    if (int t = assignment.triplet_of_subband[n]; t != kIdle) worst = std::max(worst, times(t, n));
  return worst;
}

namespace {

// Occupants of sub-bands a and b trade places (either may be idle).
bool admissible(const Assignment& as, const MatrixD& times, int a, int b) {
  int ta = as.triplet_of_subband[a];
  int tb = as.triplet_of_subband[b];
  bool better = false;
  if (ta != kIdle) {
    double before = times(ta, a), after = times(ta, b);
    if (!(after <= before)) return false;
    better |= after < before;
  }
  if (tb != kIdle) {
    double before = times(tb, b), after = times(tb, a);
    if (!(after <= before)) return false;
    better |= after < before;
  }
  return better;
}

double max_time_after(const Assignment& as, const MatrixD& times, int a, int b) {
  double worst = 0.0;
  for (int n = 0; n < as.num_subbands(); ++n) {
    int src = n == a ? b : n == b ? a : n;
    if (int t = as.triplet_of_subband[src]; t != kIdle) worst = std::max(worst, times(t, n));
  }
  return worst;
}

// Triplet t ranks `candidate` above `current` (shorter time, ties to lower index).
bool prefers(const MatrixD& times, int t, int candidate, int current) {
  double c = times(t, candidate), cur = times(t, current);
  return c < cur || (c == cur && candidate < current);
}

}  // namespace

SwapStep swap_matching_round(const Assignment& assignment, const MatrixD& times) {
  assignment.check();
  SwapStep step{assignment, false, 0};
  const int num_subbands = assignment.num_subbands();
  int best_a = -1, best_b = -1;
  double best_max = kInf;
  bool found = false;

  for (int a = 0; a < num_subbands; ++a) {
    for (int b = a + 1; b < num_subbands; ++b) {
      int ta = assignment.triplet_of_subband[a];
      int tb = assignment.triplet_of_subband[b];
      if (ta == kIdle && tb == kIdle) continue;
      if (ta == kIdle || tb == kIdle) {
        // A lone triplet only proposes a move to an idle sub-band it prefers.
        int mover = ta == kIdle ? tb : ta;
        int from = ta == kIdle ? b : a;
        int to = ta == kIdle ? a : b;
        if (!prefers(times, mover, to, from)) continue;
      }
      ++step.candidates_evaluated;
      if (!admissible(assignment, times, a, b)) continue;
      double m = max_time_after(assignment, times, a, b);
      if (!found || m < best_max) {
        found = true;
        best_max = m;
        best_a = a;
        best_b = b;
      }
    }
  }
  if (found) {
    std::swap(step.assignment.triplet_of_subband[best_a], step.assignment.triplet_of_subband[best_b]);
    step.changed = true;
    step.assignment.check();
  }
  return step;
}

bool has_admissible_swap(const Assignment& assignment, const MatrixD& times) {
  for (int a = 0; a < assignment.num_subbands(); ++a)
    for (int b = a + 1; b < assignment.num_subbands(); ++b)
      if (admissible(assignment, times, a, b)) return true;
  return false;
}

SwapRun swap_matching(Assignment assignment, const MatrixD& times, int max_iters) {
  SwapRun run;
  run.max_time_trace.push_back(max_time(assignment, times));
  while (run.iterations < max_iters) {
    auto step = swap_matching_round(assignment, times);
    run.candidates_per_iteration.push_back(step.candidates_evaluated);
    if (!step.changed) {
      run.fixed_point = true;
      break;
    }
    assignment = std::move(step.assignment);
    ++run.iterations;
    run.max_time_trace.push_back(max_time(assignment, times));
  }
  if (!run.fixed_point) run.fixed_point = !has_admissible_swap(assignment, times);
  run.assignment = std::move(assignment);
  return run;
}

SlotResult grid_search_alpha(const Matrix<LinkGain>& links, const LinkBudget& budget, double grid_step,
                             int swap_max_iters) {
  const int points = power_grid_points(grid_step);
  SlotResult best;
  best.delay_per_alpha.reserve(points);
  bool have = false;
  for (int i = 0; i < points; ++i) {
    const double alpha = i == points - 1 ? 1.0 : i * grid_step;
    auto times = noma_time_table(links, alpha, budget);
    auto initial = stable_marriage(build_preferences(times));
    auto swaps = swap_matching(std::move(initial), times, swap_max_iters);
    const double delay = max_time(swaps.assignment, times);
    best.delay_per_alpha.push_back(delay);
    if (!have || delay < best.max_time) {
      have = true;
      best.alpha_strong = alpha;
      best.assignment = swaps.assignment;
      best.noma_times = std::move(times);
      best.swaps = std::move(swaps);
      best.max_time = delay;
    }
  }
  return best;
}

int ScheduleOutcome::swap_iterations_used() const {
  int most = 0;
  for (const auto& r : rounds) most = std::max(most, r.swap_iterations);
  return most;
}

int ScheduleOutcome::max_candidates_per_iteration() const {
  int most = 0;
  for (const auto& r : rounds)
    for (int c : r.candidates_per_iteration) most = std::max(most, c);
  return most;
}

ExchangeSchedule schedule_exchange(const Topology& topology, const SimConfig& config, RandomSource& rng) {
  const auto& triplets = topology.triplets;
  if (triplets.empty()) throw std::invalid_argument("no triplet to schedule");
  const int num_subbands = config.num_subbands;
  if (num_subbands < 1) throw std::invalid_argument("num_subbands must be >= 1");
  const auto budget = link_budget(config);

  ExchangeSchedule out;
  std::vector<int> waiting(triplets.size());
  std::iota(waiting.begin(), waiting.end(), 0);

  for (int round = 0; !waiting.empty(); ++round) {
    auto all_links = sample_link_gains(topology, num_subbands, config, rng);
    Matrix<LinkGain> links(waiting.size(), num_subbands);
    for (std::size_t r = 0; r < waiting.size(); ++r)
      for (int n = 0; n < num_subbands; ++n) links(r, n) = all_links(waiting[r], n);

    auto slot = grid_search_alpha(links, budget, config.power_grid_step, config.swap_max_iters);
    slot.assignment.round = round;

    RoundOutcome noma;
    noma.round = round;
    noma.alpha_strong = slot.alpha_strong;
    noma.candidates = waiting;
    noma.candidate_links = links;
    noma.local_assignment = slot.assignment;
    noma.swap_iterations = slot.swaps.iterations;
    noma.swap_fixed_point = slot.swaps.fixed_point;
    noma.candidates_per_iteration = slot.swaps.candidates_per_iteration;
    noma.max_time_trace = slot.swaps.max_time_trace;
    noma.triplet_of_subband.assign(num_subbands, kIdle);
    noma.times_per_subband.assign(num_subbands, PairTimes{});
    RoundOutcome oma = noma;

    std::vector<int> served;
    for (int n = 0; n < num_subbands; ++n) {
      int local = slot.assignment.triplet_of_subband[n];
      if (local == kIdle) continue;
      auto link = make_pair_link(links(local, n), slot.alpha_strong, budget);
      auto nt = try_pair_completion_noma(link);
      auto ot = try_pair_completion_oma(link, budget.oma_power);
      constexpr PairTimes never{kInf, kInf, kInf};
      noma.times_per_subband[n] = nt.value_or(never);
      oma.times_per_subband[n] = ot.value_or(never);
      noma.triplet_of_subband[n] = oma.triplet_of_subband[n] = waiting[local];
      noma.t_max = std::max(noma.t_max, noma.times_per_subband[n].t_pair);
      oma.t_max = std::max(oma.t_max, oma.times_per_subband[n].t_pair);
      served.push_back(waiting[local]);
    }
    if (served.empty()) throw std::logic_error("scheduling slot served no triplet");
    out.noma.exchange_delay_total += noma.t_max;
    out.oma.exchange_delay_total += oma.t_max;
    out.noma.rounds.push_back(std::move(noma));
    out.oma.rounds.push_back(std::move(oma));

    std::erase_if(waiting, [&](int t) { return std::find(served.begin(), served.end(), t) != served.end(); });
  }
  return out;
}

void write_schedule_csv(const ScheduleOutcome& outcome, std::ostream& os) {
  auto old = os.precision(17);
  os << "round,sub_band,triplet,alpha,t_strong,t_weak,t_pair\n";
  for (const auto& r : outcome.rounds)
    for (std::size_t n = 0; n < r.triplet_of_subband.size(); ++n) {
      if (r.triplet_of_subband[n] == kIdle) continue;
      const auto& t = r.times_per_subband[n];
      os << r.round << ',' << n << ',' << r.triplet_of_subband[n] << ',' << r.alpha_strong << ',' << t.t_strong
         << ',' << t.t_weak << ',' << t.t_pair << '\n';
    }
  os.precision(old);
}

}  // namespace udnsync

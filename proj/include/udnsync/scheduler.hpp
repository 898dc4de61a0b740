#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "udnsync/channel.hpp"
#include "udnsync/config.hpp"
#include "udnsync/matrix.hpp"
#include "udnsync/noma.hpp"
#include "udnsync/random.hpp"
#include "udnsync/topology.hpp"

namespace udnsync {

/// Everything a pair-time evaluation needs besides gains and power split.
struct LinkBudget {
  double tx_power_w = 0.0;
  double noise_w = 0.0;
  double bandwidth_hz = 1.0;  // per sub-band
  double payload_bits = 0.0;
  OmaPower oma_power = OmaPower::split;
};

LinkBudget link_budget(const SimConfig& config);

/// PairLink for one (triplet, sub-band). The receiver with the larger |f|^2 on
/// this sub-band takes the strong role and alpha_strong; the other gets
/// 1 - alpha_strong.
PairLink make_pair_link(const LinkGain& gain, double alpha_strong, const LinkBudget& budget);

/// times(t, n): NOMA t_pair of triplet t on sub-band n, +inf where a rate is 0.
MatrixD noma_time_table(const Matrix<LinkGain>& links, double alpha_strong, const LinkBudget& budget);

/// Same for the serial comparator.
MatrixD oma_time_table(const Matrix<LinkGain>& links, double alpha_strong, const LinkBudget& budget);

struct Preferences {
  /// triplet_prefs[t]: sub-bands, most preferred first.
  std::vector<std::vector<int>> triplet_prefs;
  /// subband_prefs[n]: triplets, most preferred first.
  std::vector<std::vector<int>> subband_prefs;
};

/// Both sides rank by the pair completion time in the table, shorter first,
/// ties to the lower index.
Preferences build_preferences(const MatrixD& times);

Preferences build_preferences(const Matrix<LinkGain>& links, double alpha_strong, const LinkBudget& budget);

inline constexpr int kIdle = -1;

/// One slot's sub-band occupancy. Injective by construction: each sub-band
/// holds at most one triplet and a triplet appears at most once.
struct Assignment {
  std::vector<int> triplet_of_subband;  // kIdle when unused
  int round = 0;

  int num_subbands() const { return static_cast<int>(triplet_of_subband.size()); }
  /// Sub-band of triplet t, or kIdle.
  int subband_of(int triplet) const;
  std::vector<int> matched_triplets() const;
  /// Throws std::logic_error if a triplet occupies two sub-bands.
  void check() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Triplet-proposing deferred acceptance. With more triplets than sub-bands
/// the leftovers stay unmatched.
Assignment stable_marriage(const Preferences& prefs);

/// Largest completion time over occupied sub-bands (0 if none).
double max_time(const Assignment& assignment, const MatrixD& times);

struct SwapStep {
  Assignment assignment;
  bool changed = false;
  int candidates_evaluated = 0;
};

/// One swap iteration.
///
/// Candidates are exchanges of the occupants of two occupied sub-bands, plus
/// moves of a matched triplet to an idle sub-band it ranks above its current
/// one. A candidate is admissible when no touched triplet gets slower and at
/// least one gets strictly faster. The admissible candidate with the smallest
/// resulting max time is applied (ties to the lowest sub-band pair).
SwapStep swap_matching_round(const Assignment& assignment, const MatrixD& times);

/// Enumerates every exchange and relocation and returns true if any is
/// admissible. Used to confirm a fixed point.
bool has_admissible_swap(const Assignment& assignment, const MatrixD& times);

struct SwapRun {
  Assignment assignment;
  int iterations = 0;  // accepted swaps
  bool fixed_point = false;
  std::vector<int> candidates_per_iteration;
  /// Max time after the initial matching and after each accepted swap.
  std::vector<double> max_time_trace;
};

/// Applies swap_matching_round until nothing changes or max_iters swaps
/// were accepted.
SwapRun swap_matching(Assignment assignment, const MatrixD& times, int max_iters);

/// Best slot found by the power-split grid search.
struct SlotResult {
  double alpha_strong = 0.0;
  Assignment assignment;  // over the rows of the input links
  MatrixD noma_times;     // table at the chosen alpha
  SwapRun swaps;
  double max_time = 0.0;
  /// Slot max time for every grid point, in grid order.
  std::vector<double> delay_per_alpha;
};

/// For every alpha on {0, step, ..., 1}, applied to all triplets: stable
/// marriage, swap matching to a fixed point (or swap_max_iters), slot max
/// time. Returns the alpha with the smallest max time, lowest alpha on ties.
SlotResult grid_search_alpha(const Matrix<LinkGain>& links, const LinkBudget& budget, double grid_step,
                             int swap_max_iters);

struct RoundOutcome {
  int round = 0;
  double alpha_strong = 0.0;
  std::vector<int> candidates;        // global triplet ids offered to this slot
  Matrix<LinkGain> candidate_links;   // rows follow `candidates`
  Assignment local_assignment;        // indices into `candidates`
  std::vector<int> triplet_of_subband;  // global ids, kIdle when unused
  std::vector<PairTimes> times_per_subband;
  double t_max = 0.0;
  int swap_iterations = 0;
  bool swap_fixed_point = false;
  std::vector<int> candidates_per_iteration;
  std::vector<double> max_time_trace;
};

struct ScheduleOutcome {
  std::vector<RoundOutcome> rounds;
  double exchange_delay_total = 0.0;  // sum of round maxima

  int swap_iterations_used() const;  // max over rounds
  int max_candidates_per_iteration() const;
};

struct ExchangeSchedule {
  ScheduleOutcome noma;
  ScheduleOutcome oma;  // same rounds, sub-bands and power split, serial legs
};

/// Schedules every triplet of the topology. Each slot redraws link gains,
/// runs grid_search_alpha over the not-yet-served triplets and serves the
/// matched ones; the rest wait for later slots. The serial comparator is
/// evaluated on the same slots. Throws if the topology has no triplet.
ExchangeSchedule schedule_exchange(const Topology& topology, const SimConfig& config, RandomSource& rng);

/// CSV "round,sub_band,triplet,alpha,t_strong,t_weak,t_pair", one row per
/// occupied sub-band.
void write_schedule_csv(const ScheduleOutcome& outcome, std::ostream& os);

}  // namespace udnsync

#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "udnsync/clock.hpp"
#include "udnsync/config.hpp"
#include "udnsync/graph.hpp"
#include "udnsync/random.hpp"
#include "udnsync/topology.hpp"

namespace udnsync {

struct SnapshotTrace {
  std::vector<double> sd_per_iteration;  // seconds, one entry per applied update
  int iterations = 0;
  bool converged = false;
  double cf_mean = 0.0;  // connectivity factor averaged over the iterations

  double final_sd() const { return sd_per_iteration.empty() ? 0.0 : sd_per_iteration.back(); }
};

struct SyncTrace {
  std::vector<SnapshotTrace> snapshots;
  double mean_final_sd = 0.0;
  double mean_iterations = 0.0;  // n_avg
  double algorithmic_time = 0.0;  // n_avg * iter_period
  double cf_mean = 0.0;
};

/// Sample standard deviation (divisor K - 1). Throws for fewer than 2 clocks.
double timing_sd(std::span<const double> times);

/// t_k += eps * sum_j a_kj (t_j - t_k), all nodes from the pre-update vector.
std::vector<double> update_baseline(const ClockState& state, const InterferenceGraph& graph, double eps);

/// t_k += eps * sum_j ((a_kj + abar_jk) / 2) (t_j - t_k).
///
/// abar_jk comes from the remembered adjacency and counts only when j was both
/// an incoming and an outgoing neighbor of k in that snapshot; otherwise it is
/// zero. When a node's combined weights sum above one they are scaled to sum
/// to one, so every update stays a convex combination of current clocks.
/// Throws std::invalid_argument when the state has no memory.
std::vector<double> update_proposed(const ClockState& state, const InterferenceGraph& graph, double eps);

/// Replaces the snapshot memory with the given graph.
void remember(ClockState& state, const InterferenceGraph& graph);

/// Fresh fading draw and graph for the current topology.
InterferenceGraph draw_graph(const SimConfig& config, const Topology& topology, RandomSource& rng);

/// One synchronization period: redraw fading, rebuild the graph, apply the
/// proposed update and measure the spread until it falls to sd_tolerance or
/// max_iters updates were applied. Then stores the last adjacency as memory
/// and lets every clock drift by skew * 1e-6 * (iterations * iter_period).
///
/// Throws std::invalid_argument when max_iters < 1 ("no iteration budget").
SnapshotTrace run_snapshot(ClockState& state, const SimConfig& config, const Topology& topology,
                           RandomSource& rng);

/// Seeds the memory from an initial graph draw, then runs max_snapshots
/// snapshots and averages them.
SyncTrace run_sync(const SimConfig& config, const Topology& topology, ClockState state, RandomSource& rng);

/// As above with clocks from init_clocks().
SyncTrace run_sync(const SimConfig& config, const Topology& topology, RandomSource& rng);

/// CSV with header "snapshot,iteration,sd_seconds"; indices start at 1.
void write_trace_csv(const SyncTrace& trace, std::ostream& os);

}  // namespace udnsync

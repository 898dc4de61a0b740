#include "udnsync/consensus.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace udnsync {

double timing_sd(std::span<const double> times) {
  if (times.size() < 2) throw std::invalid_argument("timing_sd needs at least 2 clocks");
  double mean = 0.0;
  for (double t : times) mean += t;
  mean /= static_cast<double>(times.size());
  double ss = 0.0;
  for (double t : times) ss += (t - mean) * (t - mean);
  return std::sqrt(ss / static_cast<double>(times.size() - 1));
}

namespace {

constexpr double kWeightSlack = 1e-9;

void check_sizes(const ClockState& state, const InterferenceGraph& graph) {
  if (static_cast<int>(state.times.size()) != graph.num_nodes())
    throw std::invalid_argument("clock vector and graph sizes differ");
}

}  // namespace

std::vector<double> update_baseline(const ClockState& state, const InterferenceGraph& graph, double eps) {
  check_sizes(state, graph);
  const auto& t = state.times;
  std::vector<double> next(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    double acc = 0.0;
    for (int j : graph.in_neighbors[k]) acc += graph.adjacency(k, j) * (t[j] - t[k]);
    next[k] = t[k] + eps * acc;
  }
  return next;
}

std::vector<double> update_proposed(const ClockState& state, const InterferenceGraph& graph, double eps) {
  check_sizes(state, graph);
  if (!state.has_memory()) throw std::invalid_argument("update_proposed needs a remembered adjacency");
  const auto& t = state.times;
  const auto k_nodes = t.size();
  if (state.prev_adjacency.rows() != k_nodes) throw std::invalid_argument("memory size mismatch");
  const auto& abar = state.prev_adjacency;
  const auto& linked = state.prev_edges;
  std::vector<double> next(k_nodes);
  std::vector<double> w(k_nodes);
  for (std::size_t k = 0; k < k_nodes; ++k) {
    double total = 0.0;
    for (std::size_t j = 0; j < k_nodes; ++j) {
      if (j == k) {
        w[j] = 0.0;
        continue;
      }
      // j in prev N^I_k and prev N^O_k (k in prev N^I_j).
      double a_prev = (linked(k, j) && linked(j, k)) ? abar(j, k) : 0.0;
      w[j] = (graph.adjacency(k, j) + a_prev) / 2.0;
      total += w[j];
    }
    // Column sums of the memory can exceed one; scale back to a convex step.
    const double scale = total > 1.0 + kWeightSlack ? 1.0 / total : 1.0;
    double acc = 0.0;
    for (std::size_t j = 0; j < k_nodes; ++j)
      if (w[j] != 0.0) acc += scale * w[j] * (t[j] - t[k]);
    next[k] = t[k] + eps * acc;
  }
  return next;
}

void remember(ClockState& state, const InterferenceGraph& graph) {
  state.prev_adjacency = graph.adjacency;
  state.prev_edges = graph.edge_mask();
}

InterferenceGraph draw_graph(const SimConfig& config, const Topology& topology, RandomSource& rng) {
  auto gains = sample_interference_gains(topology.num_nodes(), config.fading, rng);
  return build_graph(config.tx_power_w(), topology, gains, config.path_loss_exp, config.power_threshold_w());
}

SnapshotTrace run_snapshot(ClockState& state, const SimConfig& config, const Topology& topology,
                           RandomSource& rng) {
  if (config.max_iters < 1) throw std::invalid_argument("no iteration budget: max_iters must be >= 1");
  if (state.num_nodes() != topology.num_nodes()) throw std::invalid_argument("clock state and topology sizes differ");

  SnapshotTrace trace;
  InterferenceGraph graph;
  double cf_sum = 0.0;
  while (true) {
    graph = draw_graph(config, topology, rng);
    cf_sum += connectivity_factor(graph);
    state.times = update_proposed(state, graph, config.step_size);
    ++trace.iterations;
    double sd = timing_sd(state.times);
    trace.sd_per_iteration.push_back(sd);
    if (sd <= config.sd_tolerance) {
      trace.converged = true;
      break;
    }
    if (trace.iterations >= config.max_iters) break;
  }
  trace.cf_mean = cf_sum / trace.iterations;

  remember(state, graph);
  const double elapsed = trace.iterations * config.iter_period;
  for (std::size_t k = 0; k < state.times.size(); ++k) state.times[k] += state.skews[k] * 1e-6 * elapsed;
  return trace;
}

SyncTrace run_sync(const SimConfig& config, const Topology& topology, ClockState state, RandomSource& rng) {
  if (config.max_snapshots < 1) throw std::invalid_argument("max_snapshots must be >= 1");
  remember(state, draw_graph(config, topology, rng));

  SyncTrace out;
  out.snapshots.reserve(config.max_snapshots);
  double sd_sum = 0.0;
  double n_sum = 0.0;
  double cf_sum = 0.0;
  for (int s = 0; s < config.max_snapshots; ++s) {
    out.snapshots.push_back(run_snapshot(state, config, topology, rng));
    const auto& snap = out.snapshots.back();
    sd_sum += snap.final_sd();
    n_sum += snap.iterations;
    cf_sum += snap.cf_mean;
  }
  const double count = static_cast<double>(out.snapshots.size());
  out.mean_final_sd = sd_sum / count;
  out.mean_iterations = n_sum / count;
  out.algorithmic_time = out.mean_iterations * config.iter_period;
  out.cf_mean = cf_sum / count;
  return out;
}

SyncTrace run_sync(const SimConfig& config, const Topology& topology, RandomSource& rng) {
  return run_sync(config, topology, init_clocks(config, rng), rng);
}

void write_trace_csv(const SyncTrace& trace, std::ostream& os) {
  auto old = os.precision(17);
  os << "snapshot,iteration,sd_seconds\n";
  for (std::size_t s = 0; s < trace.snapshots.size(); ++s) {
    const auto& sds = trace.snapshots[s].sd_per_iteration;
    for (std::size_t i = 0; i < sds.size(); ++i) os << s + 1 << ',' << i + 1 << ',' << sds[i] << '\n';
  }
  os.precision(old);
}

}  // namespace udnsync

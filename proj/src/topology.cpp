#include "udnsync/topology.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace udnsync {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Topology make_topology(std::vector<Point> positions, std::vector<Triplet> triplets) {
  const auto k = positions.size();
  Topology topo;
  topo.distances = MatrixD::square(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      double d = distance(positions[i], positions[j]);
      if (!(d > 0.0))
        throw std::invalid_argument("nodes " + std::to_string(i) + " and " + std::to_string(j) +
                                    " coincide");
      topo.distances(i, j) = d;
      topo.distances(j, i) = d;
    }
  }
  std::vector<int> seen(k, 0);
  for (const auto& t : triplets) {
    for (int node : {t.tx, t.strong_rx, t.weak_rx}) {
      if (node < 0 || static_cast<std::size_t>(node) >= k)
        throw std::invalid_argument("triplet node index out of range");
      if (seen[node]++)
        throw std::invalid_argument("node " + std::to_string(node) + " used by two triplet roles");
    }
    if (!(topo.distances(t.tx, t.strong_rx) < topo.distances(t.tx, t.weak_rx)))
      throw std::invalid_argument("strong receiver must be closer than weak receiver");
  }
  topo.positions = std::move(positions);
  topo.triplets = std::move(triplets);
  return topo;
}

namespace {

Point polar(Point origin, double radius, double bearing) {
  return {origin.x + radius * std::cos(bearing), origin.y + radius * std::sin(bearing)};
}

Point uniform_in_disk(double radius, RandomSource& rng) {
  // Area-uniform: radius ~ R * sqrt(U).
  double r = radius * std::sqrt(rng.uniform(0.0, 1.0));
  return polar({}, r, rng.uniform(0.0, 2.0 * std::numbers::pi));
}

}  // namespace

Topology place_nodes(const SimConfig& config, RandomSource& rng) {
  const int k = config.num_nodes;
  if (k < 3) throw std::invalid_argument("insufficient nodes: at least 3 are needed to form a triplet");
  const double near = config.near_radius_m;
  const double far = config.far_radius_m;
  if (!(near > 0.0) || !(near < far) || !std::isfinite(far))
    throw std::invalid_argument("degenerate radii: need 0 < near_radius_m < far_radius_m");

  std::vector<Point> positions(k);
  std::vector<Triplet> triplets;
  const int num_triplets = k / 3;
  triplets.reserve(num_triplets);
  for (int t = 0; t < num_triplets; ++t) {
    const int tx = 3 * t;
    positions[tx] = uniform_in_disk(far, rng);
    double d_strong = near * rng.uniform_open_closed();
    double d_weak = near + (far - near) * rng.uniform_open_closed();
    positions[tx + 1] = polar(positions[tx], d_strong, rng.uniform(0.0, 2.0 * std::numbers::pi));
    positions[tx + 2] = polar(positions[tx], d_weak, rng.uniform(0.0, 2.0 * std::numbers::pi));
    triplets.push_back({tx, tx + 1, tx + 2});
  }
  for (int i = 3 * num_triplets; i < k; ++i) positions[i] = uniform_in_disk(far, rng);
  return make_topology(std::move(positions), std::move(triplets));
}

double tcxo_skew_ppm(double temp_c, double beta_ppm_per_c2) {
  double dt = temp_c - kDriftReferenceTempC;
  return beta_ppm_per_c2 * dt * dt;
}

ClockState init_clocks(const SimConfig& config, RandomSource& rng) {
  const auto k = static_cast<std::size_t>(config.num_nodes);
  ClockState state;
  state.times.resize(k);
  state.skews.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    state.times[i] = config.init_offset_max > 0.0 ? rng.uniform(0.0, config.init_offset_max) : 0.0;
    double temp = config.temp_min_c < config.temp_max_c
                      ? rng.uniform(config.temp_min_c, config.temp_max_c)
                      : config.temp_min_c;
    state.skews[i] = tcxo_skew_ppm(temp, config.temp_coeff_ppm_c2);
  }
  return state;
}

}  // namespace udnsync

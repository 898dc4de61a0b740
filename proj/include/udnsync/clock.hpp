#pragma once

#include <cstdint>
#include <vector>

#include "udnsync/matrix.hpp"

namespace udnsync {

/// Per-node clocks plus the adjacency remembered from the last snapshot.
struct ClockState {
  std::vector<double> times;  // seconds
  std::vector<double> skews;  // ppm
  /// Adjacency weights of the last synchronized snapshot.
  MatrixD prev_adjacency;
  /// prev_edges(i, j) != 0 iff j was an incoming neighbor of i in that snapshot.
  Matrix<std::uint8_t> prev_edges;

  int num_nodes() const { return static_cast<int>(times.size()); }
  bool has_memory() const { return !prev_adjacency.empty(); }
};

}  // namespace udnsync

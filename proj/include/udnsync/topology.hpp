#pragma once

#include <vector>

#include "udnsync/clock.hpp"
#include "udnsync/config.hpp"
#include "udnsync/matrix.hpp"
#include "udnsync/random.hpp"

namespace udnsync {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b);

/// One transmitter and its two receivers for the exchange phase.
/// The strong receiver sits in the near tier of the transmitter, the weak
/// receiver in the far tier.
struct Triplet {
  int tx = 0;
  int strong_rx = 0;
  int weak_rx = 0;
  friend bool operator==(const Triplet&, const Triplet&) = default;
};

struct Topology {
  std::vector<Point> positions;
  MatrixD distances;
  std::vector<Triplet> triplets;

  int num_nodes() const { return static_cast<int>(positions.size()); }
  friend bool operator==(const Topology&, const Topology&) = default;
};

/// Builds a Topology from explicit positions and triplets; computes the
/// distance matrix and checks the triplet invariants.
Topology make_topology(std::vector<Point> positions, std::vector<Triplet> triplets);

/// Two-tier placement around the origin.
///
/// Node 3t is the transmitter of triplet t, placed uniformly over the disk of
/// radius far_radius_m. Its strong receiver is at a distance uniform in
/// (0, near_radius_m] and its weak receiver at a distance uniform in
/// (near_radius_m, far_radius_m], both at uniform bearings. The K mod 3
/// leftover nodes are placed uniformly over the disk; they take part in
/// consensus only.
Topology place_nodes(const SimConfig& config, RandomSource& rng);

/// Oscillator drift reference temperature (turnover point), deg C.
inline constexpr double kDriftReferenceTempC = 25.0;

/// skew [ppm] = beta * (temp - 25)^2.
double tcxo_skew_ppm(double temp_c, double beta_ppm_per_c2);

/// Offsets uniform on [0, init_offset_max]; skews from temperatures uniform on
/// [temp_min_c, temp_max_c]. Adjacency memory is left empty.
ClockState init_clocks(const SimConfig& config, RandomSource& rng);

}  // namespace udnsync

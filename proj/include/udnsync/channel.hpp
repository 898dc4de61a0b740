#pragma once

#include <vector>

#include "udnsync/config.hpp"
#include "udnsync/matrix.hpp"
#include "udnsync/random.hpp"
#include "udnsync/topology.hpp"

namespace udnsync {

/// |f|^2 for the two receivers of one triplet on one sub-band, path loss included.
struct LinkGain {
  double strong = 0.0;
  double weak = 0.0;
};

/// Fading draws for one consensus iteration (interference gains) or one
/// scheduling slot (link gains).
struct ChannelRealization {
  /// interference_gains(i, j): small-scale power gain from node j to node i.
  /// Diagonal unused (zero).
  MatrixD interference_gains;
  /// link_gains(t, n): triplet t on sub-band n.
  Matrix<LinkGain> link_gains;
};

/// Throws std::invalid_argument on a non-positive Rayleigh mean or a
/// Nakagami shape below 0.5.
void check_fading(const FadingSpec& fading);

/// One power gain. Rayleigh: Exponential(mean). Nakagami: Gamma(m, 1/m).
double sample_gain(const FadingSpec& fading, RandomSource& rng);

/// p_t * gain * dist^-alpha. Throws on dist <= 0.
double received_power(double p_t_watts, double gain, double dist_m, double alpha);

/// Thermal noise over one sub-band: density [W/Hz] * B_sys / N.
double noise_power(const SimConfig& config);

/// Independent gain for every ordered pair i != j.
MatrixD sample_interference_gains(int num_nodes, const FadingSpec& fading, RandomSource& rng);

/// Independent |f|^2 per (triplet, sub-band, receiver): fading times
/// d(tx, rx)^-alpha.
Matrix<LinkGain> sample_link_gains(const Topology& topology, int num_subbands, const SimConfig& config,
                                   RandomSource& rng);

}  // namespace udnsync

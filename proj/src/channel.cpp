#include "udnsync/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace udnsync {

void check_fading(const FadingSpec& fading) {
  if (fading.kind == FadingKind::rayleigh) {
    if (!(fading.rayleigh_mean > 0.0) || !std::isfinite(fading.rayleigh_mean))
      throw std::invalid_argument("rayleigh mean must be positive and finite");
  } else if (!(fading.nakagami_m >= 0.5) || !std::isfinite(fading.nakagami_m)) {
    throw std::invalid_argument("nakagami shape m must be >= 0.5");
  }
}

double sample_gain(const FadingSpec& fading, RandomSource& rng) {
  check_fading(fading);
  if (fading.kind == FadingKind::rayleigh) return rng.exponential(fading.rayleigh_mean);
  return rng.gamma(fading.nakagami_m, 1.0 / fading.nakagami_m);
}

double received_power(double p_t_watts, double gain, double dist_m, double alpha) {
  if (!(dist_m > 0.0)) throw std::invalid_argument("distance must be positive");
  return p_t_watts * gain * std::pow(dist_m, -alpha);
}

double noise_power(const SimConfig& config) {
  return dbm_to_watts(config.noise_density_dbm_hz) * config.subband_bandwidth_hz();
}

MatrixD sample_interference_gains(int num_nodes, const FadingSpec& fading, RandomSource& rng) {
  check_fading(fading);
  auto k = static_cast<std::size_t>(num_nodes);
  auto gains = MatrixD::square(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j) gains(i, j) = sample_gain(fading, rng);
  return gains;
}

Matrix<LinkGain> sample_link_gains(const Topology& topology, int num_subbands, const SimConfig& config,
                                   RandomSource& rng) {
  check_fading(config.fading);
  const auto& trips = topology.triplets;
  Matrix<LinkGain> gains(trips.size(), static_cast<std::size_t>(num_subbands));
  for (std::size_t t = 0; t < trips.size(); ++t) {
    double loss_strong = std::pow(topology.distances(trips[t].tx, trips[t].strong_rx), -config.path_loss_exp);
    double loss_weak = std::pow(topology.distances(trips[t].tx, trips[t].weak_rx), -config.path_loss_exp);
    for (std::size_t n = 0; n < gains.cols(); ++n) {
      gains(t, n).strong = sample_gain(config.fading, rng) * loss_strong;
      gains(t, n).weak = sample_gain(config.fading, rng) * loss_weak;
    }
  }
  return gains;
}

}  // namespace udnsync

#pragma once

#include <optional>

#include "udnsync/config.hpp"

namespace udnsync {

/// One transmitter serving a strong and a weak receiver on one sub-band.
struct PairLink {
  double gain_strong = 0.0;  // |f_i|^2
  double gain_weak = 0.0;    // |f_j|^2
  double alpha_strong = 0.0;
  double alpha_weak = 0.0;
  double noise = 0.0;         // watts
  double tx_power = 0.0;      // watts
  double bandwidth_hz = 1.0;  // sub-band bandwidth
  double payload_bits = 0.0;
};

struct PairTimes {
  double t_strong = 0.0;
  double t_weak = 0.0;
  double t_pair = 0.0;
};

/// Throws std::invalid_argument unless gain_strong >= gain_weak >= 0,
/// both alphas are non-negative with sum <= 1, and noise, power, bandwidth
/// and payload are non-negative / positive as appropriate.
void check_link(const PairLink& link);

/// Strong receiver with the weak receiver's signal as co-channel interference:
/// g_i a_i P / (g_i a_j P + noise).
double sinr_strong(const PairLink& link);

/// Weak receiver, interference-free: g_j a_j P / noise.
double sinr_weak(const PairLink& link);

/// Strong receiver once the sub-band is its own, power share unchanged:
/// g_i a_i P / noise.
double sinr_strong_alone(const PairLink& link);

/// bandwidth * log2(1 + sinr), bits/s.
double rate(double sinr, double bandwidth_hz);

/// Superposed transmission. The weak leg takes L / R_j. The strong leg runs
/// at R_i until it finishes or until the weak leg completes, after which the
/// remaining bits go at the interference-free rate. t_pair is the later of the
/// two. Throws std::domain_error ("infinite completion") if a needed rate is 0.
PairTimes pair_completion_noma(const PairLink& link);

/// As pair_completion_noma but returns nullopt where that would throw.
std::optional<PairTimes> try_pair_completion_noma(const PairLink& link);

/// Serial transmission, strong leg then weak leg, each interference-free.
/// With OmaPower::full each leg uses the whole transmit power; with
/// OmaPower::split each leg keeps its power share. t_pair is the sum.
/// Throws std::domain_error when a leg rate is 0.
PairTimes pair_completion_oma(const PairLink& link, OmaPower power = OmaPower::full);

std::optional<PairTimes> try_pair_completion_oma(const PairLink& link, OmaPower power = OmaPower::full);

}  // namespace udnsync

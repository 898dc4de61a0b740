#include "udnsync/noma.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace udnsync {

void check_link(const PairLink& l) {
  if (!(l.gain_weak >= 0.0)) throw std::invalid_argument("link gains must be non-negative");
  if (!(l.gain_strong >= l.gain_weak)) throw std::invalid_argument("strong receiver gain below weak receiver gain");
  if (!(l.alpha_strong >= 0.0) || !(l.alpha_weak >= 0.0))
    throw std::invalid_argument("power coefficients must be non-negative");
  if (l.alpha_strong + l.alpha_weak > 1.0 + 1e-12)
    throw std::invalid_argument("power coefficients must sum to at most 1");
  if (!(l.noise >= 0.0) || !(l.tx_power >= 0.0)) throw std::invalid_argument("noise and power must be non-negative");
  if (!(l.bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  if (!(l.payload_bits > 0.0)) throw std::invalid_argument("payload must be positive");
}

namespace {

double ratio(double signal, double denom) {
  if (denom == 0.0) throw std::invalid_argument("SINR undefined: zero noise and zero interference");
  return signal / denom;
}

}  // namespace

double sinr_strong(const PairLink& l) {
  check_link(l);
  return ratio(l.gain_strong * l.alpha_strong * l.tx_power,
               l.gain_strong * l.alpha_weak * l.tx_power + l.noise);
}

double sinr_weak(const PairLink& l) {
  check_link(l);
  if (!(l.noise > 0.0)) throw std::invalid_argument("weak-receiver SINR needs positive noise");
  return l.gain_weak * l.alpha_weak * l.tx_power / l.noise;
}

double sinr_strong_alone(const PairLink& l) {
  check_link(l);
  if (!(l.noise > 0.0)) throw std::invalid_argument("interference-free SINR needs positive noise");
  return l.gain_strong * l.alpha_strong * l.tx_power / l.noise;
}

double rate(double sinr, double bandwidth_hz) {
  if (!(sinr >= 0.0)) throw std::invalid_argument("SINR must be non-negative");
  return bandwidth_hz * std::log2(1.0 + sinr);
}

std::optional<PairTimes> try_pair_completion_noma(const PairLink& l) {
  const double r_strong = rate(sinr_strong(l), l.bandwidth_hz);
  const double r_weak = rate(sinr_weak(l), l.bandwidth_hz);
  const double r_alone = rate(sinr_strong_alone(l), l.bandwidth_hz);
  if (!(r_strong > 0.0) || !(r_weak > 0.0) || !(r_alone > 0.0)) return std::nullopt;

  const double bits = l.payload_bits;
  PairTimes out;
  out.t_weak = bits / r_weak;
  if (bits / r_strong <= out.t_weak)
    out.t_strong = bits / r_strong;
  else
    out.t_strong = out.t_weak + (bits - r_strong * out.t_weak) / r_alone;
  out.t_pair = std::max(out.t_strong, out.t_weak);
  return out;
}

PairTimes pair_completion_noma(const PairLink& link) {
  auto t = try_pair_completion_noma(link);
  if (!t) throw std::domain_error("infinite completion: a NOMA rate is zero");
  return *t;
}

std::optional<PairTimes> try_pair_completion_oma(const PairLink& l, OmaPower power) {
  check_link(l);
  if (!(l.noise > 0.0)) throw std::invalid_argument("OMA SINR needs positive noise");
  const double share_strong = power == OmaPower::full ? 1.0 : l.alpha_strong;
  const double share_weak = power == OmaPower::full ? 1.0 : l.alpha_weak;
  const double r_strong = rate(l.gain_strong * share_strong * l.tx_power / l.noise, l.bandwidth_hz);
  const double r_weak = rate(l.gain_weak * share_weak * l.tx_power / l.noise, l.bandwidth_hz);
  if (!(r_strong > 0.0) || !(r_weak > 0.0)) return std::nullopt;
  PairTimes out;
  out.t_strong = l.payload_bits / r_strong;
  out.t_weak = l.payload_bits / r_weak;
  out.t_pair = out.t_strong + out.t_weak;
  return out;
}

PairTimes pair_completion_oma(const PairLink& link, OmaPower power) {
  auto t = try_pair_completion_oma(link, power);
  if (!t) throw std::domain_error("infinite completion: an OMA leg rate is zero");
  return *t;
}

}  // namespace udnsync

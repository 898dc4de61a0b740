#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace udnsync {

/// P[W] = 10^((P[dBm] - 30) / 10). -inf dBm maps to 0 W.
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

enum class FadingKind { rayleigh, nakagami };

/// Small-scale fading of a power gain |h|^2.
///
/// Rayleigh: exponential with the given mean. Nakagami: gamma power gain with
/// shape m and unit mean, so only the fading depth changes with m.
struct FadingSpec {
  FadingKind kind = FadingKind::rayleigh;
  double rayleigh_mean = 1.0;
  double nakagami_m = 1.0;

  static FadingSpec rayleigh(double mean) { return {FadingKind::rayleigh, mean, 1.0}; }
  static FadingSpec nakagami(double m) { return {FadingKind::nakagami, 1.0, m}; }
};

/// How the serial (OMA) comparator powers its two legs.
enum class OmaPower {
  /// Each leg keeps its NOMA power share (alpha * P_s), as in the post-SIC
  /// "OMA" rate of the strong receiver.
  split,
  /// Each leg uses the full transmit power.
  full,
};

struct SimConfig {
  int num_nodes = 60;
  int num_subbands = 5;
  double tx_power_dbm = 23.0;
  double power_threshold_dbm = -110.0;
  double path_loss_exp = 4.0;
  double step_size = 0.9;
  double sd_tolerance = 1e-6;  // seconds
  int max_iters = 5000;
  int max_snapshots = 500;
  int swap_max_iters = 100;
  double power_grid_step = 0.0025;
  double system_bandwidth_hz = 180e3;  // one NB-IoT carrier
  double noise_density_dbm_hz = -174.0;
  double payload_bits = 8192.0;
  FadingSpec fading{};
  double near_radius_m = 10.0;
  double far_radius_m = 100.0;
  double init_offset_max = 40e-6;  // seconds
  double temp_min_c = 0.0;
  double temp_max_c = 50.0;
  double temp_coeff_ppm_c2 = -0.042;
  double iter_period = 1e-3;  // seconds per consensus iteration
  OmaPower oma_power = OmaPower::split;
  std::uint64_t rng_seed = 1;

  double tx_power_w() const { return dbm_to_watts(tx_power_dbm); }
  double power_threshold_w() const { return dbm_to_watts(power_threshold_dbm); }
  double subband_bandwidth_hz() const { return system_bandwidth_hz / num_subbands; }
  int num_triplets() const { return num_nodes / 3; }
};

/// Throws std::invalid_argument naming the first violated constraint.
void validate(const SimConfig& config);

/// Number of points on the inclusive grid {0, step, ..., 1}.
/// Throws if step does not divide 1 within 1e-9.
int power_grid_points(double step);

/// Parses a double, accepting "inf", "-inf" and "+inf".
double parse_double(std::string_view text);

/// Sets one SimConfig field from its textual value. Returns false for unknown
/// keys; throws std::invalid_argument for malformed values.
bool apply_config_key(SimConfig& config, std::string_view key, std::string_view value);

/// Parses `key = value` lines. '#' starts a comment; blank lines are skipped.
/// Throws std::invalid_argument with the line number on malformed lines or
/// duplicate keys.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Parses a config file body consisting only of SimConfig keys.
SimConfig parse_config(std::string_view text);

/// Writes every SimConfig key, one per line, in parseable form.
std::string format_config(const SimConfig& config);

}  // namespace udnsync

#include "udnsync/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace udnsync {

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("invalid config: ") + what);
}

int parse_int(std::string_view text) {
  text = trim(text);
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  return v;
}

std::uint64_t parse_u64(std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("not an unsigned integer: '" + std::string(text) + "'");
  return v;
}

}  // namespace

double parse_double(std::string_view text) {
  text = trim(text);
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (text == "inf" || text == "+inf") return inf;
  if (text == "-inf") return -inf;
  // from_chars for double is missing from older libstdc++; strtod is fine here.
  std::string buf(text);
  char* end = nullptr;
  double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size())
    throw std::invalid_argument("not a number: '" + buf + "'");
  return v;
}

int power_grid_points(double step) {
  if (!(step > 0.0) || step > 1.0) throw std::invalid_argument("empty power grid");
  double intervals = 1.0 / step;
  double rounded = std::round(intervals);
  if (std::abs(intervals - rounded) > 1e-9 * std::max(1.0, rounded))
    throw std::invalid_argument("power_grid_step must divide 1 evenly");
  return static_cast<int>(rounded) + 1;
}

void validate(const SimConfig& c) {
  require(c.num_nodes >= 2, "num_nodes must be >= 2");
  require(c.num_subbands >= 1, "num_subbands must be >= 1");
  require(c.step_size > 0.0 && c.step_size < 1.0, "step_size must lie in (0, 1)");
  require(c.sd_tolerance > 0.0, "sd_tolerance must be > 0");
  require(c.max_iters >= 1, "max_iters must be >= 1");
  require(c.max_snapshots >= 1, "max_snapshots must be >= 1");
  require(c.swap_max_iters >= 1, "swap_max_iters must be >= 1");
  require(c.power_grid_step > 0.0, "power_grid_step must be > 0");
  power_grid_points(c.power_grid_step);
  require(c.system_bandwidth_hz > 0.0, "system_bandwidth_hz must be > 0");
  require(c.payload_bits > 0.0, "payload_bits must be > 0");
  require(c.path_loss_exp > 0.0, "path_loss_exp must be > 0");
  require(std::isfinite(c.tx_power_dbm), "tx_power_dbm must be finite");
  require(!std::isnan(c.power_threshold_dbm), "power_threshold_dbm must be a number");
  require(!std::isnan(c.noise_density_dbm_hz) && c.noise_density_dbm_hz < 
              std::numeric_limits<double>::infinity(),
          "noise_density_dbm_hz must be finite or -inf");
  if (c.fading.kind == FadingKind::rayleigh)
    require(c.fading.rayleigh_mean > 0.0, "rayleigh mean must be > 0");
  else
    require(c.fading.nakagami_m >= 0.5, "nakagami shape must be >= 0.5");
  require(c.near_radius_m > 0.0, "near_radius_m must be > 0");
  require(c.near_radius_m < c.far_radius_m, "near_radius_m must be < far_radius_m");
  require(c.init_offset_max >= 0.0, "init_offset_max must be >= 0");
  require(c.temp_min_c <= c.temp_max_c, "temp_min_c must be <= temp_max_c");
  require(c.iter_period > 0.0, "iter_period must be > 0");
}

bool apply_config_key(SimConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "num_nodes") c.num_nodes = parse_int(value);
  else if (key == "num_subbands") c.num_subbands = parse_int(value);
  else if (key == "tx_power_dbm") c.tx_power_dbm = parse_double(value);
  else if (key == "power_threshold_dbm") c.power_threshold_dbm = parse_double(value);
  else if (key == "path_loss_exp") c.path_loss_exp = parse_double(value);
  else if (key == "step_size") c.step_size = parse_double(value);
  else if (key == "sd_tolerance") c.sd_tolerance = parse_double(value);
  else if (key == "max_iters") c.max_iters = parse_int(value);
  else if (key == "max_snapshots") c.max_snapshots = parse_int(value);
  else if (key == "swap_max_iters") c.swap_max_iters = parse_int(value);
  else if (key == "power_grid_step") c.power_grid_step = parse_double(value);
  else if (key == "system_bandwidth_hz") c.system_bandwidth_hz = parse_double(value);
  else if (key == "noise_density_dbm_hz") c.noise_density_dbm_hz = parse_double(value);
  else if (key == "payload_bits") c.payload_bits = parse_double(value);
  else if (key == "fading") {
    if (value == "rayleigh") c.fading.kind = FadingKind::rayleigh;
    else if (value == "nakagami") c.fading.kind = FadingKind::nakagami;
    else throw std::invalid_argument("fading must be 'rayleigh' or 'nakagami'");
  }
  else if (key == "rayleigh_mean") c.fading.rayleigh_mean = parse_double(value);
  else if (key == "nakagami_m") c.fading.nakagami_m = parse_double(value);
  else if (key == "near_radius_m") c.near_radius_m = parse_double(value);
  else if (key == "far_radius_m") c.far_radius_m = parse_double(value);
  else if (key == "init_offset_max") c.init_offset_max = parse_double(value);
  else if (key == "temp_min_c") c.temp_min_c = parse_double(value);
  else if (key == "temp_max_c") c.temp_max_c = parse_double(value);
  else if (key == "temp_coeff_ppm_c2") c.temp_coeff_ppm_c2 = parse_double(value);
  else if (key == "iter_period") c.iter_period = parse_double(value);
  else if (key == "oma_power") {
    if (value == "split") c.oma_power = OmaPower::split;
    else if (value == "full") c.oma_power = OmaPower::full;
    else throw std::invalid_argument("oma_power must be 'split' or 'full'");
  }
  else if (key == "rng_seed") c.rng_seed = parse_u64(value);
  else return false;
  return true;
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty())
      throw std::invalid_argument("line " + std::to_string(line_no) + ": empty key");
    if (!out.emplace(key, value).second)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
  }
  return out;
}

SimConfig parse_config(std::string_view text) {
  SimConfig config;
  for (const auto& [key, value] : parse_key_values(text)) {
    if (!apply_config_key(config, key, value))
      throw std::invalid_argument("unknown config key '" + key + "'");
  }
  return config;
}

std::string format_config(const SimConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "num_nodes = " << c.num_nodes << '\n'
     << "num_subbands = " << c.num_subbands << '\n'
     << "tx_power_dbm = " << c.tx_power_dbm << '\n'
     << "power_threshold_dbm = " << c.power_threshold_dbm << '\n'
     << "path_loss_exp = " << c.path_loss_exp << '\n'
     << "step_size = " << c.step_size << '\n'
     << "sd_tolerance = " << c.sd_tolerance << '\n'
     << "max_iters = " << c.max_iters << '\n'
     << "max_snapshots = " << c.max_snapshots << '\n'
     << "swap_max_iters = " << c.swap_max_iters << '\n'
     << "power_grid_step = " << c.power_grid_step << '\n'
     << "system_bandwidth_hz = " << c.system_bandwidth_hz << '\n'
     << "noise_density_dbm_hz = " << c.noise_density_dbm_hz << '\n'
     << "payload_bits = " << c.payload_bits << '\n'
     << "fading = " << (c.fading.kind == FadingKind::rayleigh ? "rayleigh" : "nakagami") << '\n'
     << "rayleigh_mean = " << c.fading.rayleigh_mean << '\n'
     << "nakagami_m = " << c.fading.nakagami_m << '\n'
     << "near_radius_m = " << c.near_radius_m << '\n'
     << "far_radius_m = " << c.far_radius_m << '\n'
     << "init_offset_max = " << c.init_offset_max << '\n'
     << "temp_min_c = " << c.temp_min_c << '\n'
     << "temp_max_c = " << c.temp_max_c << '\n'
     << "temp_coeff_ppm_c2 = " << c.temp_coeff_ppm_c2 << '\n'
     << "iter_period = " << c.iter_period << '\n'
     << "oma_power = " << (c.oma_power == OmaPower::split ? "split" : "full") << '\n'
     << "rng_seed = " << c.rng_seed << '\n';
  return os.str();
}

}  // namespace udnsync

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "udnsync/config.hpp"

namespace udnsync {

enum class SweepParam { power_threshold, num_nodes, num_subbands, fading_mean, nakagami_m };

std::string_view to_string(SweepParam p);
SweepParam parse_sweep_param(std::string_view text);

/// Axis label with units for a swept parameter.
std::string_view sweep_axis_label(SweepParam p);

struct ExperimentSpec {
  std::string name = "experiment";
  SweepParam sweep = SweepParam::power_threshold;
  std::vector<double> values;
  int replications = 1;
  SimConfig base;
  std::filesystem::path output_dir = "out";
  /// Worker threads for replications; 0 picks the hardware concurrency.
  int threads = 0;
};

/// Throws std::invalid_argument when the sweep is empty, replications < 1 or
/// the base config is invalid.
void validate(const ExperimentSpec& spec);

/// Base config with the swept parameter set to `value`.
SimConfig config_for(const ExperimentSpec& spec, double value);

/// One replication at one sweep value.
struct ReplicationRecord {
  bool ok = false;
  std::string error;
  double cf = 0.0;
  double n_avg = 0.0;
  double algorithmic_time = 0.0;
  double exchange_noma = 0.0;
  double exchange_oma = 0.0;
  int swap_iterations = 0;  // first slot, at the chosen power split
  int rounds = 0;
};

/// Runs every (sweep value, replication) pair. Replication r draws from
/// RandomSource(base.rng_seed).derive({r}) at every sweep value, so the sweep
/// points share random numbers. Records come back indexed
/// [value][replication] whatever the thread count.
std::vector<std::vector<ReplicationRecord>> run_replications(const ExperimentSpec& spec);

/// Aggregated sweep point. All times in seconds.
struct ResultRow {
  double sweep_value = 0.0;
  double cf_mean = 0.0;
  double n_avg = 0.0;
  double algorithmic_time = 0.0;
  double exchange_delay_noma = 0.0;
  double exchange_delay_oma = 0.0;
  double t_sync_noma = 0.0;
  double t_sync_oma = 0.0;
  double noma_gain_pct = 0.0;
  double t_sync_noma_ci95 = 0.0;
  double t_sync_oma_ci95 = 0.0;
  int replications_ok = 0;
  std::string error;  // empty unless the sweep point failed
};

/// Means over successful replications. t_sync = algorithmic time + exchange
/// delay; gain = 100 (oma - noma) / oma on the t_sync means; CI half-widths
/// are 1.96 standard errors. A sweep point with any failed replication
/// becomes a failure row carrying the first error and NaN metrics.
ResultRow aggregate(double sweep_value, const std::vector<ReplicationRecord>& records);

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

/// Header plus one line per row, '.' decimals, 17 significant digits.
void emit_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
std::string format_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_csv(std::string_view text);

struct PlotStyle {
  std::string title;
  std::string x_label;
  std::string y_label = "Network synchronization time (s)";
};

/// SVG line chart of t_sync against the sweep value, one polyline for NOMA
/// and one for OMA. Non-finite points are skipped with a warning on stderr.
/// Throws std::invalid_argument for fewer than two rows.
void emit_plot(const std::vector<ResultRow>& rows, const std::filesystem::path& path, const PlotStyle& style);
std::string render_plot(const std::vector<ResultRow>& rows, const PlotStyle& style);

/// Empirical CDF of first-slot swap iterations, one step series per sweep
/// value. Used for the sub-band sweep of swap convergence.
std::string render_cdf_plot(const std::vector<double>& sweep_values, const std::vector<std::vector<int>>& samples,
                            const PlotStyle& style);

/// Reads a scenario file: SimConfig keys plus `scenario`, `sweep`, `values`
/// (comma separated), `replications` and `threads`.
ExperimentSpec parse_experiment(std::string_view text);

/// Built-in sweeps. Desk scale unless `full_scale`, which switches to the
/// published network sizes and iteration budgets.
std::vector<ExperimentSpec> preset(std::string_view name, const SimConfig& base, bool full_scale);

}  // namespace udnsync

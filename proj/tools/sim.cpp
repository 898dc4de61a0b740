// Command-line driver for sweeps: `sim run` and `sim validate`.

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "udnsync/harness.hpp"

namespace fs = std::filesystem;
using namespace udnsync;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentSpec load(const fs::path& path) {
  try {
    return parse_experiment(read_file(path));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  os << text;
  if (!os) throw std::runtime_error("failed writing '" + path.string() + "'");
}

struct RunOptions {
  std::string scenario;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> replications;
  std::optional<int> threads;
  std::string preset_name;
  bool full_scale = false;
};

// Returns the number of failed sweep points.
int run_one(ExperimentSpec spec, const RunOptions& opt) {
  validate(spec);
  fs::create_directories(spec.output_dir);
  std::cerr << "running " << spec.name << ": " << to_string(spec.sweep) << " over " << spec.values.size()
            << " values, " << spec.replications << " replications\n";

  auto records = run_replications(spec);
  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < records.size(); ++i) rows.push_back(aggregate(spec.values[i], records[i]));

  const auto csv = spec.output_dir / (spec.name + ".csv");
  emit_csv(rows, csv);
  std::cout << csv.string() << '\n';

  int failed = 0;
  for (const auto& r : rows)
    if (!r.error.empty()) {
      ++failed;
      std::cerr << "sweep value " << r.sweep_value << " failed: " << r.error << '\n';
    }

  PlotStyle style;
  style.title = spec.name;
  style.x_label = std::string(sweep_axis_label(spec.sweep));
  if (rows.size() >= 2) {
    const auto svg = spec.output_dir / (spec.name + ".svg");
    emit_plot(rows, svg, style);
    std::cout << svg.string() << '\n';
  }

  if (opt.preset_name == "fig8") {
    std::vector<std::vector<int>> samples;
    for (const auto& per_value : records) {
      std::vector<int> s;
      for (const auto& rec : per_value)
        if (rec.ok) s.push_back(rec.swap_iterations);
      samples.push_back(std::move(s));
    }
    PlotStyle cdf{spec.name + " swap iterations", "Swap iterations", "CDF"};
    const auto path = spec.output_dir / (spec.name + "_cdf.svg");
    write_text(path, render_cdf_plot(spec.values, samples, cdf));
    std::cout << path.string() << '\n';
  }
  return failed;
}

int cmd_run(const RunOptions& opt) {
  std::vector<ExperimentSpec> specs;
  ExperimentSpec file_spec;
  if (!opt.scenario.empty()) file_spec = load(opt.scenario);
  if (!opt.preset_name.empty())
    specs = preset(opt.preset_name, file_spec.base, opt.full_scale);
  else if (!opt.scenario.empty())
    specs.push_back(file_spec);
  else
    throw std::invalid_argument("nothing to run: give a scenario file or --preset");

  fs::path out = "out";
  if (const char* env = std::getenv("UDNSYNC_OUT_DIR"); env && *env) out = env;
  if (opt.out_dir) out = *opt.out_dir;

  int failed = 0;
  for (auto& spec : specs) {
    spec.output_dir = out;
    if (opt.seed) spec.base.rng_seed = *opt.seed;
    if (opt.replications) spec.replications = *opt.replications;
    if (opt.threads) spec.threads = *opt.threads;
    else if (opt.preset_name.empty()) spec.threads = file_spec.threads;
    failed += run_one(std::move(spec), opt);
  }
  return failed == 0 ? 0 : 1;
}

int cmd_validate(const std::string& path) {
  auto spec = load(path);
  validate(spec);
  std::cout << path << ": ok (" << spec.name << ", " << to_string(spec.sweep) << " x " << spec.values.size()
            << " values, " << spec.replications << " replications)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ultra-dense network synchronization simulator"};
  app.require_subcommand(1);

  RunOptions opt;
  auto* run = app.add_subcommand("run", "Run a sweep and write CSV and SVG results");
  run->add_option("scenario", opt.scenario, "Scenario file (optional with --preset)")->check(CLI::ExistingFile);
  run->add_option("--out", opt.out_dir, "Output directory (default: $UDNSYNC_OUT_DIR or ./out)");
  run->add_option("--seed", opt.seed, "Root random seed");
  run->add_option("--replications", opt.replications, "Replications per sweep value")->check(CLI::PositiveNumber);
  run->add_option("--threads", opt.threads, "Worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
  run->add_option("--preset", opt.preset_name, "Built-in sweep")
      ->check(CLI::IsMember({"fig4", "fig5", "fig6", "fig7", "fig8"}));
  run->add_flag("--full-scale", opt.full_scale, "Use the full network sizes and iteration budgets");

  std::string validate_path;
  auto* val = app.add_subcommand("validate", "Check a scenario file without running it");
  val->add_option("scenario", validate_path, "Scenario file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(opt);
    return cmd_validate(validate_path);
  } catch (const std::exception& e) {
    std::cerr << "sim: " << e.what() << '\n';
    return 2;
  }
}

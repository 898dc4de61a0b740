#include "udnsync/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "udnsync/consensus.hpp"
#include "udnsync/random.hpp"
#include "udnsync/scheduler.hpp"
#include "udnsync/topology.hpp"

namespace udnsync {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    auto pos = s.find(sep);
    out.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) break;
    s = s.substr(pos + 1);
  }
  return out;
}

}  // namespace

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::power_threshold: return "power_threshold";
    case SweepParam::num_nodes: return "num_nodes";
    case SweepParam::num_subbands: return "num_subbands";
    case SweepParam::fading_mean: return "fading_mean";
    case SweepParam::nakagami_m: return "nakagami_m";
  }
  return "?";
}

SweepParam parse_sweep_param(std::string_view text) {
  for (auto p : {SweepParam::power_threshold, SweepParam::num_nodes, SweepParam::num_subbands,
                 SweepParam::fading_mean, SweepParam::nakagami_m})
    if (to_string(p) == text) return p;
  throw std::invalid_argument("unknown sweep parameter '" + std::string(text) + "'");
}

std::string_view sweep_axis_label(SweepParam p) {
  switch (p) {
    case SweepParam::power_threshold: return "Power threshold P0 (dBm)";
    case SweepParam::num_nodes: return "Number of SBSs K (nodes)";
    case SweepParam::num_subbands: return "Number of sub-bands N";
    case SweepParam::fading_mean: return "Rayleigh mean channel gain (linear)";
    case SweepParam::nakagami_m: return "Nakagami shape m";
  }
  return "";
}

SimConfig config_for(const ExperimentSpec& spec, double value) {
  SimConfig c = spec.base;
  switch (spec.sweep) {
    case SweepParam::power_threshold: c.power_threshold_dbm = value; break;
    case SweepParam::num_nodes: c.num_nodes = static_cast<int>(std::lround(value)); break;
    case SweepParam::num_subbands: c.num_subbands = static_cast<int>(std::lround(value)); break;
    case SweepParam::fading_mean: c.fading = FadingSpec::rayleigh(value); break;
    case SweepParam::nakagami_m: c.fading = FadingSpec::nakagami(value); break;
  }
  return c;
}

void validate(const ExperimentSpec& spec) {
  if (spec.values.empty()) throw std::invalid_argument("invalid experiment: sweep values are empty");
  if (spec.replications < 1) throw std::invalid_argument("invalid experiment: replications must be >= 1");
  if (spec.threads < 0) throw std::invalid_argument("invalid experiment: threads must be >= 0");
  for (double v : spec.values) validate(config_for(spec, v));
}

namespace {

ReplicationRecord run_one(const SimConfig& config, RandomSource rng) {
  ReplicationRecord rec;
  try {
    validate(config);
    auto topo_rng = rng.derive({0});
    auto sync_rng = rng.derive({1});
    auto sched_rng = rng.derive({2});
    const auto topology = place_nodes(config, topo_rng);
    const auto trace = run_sync(config, topology, sync_rng);
    const auto sched = schedule_exchange(topology, config, sched_rng);
    rec.cf = trace.cf_mean;
    rec.n_avg = trace.mean_iterations;
    rec.algorithmic_time = trace.algorithmic_time;
    rec.exchange_noma = sched.noma.exchange_delay_total;
    rec.exchange_oma = sched.oma.exchange_delay_total;
    rec.swap_iterations = sched.noma.rounds.front().swap_iterations;
    rec.rounds = static_cast<int>(sched.noma.rounds.size());
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  return rec;
}

}  // namespace

std::vector<std::vector<ReplicationRecord>> run_replications(const ExperimentSpec& spec) {
  validate(spec);
  const std::size_t num_values = spec.values.size();
  const std::size_t reps = static_cast<std::size_t>(spec.replications);
  std::vector<std::vector<ReplicationRecord>> out(num_values, std::vector<ReplicationRecord>(reps));
  const RandomSource root(spec.base.rng_seed);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < num_values * reps; job = next++) {
      const std::size_t i = job / reps, r = job % reps;
      out[i][r] = run_one(config_for(spec, spec.values[i]), root.derive({r}));
    }
  };
  unsigned threads = spec.threads > 0 ? static_cast<unsigned>(spec.threads) : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(num_values * reps));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return out;
}

ResultRow aggregate(double sweep_value, const std::vector<ReplicationRecord>& records) {
  ResultRow row;
  row.sweep_value = sweep_value;
  for (const auto& rec : records)
    if (!rec.ok) {
      row.error = rec.error.empty() ? "replication failed" : rec.error;
      break;
    }
  if (!row.error.empty() || records.empty()) {
    if (row.error.empty()) row.error = "no replications";
    for (double* f : {&row.cf_mean, &row.n_avg, &row.algorithmic_time, &row.exchange_delay_noma,
                      &row.exchange_delay_oma, &row.t_sync_noma, &row.t_sync_oma, &row.noma_gain_pct,
                      &row.t_sync_noma_ci95, &row.t_sync_oma_ci95})
      *f = kNaN;
    row.replications_ok = static_cast<int>(std::count_if(records.begin(), records.end(), [](auto& r) { return r.ok; }));
    return row;
  }

  const double count = static_cast<double>(records.size());
  auto mean_of = [&](auto field) {
    double s = 0.0;
    for (const auto& r : records) s += field(r);
    return s / count;
  };
  auto ci_of = [&](auto field, double mean) {
    if (records.size() < 2) return 0.0;
    double ss = 0.0;
    for (const auto& r : records) ss += (field(r) - mean) * (field(r) - mean);
    return 1.96 * std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
  };
  auto sync_noma = [](const ReplicationRecord& r) { return r.algorithmic_time + r.exchange_noma; };
  auto sync_oma = [](const ReplicationRecord& r) { return r.algorithmic_time + r.exchange_oma; };

  row.cf_mean = mean_of([](auto& r) { return r.cf; });
  row.n_avg = mean_of([](auto& r) { return r.n_avg; });
  row.algorithmic_time = mean_of([](auto& r) { return r.algorithmic_time; });
  row.exchange_delay_noma = mean_of([](auto& r) { return r.exchange_noma; });
  row.exchange_delay_oma = mean_of([](auto& r) { return r.exchange_oma; });
  row.t_sync_noma = row.algorithmic_time + row.exchange_delay_noma;
  row.t_sync_oma = row.algorithmic_time + row.exchange_delay_oma;
  row.noma_gain_pct = 100.0 * (row.t_sync_oma - row.t_sync_noma) / row.t_sync_oma;
  row.t_sync_noma_ci95 = ci_of(sync_noma, mean_of(sync_noma));
  row.t_sync_oma_ci95 = ci_of(sync_oma, mean_of(sync_oma));
  row.replications_ok = static_cast<int>(records.size());
  return row;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  auto records = run_replications(spec);
  std::vector<ResultRow> rows;
  rows.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) rows.push_back(aggregate(spec.values[i], records[i]));
  return rows;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

constexpr std::string_view kCsvHeader =
    "sweep_value,cf_mean,n_avg,algorithmic_time_s,exchange_delay_noma_s,exchange_delay_oma_s,"
    "t_sync_noma_s,t_sync_oma_s,noma_gain_pct,t_sync_noma_ci95_s,t_sync_oma_ci95_s,replications_ok,error";

std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  return s;
}

}  // namespace

std::string format_csv(const std::vector<ResultRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    for (double v : {r.sweep_value, r.cf_mean, r.n_avg, r.algorithmic_time, r.exchange_delay_noma,
                     r.exchange_delay_oma, r.t_sync_noma, r.t_sync_oma, r.noma_gain_pct, r.t_sync_noma_ci95,
                     r.t_sync_oma_ci95}) {
      out += fmt(v);
      out += ',';
    }
    out += std::to_string(r.replications_ok);
    out += ',';
    out += csv_safe(r.error);
    out += '\n';
  }
  return out;
}

void emit_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  os << format_csv(rows);
  os.flush();
  if (!os) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::vector<ResultRow> parse_csv(std::string_view text) {
  auto lines = split(text, '\n');
  if (lines.empty() || trim(lines.front()) != kCsvHeader) throw std::invalid_argument("unexpected CSV header");
  std::vector<ResultRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto cells = split(lines[i], ',');
    if (cells.size() != 13) throw std::invalid_argument("CSV line " + std::to_string(i + 1) + ": expected 13 fields");
    ResultRow r;
    double* fields[] = {&r.sweep_value, &r.cf_mean, &r.n_avg, &r.algorithmic_time, &r.exchange_delay_noma,
                        &r.exchange_delay_oma, &r.t_sync_noma, &r.t_sync_oma, &r.noma_gain_pct,
                        &r.t_sync_noma_ci95, &r.t_sync_oma_ci95};
    for (std::size_t f = 0; f < 11; ++f) {
      auto cell = trim(cells[f]);
      *fields[f] = (cell == "nan" || cell == "-nan") ? kNaN : parse_double(cell);
    }
    r.replications_ok = static_cast<int>(parse_double(cells[11]));
    r.error = std::string(trim(cells[12]));
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;

struct Frame {
  double x_lo, x_hi, y_lo, y_hi;
  double px(double x) const { return kLeft + (x - x_lo) / (x_hi - x_lo) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y_lo) / (y_hi - y_lo) * (kHeight - kTop - kBottom); }
};

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Frame make_frame(double x_lo, double x_hi, double y_lo, double y_hi) {
  if (!(x_hi > x_lo)) { x_lo -= 0.5; x_hi += 0.5; }
  if (!(y_hi > y_lo)) { y_lo -= 0.5 * std::max(1e-12, std::abs(y_lo)); y_hi += 0.5 * std::max(1e-12, std::abs(y_hi)); }
  double pad = 0.05 * (y_hi - y_lo);
  return {x_lo, x_hi, y_lo - pad, y_hi + pad};
}

void draw_axes(std::ostringstream& os, const Frame& f, const PlotStyle& style) {
  os << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape_xml(style.title)
     << "</text>\n";
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1 << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double xv = f.x_lo + (f.x_hi - f.x_lo) * i / 4.0;
    double yv = f.y_lo + (f.y_hi - f.y_lo) * i / 4.0;
    os << "<text x=\"" << f.px(xv) << "\" y=\"" << y0 + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
       << short_num(xv) << "</text>\n";
    os << "<text x=\"" << x0 - 6 << "\" y=\"" << f.py(yv) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
       << short_num(yv) << "</text>\n";
  }
  os << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\" font-size=\"13\">"
     << escape_xml(style.x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << (y0 + y1) / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
     << (y0 + y1) / 2 << ")\">" << escape_xml(style.y_label) << "</text>\n";
}

void draw_legend(std::ostringstream& os, const std::vector<std::pair<std::string, std::string>>& entries) {
  double y = kTop + 8;
  for (const auto& [label, color] : entries) {
    os << "<line x1=\"" << kWidth - 170 << "\" y1=\"" << y << "\" x2=\"" << kWidth - 140 << "\" y2=\"" << y
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << kWidth - 134 << "\" y=\"" << y + 4 << "\" font-size=\"12\">" << escape_xml(label) << "</text>\n";
    y += 18;
  }
}

}  // namespace

std::string render_plot(const std::vector<ResultRow>& rows, const PlotStyle& style) {
  if (rows.size() < 2) throw std::invalid_argument("a plot needs at least two rows");
  std::vector<std::pair<double, double>> noma, oma;
  for (const auto& r : rows) {
    if (std::isfinite(r.sweep_value) && std::isfinite(r.t_sync_noma))
      noma.emplace_back(r.sweep_value, r.t_sync_noma);
    else
      std::cerr << "warning: skipping non-finite NOMA point at sweep value " << r.sweep_value << '\n';
    if (std::isfinite(r.sweep_value) && std::isfinite(r.t_sync_oma))
      oma.emplace_back(r.sweep_value, r.t_sync_oma);
    else
      std::cerr << "warning: skipping non-finite OMA point at sweep value " << r.sweep_value << '\n';
  }
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo, y_lo = x_lo, y_hi = -x_lo;
  for (const auto* series : {&noma, &oma})
    for (auto [x, y] : *series) {
      x_lo = std::min(x_lo, x); x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y); y_hi = std::max(y_hi, y);
    }
  if (!std::isfinite(x_lo)) { x_lo = 0; x_hi = 1; y_lo = 0; y_hi = 1; }
  const Frame f = make_frame(x_lo, x_hi, std::min(0.0, y_lo), y_hi);

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  draw_axes(os, f, style);
  auto polyline = [&](const std::vector<std::pair<double, double>>& pts, const char* color, const char* id) {
    os << "<polyline id=\"" << id << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
      os << (i ? " " : "") << short_num(f.px(pts[i].first)) << ',' << short_num(f.py(pts[i].second));
    os << "\"/>\n";
    for (auto [x, y] : pts)
      os << "<circle cx=\"" << short_num(f.px(x)) << "\" cy=\"" << short_num(f.py(y)) << "\" r=\"3\" fill=\"" << color
         << "\"/>\n";
  };
  polyline(noma, "#1f77b4", "noma");
  polyline(oma, "#d62728", "oma");
  draw_legend(os, {{"NOMA", "#1f77b4"}, {"OMA", "#d62728"}});
  os << "</svg>\n";
  return os.str();
}

void emit_plot(const std::vector<ResultRow>& rows, const std::filesystem::path& path, const PlotStyle& style) {
  auto svg = render_plot(rows, style);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  os << svg;
  if (!os) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::string render_cdf_plot(const std::vector<double>& sweep_values, const std::vector<std::vector<int>>& samples,
                            const PlotStyle& style) {
  if (sweep_values.size() != samples.size()) throw std::invalid_argument("one sample set per sweep value expected");
  int x_max = 1;
  for (const auto& s : samples)
    for (int v : s) x_max = std::max(x_max, v);
  const Frame f{0.0, static_cast<double>(x_max), 0.0, 1.0};
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  draw_axes(os, f, style);
  std::vector<std::pair<std::string, std::string>> legend;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto sorted = samples[i];
    std::sort(sorted.begin(), sorted.end());
    const char* color = kColors[i % std::size(kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    double cdf = 0.0;
    os << short_num(f.px(0)) << ',' << short_num(f.py(0));
    for (std::size_t k = 0; k < sorted.size(); ++k) {
      if (k + 1 < sorted.size() && sorted[k + 1] == sorted[k]) continue;
      double next = static_cast<double>(k + 1) / static_cast<double>(sorted.size());
      os << ' ' << short_num(f.px(sorted[k])) << ',' << short_num(f.py(cdf));
      os << ' ' << short_num(f.px(sorted[k])) << ',' << short_num(f.py(next));
      cdf = next;
    }
    os << ' ' << short_num(f.px(x_max)) << ',' << short_num(f.py(cdf)) << "\"/>\n";
    legend.emplace_back("N = " + short_num(sweep_values[i]), color);
  }
  draw_legend(os, legend);
  os << "</svg>\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Scenario files and presets

ExperimentSpec parse_experiment(std::string_view text) {
  ExperimentSpec spec;
  bool have_values = false;
  for (const auto& [key, value] : parse_key_values(text)) {
    if (apply_config_key(spec.base, key, value)) continue;
    if (key == "scenario") spec.name = value;
    else if (key == "sweep") spec.sweep = parse_sweep_param(value);
    else if (key == "values") {
      for (auto cell : split(value, ',')) spec.values.push_back(parse_double(cell));
      have_values = true;
    }
    else if (key == "replications") spec.replications = static_cast<int>(parse_double(value));
    else if (key == "threads") spec.threads = static_cast<int>(parse_double(value));
    else throw std::invalid_argument("unknown scenario key '" + key + "'");
  }
  if (!have_values) spec.values = {spec.base.power_threshold_dbm};
  return spec;
}

std::vector<ExperimentSpec> preset(std::string_view name, const SimConfig& base, bool full_scale) {
  SimConfig b = base;
  if (full_scale) {
    b.max_iters = 20000;
    b.max_snapshots = 500;
  } else {
    b.max_iters = std::min(b.max_iters, 5000);
    b.max_snapshots = std::min(b.max_snapshots, 20);
  }
  const int reps = full_scale ? 100 : 50;

  auto make = [&](std::string n, SweepParam sweep, std::vector<double> values, SimConfig c) {
    ExperimentSpec spec;
    spec.name = std::move(n);
    spec.sweep = sweep;
    spec.values = std::move(values);
    spec.replications = reps;
    spec.base = c;
    return spec;
  };

  std::vector<ExperimentSpec> out;
  if (name == "fig4") {
    std::vector<double> p0 = {-80, -70, -60, -50, -40};
    for (int k : full_scale ? std::vector<int>{90, 250} : std::vector<int>{60, 90}) {
      SimConfig c = b;
      c.num_nodes = k;
      out.push_back(make("fig4_K" + std::to_string(k), SweepParam::power_threshold, p0, c));
    }
  } else if (name == "fig5") {
    std::vector<double> n = full_scale ? std::vector<double>{5, 10, 15, 20, 25, 30} : std::vector<double>{5, 10, 15};
    for (int k : full_scale ? std::vector<int>{90, 200} : std::vector<int>{60, 90}) {
      SimConfig c = b;
      c.num_nodes = k;
      out.push_back(make("fig5_K" + std::to_string(k), SweepParam::num_subbands, n, c));
    }
  } else if (name == "fig6") {
    out.push_back(make("fig6", SweepParam::fading_mean, {1, 2, 4, 8}, b));
  } else if (name == "fig7") {
    out.push_back(make("fig7", SweepParam::nakagami_m, {1, 3}, b));
  } else if (name == "fig8") {
    SimConfig c = b;
    c.num_nodes = full_scale ? 90 : 30;
    c.max_snapshots = 1;
    auto spec = make("fig8", SweepParam::num_subbands, {2, 3, 4}, c);
    spec.replications = 200;
    out.push_back(spec);
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
  }
  return out;
}

}  // namespace udnsync

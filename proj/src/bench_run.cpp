// Experiment execution, CSV emission and SVG plotting.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "bbg/bench.hpp"
#include "bbg/error.hpp"

namespace bbg {

namespace {

struct CellResult {
  bool ok = false;
  std::string error;
  RunTrace trace;
  double final_value = 0.0;
};

CellResult run_cell(const Problem& problem, const AlgorithmConfig& algo, std::uint64_t seed) {
  AlgoParams params = algo.params;
  params.seed = seed;
  CellResult out;
  try {
    if (problem.discrete()) {
      auto f = problem.make_set_oracle();
      DiscreteResult r;
      if (algo.name == "dbg") r = dbg(*f, problem.constraint(), params);
      else if (algo.name == "scg") r = scg(*f, problem.constraint(), params);
      else if (algo.name == "ga") r = ga(*f, problem.constraint(), params);
      else if (algo.name == "zga") r = zga(*f, problem.constraint(), params);
      else throw ArgumentError(fmt::format("algorithm '{}' does not apply to set functions", algo.name));
      out.final_value = f->value(r.solution);
      out.trace = std::move(r.trace);
    } else {
      auto f = problem.make_value_oracle(derive_seed(seed, 0x6e6f697365ULL));
      const BoxDomain& domain = f->domain();
      ContinuousResult r;
      if (algo.name == "bcg") r = bcg(*f, domain, problem.constraint(), params);
      else if (algo.name == "scg") r = scg(*f, problem.constraint(), params);
      else if (algo.name == "ga") r = ga(*f, problem.constraint(), params);
      else if (algo.name == "zga") r = zga(*f, domain, problem.constraint(), params);
      else throw ArgumentError(fmt::format("algorithm '{}' does not apply to continuous objectives", algo.name));
      out.final_value = f->value(r.solution);
      out.trace = std::move(r.trace);
    }
    if (!std::isfinite(out.final_value)) throw NumericError("final value is not finite");
    out.ok = true;
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
  }
  return out;
}

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.12g}", v);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw Error(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  const Problem problem(config);
  std::vector<std::uint64_t> seeds = config.seeds;
  if (options.seed_override) seeds = {*options.seed_override};

  struct Cell {
    std::size_t algo;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    for (std::uint64_t s : seeds) cells.push_back(Cell{a, s});
  }
  std::vector<CellResult> results(cells.size());

  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(cells.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      results[i] = run_cell(problem, config.algorithms[cells[i].algo], cells[i].seed);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::filesystem::create_directories(options.out_dir);
  ExperimentOutput out;
  out.trace_csv = options.out_dir / (config.output + "_trace.csv");
  out.summary_csv = options.out_dir / (config.output + "_summary.csv");

  std::string trace = "algorithm,seed,iteration,queries,elapsed_ms,value\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const CellResult& r = results[i];
    const std::string& name = config.algorithms[cells[i].algo].name;
    if (!r.ok) {
      out.failures.push_back(CellFailure{name, cells[i].seed, r.error});
      continue;
    }
    for (const TraceRecord& rec : r.trace.records) {
      trace += fmt::format("{},{},{},{},{:.3f},{}\n", name, cells[i].seed, rec.iteration, rec.queries,
                           config.timing ? rec.elapsed_ms : 0.0, number(rec.value));
      ++out.trace_rows;
    }
  }
  write_text(out.trace_csv, trace);

  // Per-algorithm aggregates over successful seeds.
  struct Aggregate {
    std::vector<double> values;
    double elapsed = 0.0;
    std::uint64_t queries = 0;
  };
  std::vector<Aggregate> agg(config.algorithms.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!results[i].ok) continue;
    Aggregate& a = agg[cells[i].algo];
    a.values.push_back(results[i].final_value);
    a.elapsed += results[i].trace.elapsed_ms();
    a.queries = results[i].trace.total_queries();
  }

  const std::string reference_name = problem.discrete() ? "dbg" : "bcg";
  std::size_t reference = 0;
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    if (config.algorithms[a].name == reference_name) {
      reference = a;
      break;
    }
  }
  auto mean_elapsed = [&](std::size_t a) {
    return agg[a].values.empty() ? std::nan("") : agg[a].elapsed / static_cast<double>(agg[a].values.size());
  };
  const double ref_time = mean_elapsed(reference);

  std::string summary = "algorithm,final_value_mean,final_value_sd,total_queries,relative_runtime\n";
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    const auto& v = agg[a].values;
    double mean = std::nan("");
    double sd = std::nan("");
    if (!v.empty()) {
      mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      sd = 0.0;
      if (v.size() > 1) {
        for (double x : v) sd += (x - mean) * (x - mean);
        sd = std::sqrt(sd / static_cast<double>(v.size() - 1));
      }
    }
    double relative = std::nan("");
    if (a == reference && !v.empty()) {
      relative = 1.0;
    } else if (config.timing && ref_time > 0.0) {
      relative = mean_elapsed(a) / ref_time;
    }
    summary += fmt::format("{},{},{},{},{}\n", config.algorithms[a].name, number(mean), number(sd),
                           agg[a].queries, number(relative));
    ++out.summary_rows;
  }
  write_text(out.summary_csv, summary);

  if (!out.failures.empty()) {
    std::string errors = "algorithm,seed,message\n";
    for (const auto& f : out.failures) {
      std::string msg = f.message;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      errors += fmt::format("{},{},{}\n", f.algorithm, f.seed, msg);
    }
    write_text(options.out_dir / (config.output + "_errors.csv"), errors);
  } else {
    std::error_code ec;  // drop a stale report from an earlier run
    std::filesystem::remove(options.out_dir / (config.output + "_errors.csv"), ec);
  }
  return out;
}

// ---------------------------------------------------------------------------

void write_svg_plot(const std::filesystem::path& trace_csv, const std::filesystem::path& svg_path) {
  std::ifstream in(trace_csv);
  if (!in) throw ParseError(fmt::format("cannot open '{}'", trace_csv.string()));
  std::string line;
  if (!std::getline(in, line) || line.rfind("algorithm,seed,iteration,queries", 0) != 0) {
    throw ParseError(fmt::format("'{}' is not a trace CSV", trace_csv.string()));
  }

  struct Point2 {
    double queries = 0.0;
    double value = 0.0;
    std::size_t n = 0;
  };
  // algorithm -> iteration -> running sums; algorithm order as first seen.
  std::vector<std::string> order;
  std::map<std::string, std::map<std::size_t, Point2>> series;
  std::size_t ln = 1;
  while (std::getline(in, line)) {
    ++ln;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) throw ParseError(fmt::format("trace line {}: expected 6 columns", ln));
    try {
      if (!series.count(cells[0])) order.push_back(cells[0]);
      Point2& p = series[cells[0]][std::stoul(cells[2])];
      p.queries += std::stod(cells[3]);
      p.value += std::stod(cells[5]);
      ++p.n;
    } catch (const std::logic_error&) {
      throw ParseError(fmt::format("trace line {}: malformed number", ln));
    }
  }
  if (series.empty()) throw ParseError("trace CSV has no rows");

  double qmax = 0.0;
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -vmin;
  for (auto& [name, points] : series) {
    for (auto& [it, p] : points) {
      p.queries /= static_cast<double>(p.n);
      p.value /= static_cast<double>(p.n);
      qmax = std::max(qmax, p.queries);
      vmin = std::min(vmin, p.value);
      vmax = std::max(vmax, p.value);
    }
  }
  if (qmax <= 0.0) qmax = 1.0;
  if (vmax <= vmin) vmax = vmin + 1.0;

  constexpr double kW = 720, kH = 440, kLeft = 70, kRight = 170, kTop = 30, kBottom = 50;
  const double pw = kW - kLeft - kRight;
  const double ph = kH - kTop - kBottom;
  auto sx = [&](double q) { return kLeft + pw * q / qmax; };
  auto sy = [&](double v) { return kTop + ph * (1.0 - (v - vmin) / (vmax - vmin)); };
  static constexpr const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<g font-family=\"sans-serif\" font-size=\"12\">\n",
      kW, kH);
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", kLeft, kTop + ph,
                     kLeft + pw);
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", kLeft, kTop,
                     kTop + ph);
  for (int k = 0; k <= 4; ++k) {
    const double q = qmax * k / 4.0;
    const double v = vmin + (vmax - vmin) * k / 4.0;
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.4g}</text>\n", sx(q),
                       kTop + ph + 18, q);
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.4g}</text>\n", kLeft - 6,
                       sy(v) + 4, v);
  }
  svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">oracle queries</text>\n",
                     kLeft + pw / 2, kH - 10);
  svg += fmt::format(
      "<text x=\"16\" y=\"{:.1f}\" transform=\"rotate(-90 16 {:.1f})\" text-anchor=\"middle\">function "
      "value</text>\n",
      kTop + ph / 2, kTop + ph / 2);

  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& points = series[order[k]];
    const char* color = kColors[k % std::size(kColors)];
    const bool first_order = points.rbegin()->second.queries == 0.0;
    std::string label = order[k];
    if (first_order) {
      // No value queries: draw the final value as a dashed reference level.
      const double y = sy(points.rbegin()->second.value);
      svg += fmt::format(
          "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"{}\" stroke-dasharray=\"6 4\" "
          "stroke-width=\"2\"/>\n",
          kLeft, y, kLeft + pw, y, color);
      label += " (gradient oracle)";
    } else {
      std::string pts;
      for (const auto& [it, p] : points) pts += fmt::format("{:.1f},{:.1f} ", sx(p.queries), sy(p.value));
      svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", color, pts);
    }
    const double ly = kTop + 16.0 * static_cast<double>(k) + 8;
    svg += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                       kLeft + pw + 10, ly, kLeft + pw + 30, ly, color);
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", kLeft + pw + 36, ly + 4, label);
  }
  svg += "</g>\n</svg>\n";
  write_text(svg_path, svg);
}

}  // namespace bbg

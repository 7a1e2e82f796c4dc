// Command-line driver. Talks to the library only through the C interface.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bbg/bbg.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int exit_code(bbg_status status) {
  switch (status) {
    case BBG_OK:
      return kExitOk;
    case BBG_ERR_CONFIG:
    case BBG_ERR_ARGUMENT:
      return kExitConfig;
    default:
      return kExitRuntime;
  }
}

int report(bbg_status status, const char* what) {
  if (status != BBG_OK) {
    std::fprintf(stderr, "bbgreedy %s: %s: %s\n", what, bbg_status_name(status), bbg_last_error());
  }
  return exit_code(status);
}

struct Options {
  std::string path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

int load(const Options& opt, CLI::Option* seed_flag, bbg_experiment** exp) {
  bbg_status s = bbg_experiment_load(opt.path.c_str(), exp);
  if (s != BBG_OK) return report(s, "config");
  if (seed_flag->count() > 0) bbg_experiment_set_seed_override(*exp, opt.seed);
  if ((s = bbg_experiment_set_out_dir(*exp, opt.out_dir.c_str())) != BBG_OK) return report(s, "config");
  if ((s = bbg_experiment_set_jobs(*exp, opt.jobs)) != BBG_OK) return report(s, "config");
  return kExitOk;
}

int cmd_run(const Options& opt, CLI::Option* seed_flag) {
  bbg_experiment* exp = nullptr;
  if (int rc = load(opt, seed_flag, &exp); rc != kExitOk) {
    bbg_experiment_destroy(exp);
    return rc;
  }
  const bbg_status s = bbg_experiment_run(exp);
  if (bbg_experiment_trace_path(exp)[0] != '\0') {
    std::printf("trace:   %s\nsummary: %s\n", bbg_experiment_trace_path(exp), bbg_experiment_summary_path(exp));
  }
  const int rc = report(s, "run");
  bbg_experiment_destroy(exp);
  return rc;
}

int cmd_opt(const Options& opt, CLI::Option* seed_flag) {
  bbg_experiment* exp = nullptr;
  if (int rc = load(opt, seed_flag, &exp); rc != kExitOk) {
    bbg_experiment_destroy(exp);
    return rc;
  }
  std::vector<size_t> members(bbg_experiment_dim(exp));
  double value = 0.0;
  size_t count = 0;
  int exact = 0;
  const bbg_status s = bbg_experiment_opt(exp, &value, members.data(), members.size(), &count, &exact);
  if (s == BBG_OK) {
    if (exact) {
      std::printf("optimum (exhaustive): %.12g\nset:", value);
      for (size_t k = 0; k < count; ++k) std::printf(" %zu", members[k]);
      std::printf("\n");
    } else {
      std::printf("reference optimum (projected gradient ascent, 20 restarts): %.12g\n", value);
    }
  }
  const int rc = report(s, "opt");
  bbg_experiment_destroy(exp);
  return rc;
}

int cmd_plot(const Options& opt) {
  namespace fs = std::filesystem;
  const fs::path csv(opt.path);
  fs::path svg = fs::path(opt.out_dir) / csv.stem();
  svg += ".svg";
  std::error_code ec;
  fs::create_directories(opt.out_dir, ec);
  const bbg_status s = bbg_plot_trace(csv.string().c_str(), svg.string().c_str());
  if (s == BBG_OK) std::printf("plot: %s\n", svg.string().c_str());
  return report(s, "plot");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zeroth-order projection-free submodular maximization experiments"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out-dir", opt.out_dir, "Directory for output files")->capture_default_str();
    sub->add_option("--jobs", opt.jobs, "Parallel (algorithm, seed) runs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    return sub->add_option("--seed-override", opt.seed, "Run a single seed instead of the configured list");
  };

  CLI::App* run = app.add_subcommand("run", "Run every algorithm and seed of a config");
  run->add_option("config", opt.path, "Experiment config")->required();
  CLI::Option* run_seed = add_common(run);

  CLI::App* optc = app.add_subcommand("opt", "Report the optimum of the configured instance");
  optc->add_option("config", opt.path, "Experiment config")->required();
  CLI::Option* opt_seed = add_common(optc);

  CLI::App* plot = app.add_subcommand("plot", "Render a trace CSV as an SVG line chart");
  plot->add_option("csv", opt.path, "Trace CSV written by 'run'")->required();
  add_common(plot);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (run->parsed()) return cmd_run(opt, run_seed);
  if (optc->parsed()) return cmd_opt(opt, opt_seed);
  return cmd_plot(opt);
}

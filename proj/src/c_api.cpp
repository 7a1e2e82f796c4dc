#include "bbg/bbg.h"

#include <exception>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bbg/bench.hpp"
#include "bbg/error.hpp"
#include "bbg/estimators.hpp"
#include "bbg/polytope.hpp"

struct bbg_experiment {
  bbg::ExperimentConfig config;
  bbg::RunOptions options;
  std::string trace_path;
  std::string summary_path;
  std::size_t failures = 0;
};

struct bbg_constraint {
  std::optional<bbg::ConstraintSpec> spec;  // empty for transformed sets
  bbg::BudgetPolytope polytope;
};

namespace {

thread_local std::string g_last_error;

bbg_status fail(bbg_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
bbg_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const bbg::ParseError& e) {
    return fail(BBG_ERR_CONFIG, e.what());
  } catch (const bbg::ArgumentError& e) {
    return fail(BBG_ERR_ARGUMENT, e.what());
  } catch (const bbg::DomainError& e) {
    return fail(BBG_ERR_DOMAIN, e.what());
  } catch (const bbg::InfeasibleError& e) {
    return fail(BBG_ERR_INFEASIBLE, e.what());
  } catch (const bbg::CapacityError& e) {
    return fail(BBG_ERR_CAPACITY, e.what());
  } catch (const bbg::NumericError& e) {
    return fail(BBG_ERR_NUMERIC, e.what());
  } catch (const std::exception& e) {
    return fail(BBG_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(BBG_ERR_RUNTIME, "unknown error");
  }
}

bbg::Point to_point(const double* data, std::size_t dim) {
  return Eigen::Map<const bbg::Point>(data, static_cast<Eigen::Index>(dim));
}

void from_point(const bbg::Point& p, double* out) {
  for (Eigen::Index i = 0; i < p.size(); ++i) out[i] = p[i];
}

std::vector<std::vector<std::size_t>> consecutive_blocks(const std::size_t* sizes, std::size_t nblocks) {
  std::vector<std::vector<std::size_t>> blocks;
  std::size_t next = 0;
  for (std::size_t k = 0; k < nblocks; ++k) {
    std::vector<std::size_t> idx(sizes[k]);
    for (auto& i : idx) i = next++;
    blocks.push_back(std::move(idx));
  }
  return blocks;
}

#define BBG_REQUIRE(cond, msg) \
  if (!(cond)) return fail(BBG_ERR_ARGUMENT, msg)

}  // namespace

extern "C" {

uint32_t bbg_abi_version(void) { return BBG_ABI_VERSION; }

const char* bbg_version_string(void) { return "1.0.0"; }

const char* bbg_status_name(bbg_status status) {
  switch (status) {
    case BBG_OK: return "ok";
    case BBG_ERR_ARGUMENT: return "argument error";
    case BBG_ERR_CONFIG: return "config error";
    case BBG_ERR_RUNTIME: return "runtime error";
    case BBG_ERR_DOMAIN: return "domain error";
    case BBG_ERR_INFEASIBLE: return "infeasible";
    case BBG_ERR_CAPACITY: return "capacity exceeded";
    case BBG_ERR_NUMERIC: return "numeric error";
    case BBG_ERR_BUFFER: return "buffer too small";
  }
  return "unknown";
}

const char* bbg_last_error(void) { return g_last_error.c_str(); }

bbg_status bbg_experiment_load(const char* config_path, bbg_experiment** out) {
  BBG_REQUIRE(config_path != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    auto exp = std::make_unique<bbg_experiment>();
    exp->config = bbg::load_config(config_path);
    *out = exp.release();
    return BBG_OK;
  });
}

bbg_status bbg_experiment_parse(const char* config_text, const char* base_dir, bbg_experiment** out) {
  BBG_REQUIRE(config_text != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    auto exp = std::make_unique<bbg_experiment>();
    exp->config = bbg::parse_config(config_text, base_dir ? base_dir : "");
    *out = exp.release();
    return BBG_OK;
  });
}

void bbg_experiment_destroy(bbg_experiment* experiment) { delete experiment; }

bbg_status bbg_experiment_set_seed_override(bbg_experiment* experiment, uint64_t seed) {
  BBG_REQUIRE(experiment != nullptr, "null experiment");
  experiment->options.seed_override = seed;
  return BBG_OK;
}

bbg_status bbg_experiment_set_out_dir(bbg_experiment* experiment, const char* out_dir) {
  BBG_REQUIRE(experiment != nullptr && out_dir != nullptr, "null argument");
  experiment->options.out_dir = out_dir;
  return BBG_OK;
}

bbg_status bbg_experiment_set_jobs(bbg_experiment* experiment, unsigned jobs) {
  BBG_REQUIRE(experiment != nullptr, "null experiment");
  BBG_REQUIRE(jobs >= 1, "jobs must be at least 1");
  experiment->options.jobs = jobs;
  return BBG_OK;
}

bbg_status bbg_experiment_run(bbg_experiment* experiment) {
  BBG_REQUIRE(experiment != nullptr, "null experiment");
  return guarded([&] {
    const bbg::ExperimentOutput out = bbg::run_experiment(experiment->config, experiment->options);
    experiment->trace_path = out.trace_csv.string();
    experiment->summary_path = out.summary_csv.string();
    experiment->failures = out.failures.size();
    if (!out.failures.empty()) {
      const auto& f = out.failures.front();
      return fail(BBG_ERR_RUNTIME, std::to_string(out.failures.size()) + " run(s) failed; first: " +
                                       f.algorithm + " seed " + std::to_string(f.seed) + ": " + f.message);
    }
    return BBG_OK;
  });
}

const char* bbg_experiment_trace_path(const bbg_experiment* experiment) {
  return experiment ? experiment->trace_path.c_str() : "";
}

const char* bbg_experiment_summary_path(const bbg_experiment* experiment) {
  return experiment ? experiment->summary_path.c_str() : "";
}

size_t bbg_experiment_failure_count(const bbg_experiment* experiment) {
  return experiment ? experiment->failures : 0;
}

size_t bbg_experiment_dim(const bbg_experiment* experiment) {
  if (experiment == nullptr) return 0;
  try {
    return bbg::Problem(experiment->config).dim();
  } catch (...) {
    return 0;
  }
}

bbg_status bbg_experiment_opt(bbg_experiment* experiment, double* value, size_t* members, size_t capacity,
                              size_t* count, int* exact) {
  BBG_REQUIRE(experiment != nullptr && value != nullptr && count != nullptr && exact != nullptr,
              "null argument");
  return guarded([&] {
    const bbg::Problem problem(experiment->config);
    const std::uint64_t seed = experiment->options.seed_override.value_or(experiment->config.seeds.front());
    if (problem.discrete()) {
      const auto f = problem.make_set_oracle();
      const bbg::BruteForceResult r = bbg::brute_force_opt(*f, problem.constraint());
      *value = r.value;
      *exact = 1;
      *count = r.best.size();
      if (r.best.size() > capacity || (members == nullptr && !r.best.empty())) {
        return fail(BBG_ERR_BUFFER, "member buffer too small");
      }
      for (std::size_t k = 0; k < r.best.size(); ++k) members[k] = r.best[k];
      return BBG_OK;
    }
    const auto f = problem.make_exact_oracle();
    const bbg::ReferenceOptimum r = bbg::continuous_reference_opt(*f, problem.constraint(), 20, 2000, seed);
    *value = r.value;
    *exact = 0;
    *count = 0;
    return BBG_OK;
  });
}

bbg_status bbg_plot_trace(const char* trace_csv, const char* svg_path) {
  BBG_REQUIRE(trace_csv != nullptr && svg_path != nullptr, "null argument");
  return guarded([&] {
    bbg::write_svg_plot(trace_csv, svg_path);
    return BBG_OK;
  });
}

bbg_status bbg_constraint_block_budget(size_t dim, const size_t* block_sizes, const double* budgets,
                                       size_t nblocks, double cap, bbg_constraint** out) {
  BBG_REQUIRE(out != nullptr, "null output");
  BBG_REQUIRE(nblocks == 0 || (block_sizes != nullptr && budgets != nullptr), "null block arrays");
  return guarded([&] {
    auto blocks = consecutive_blocks(block_sizes, nblocks);
    bbg::ConstraintSpec spec = [&] {
      if (nblocks == 0) return bbg::ConstraintSpec::box(bbg::Point::Constant(static_cast<Eigen::Index>(dim), cap));
      std::vector<bbg::Block> budgeted;
      for (std::size_t k = 0; k < nblocks; ++k) budgeted.push_back(bbg::Block{std::move(blocks[k]), budgets[k]});
      return bbg::ConstraintSpec::block_budget(dim, std::move(budgeted), cap);
    }();
    auto* c = new bbg_constraint{spec, spec.polytope()};
    *out = c;
    return BBG_OK;
  });
}

bbg_status bbg_constraint_partition_matroid(size_t dim, const size_t* block_sizes, const int* limits,
                                            size_t nblocks, bbg_constraint** out) {
  BBG_REQUIRE(out != nullptr, "null output");
  BBG_REQUIRE(nblocks == 0 || (block_sizes != nullptr && limits != nullptr), "null block arrays");
  return guarded([&] {
    bbg::ConstraintSpec spec = bbg::ConstraintSpec::partition_matroid(
        dim, consecutive_blocks(block_sizes, nblocks), std::vector<int>(limits, limits + nblocks));
    *out = new bbg_constraint{spec, spec.polytope()};
    return BBG_OK;
  });
}

bbg_status bbg_constraint_transform(const bbg_constraint* constraint, double delta, bbg_constraint** out) {
  BBG_REQUIRE(constraint != nullptr && out != nullptr, "null argument");
  BBG_REQUIRE(constraint->spec.has_value(), "constraint is already transformed");
  return guarded([&] {
    const bbg::ConstraintSpec& spec = *constraint->spec;
    const bbg::BoxDomain domain(
        bbg::Point::Constant(static_cast<Eigen::Index>(spec.dim()), spec.polytope().upper.maxCoeff()));
    const bbg::TransformedConstraint t = bbg::transform_constraint(domain, spec, delta);
    *out = new bbg_constraint{std::nullopt, t.polytope()};
    return BBG_OK;
  });
}

void bbg_constraint_destroy(bbg_constraint* constraint) { delete constraint; }

size_t bbg_constraint_dim(const bbg_constraint* constraint) {
  return constraint ? constraint->polytope.dim() : 0;
}

bbg_status bbg_constraint_contains(const bbg_constraint* constraint, const double* x, double tol, int* result) {
  BBG_REQUIRE(constraint != nullptr && x != nullptr && result != nullptr, "null argument");
  BBG_REQUIRE(tol >= 0.0, "tolerance must be nonnegative");
  return guarded([&] {
    *result = bbg::contains(constraint->polytope, to_point(x, constraint->polytope.dim()), tol) ? 1 : 0;
    return BBG_OK;
  });
}

bbg_status bbg_constraint_lmo(const bbg_constraint* constraint, const double* g, double* out) {
  BBG_REQUIRE(constraint != nullptr && g != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    from_point(bbg::lmo(constraint->polytope, to_point(g, constraint->polytope.dim())), out);
    return BBG_OK;
  });
}

bbg_status bbg_constraint_project(const bbg_constraint* constraint, const double* y, double* out) {
  BBG_REQUIRE(constraint != nullptr && y != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    from_point(bbg::project(constraint->polytope, to_point(y, constraint->polytope.dim())), out);
    return BBG_OK;
  });
}

bbg_status bbg_rho_schedule(uint64_t t, double* out) {
  BBG_REQUIRE(out != nullptr, "null output");
  return guarded([&] {
    *out = bbg::rho_schedule(static_cast<std::size_t>(t));
    return BBG_OK;
  });
}

}  // extern "C"

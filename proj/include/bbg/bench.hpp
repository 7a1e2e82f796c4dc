#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bbg/algorithms.hpp"
#include "bbg/core.hpp"
#include "bbg/objectives.hpp"

namespace bbg {

// ---------------------------------------------------------------------------
// Data files

// One "u v" pair of 0-based node ids per line, whitespace separated. Blank
// lines and lines starting with '#' are skipped. Node count = max id + 1.
Graph load_edge_list(const std::filesystem::path& path);
Graph parse_edge_list(const std::string& text);

// Header-free, comma separated, row-major reals.
Matrix load_matrix_csv(const std::filesystem::path& path);
Matrix parse_matrix_csv(const std::string& text);

// ---------------------------------------------------------------------------
// Exhaustive optimum

inline constexpr std::uint64_t kMaxBruteForceSets = 1'000'000;

struct BruteForceResult {
  Subset best;
  double value = 0.0;
  std::uint64_t sets_evaluated = 0;
};

// Number of independent sets of the partition matroid (product over blocks
// of sum_{j <= k} C(|block|, j), times 2^free).
std::uint64_t count_independent_sets(const ConstraintSpec& matroid);

// Maximizes f over every independent set, via value() (uncounted). Throws
// CapacityError above kMaxBruteForceSets sets.
BruteForceResult brute_force_opt(const SetOracle& f, const ConstraintSpec& matroid);

// Best value of projected exact-gradient ascent over random feasible starts;
// a comparison target for continuous instances too large to solve exactly.
struct ReferenceOptimum {
  Point point;
  double value = 0.0;
};
ReferenceOptimum continuous_reference_opt(const ValueOracle& f, const ConstraintSpec& constraint,
                                          std::size_t restarts, std::size_t iterations,
                                          std::uint64_t seed);

// ---------------------------------------------------------------------------
// Experiment configuration
//
// INI-style text: an [experiment] section followed by one section per
// algorithm (bcg, dbg, scg, ga, zga), run in file order. Comments start with ';'.

enum class ObjectiveKind { Nqp, Coverage, CoverageSet, LogDet, Influence };

const char* to_string(ObjectiveKind kind);
bool is_discrete(ObjectiveKind kind);

struct ObjectiveConfig {
  ObjectiveKind kind = ObjectiveKind::Nqp;
  std::size_t dim = 20;              // nqp
  std::uint64_t instance_seed = 1;   // seed for synthesized instances
  std::string data_file;             // coverage topics (k x d) or logdet data (n x d)
  std::size_t topics = 10;           // synthesized coverage
  std::size_t articles = 24;
  std::size_t rows = 200;            // synthesized logdet data
  std::size_t attributes = 22;
  double bandwidth = 0.75;
  std::string graph = "karate";      // influence: "karate" or an edge-list path
  double noise = 0.0;                // sigma0 for zeroth-order continuous queries
};

struct ConstraintConfig {
  ConstraintKind kind = ConstraintKind::BlockBudget;
  std::vector<std::size_t> block_sizes;  // consecutive blocks
  std::vector<double> budgets;           // budgets or matroid limits
  double cap = 1.0;
};

struct AlgorithmConfig {
  std::string name;
  AlgoParams params;
};

struct ExperimentConfig {
  std::string name = "experiment";
  ObjectiveConfig objective;
  ConstraintConfig constraint;
  std::vector<AlgorithmConfig> algorithms;
  std::vector<std::uint64_t> seeds{1};
  std::string output;   // file stem; defaults to name
  bool timing = true;   // false writes zero times so output is byte-reproducible
  std::filesystem::path base_dir;  // relative data paths resolve here
};

// Throws ParseError on any syntax, semantic, or data-file problem.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// Resolved instance: data loaded, dimensions checked, constraint built.
// Oracles are created fresh per run so query counters never mix.
class Problem {
 public:
  explicit Problem(const ExperimentConfig& config);

  bool discrete() const { return is_discrete(kind_); }
  std::size_t dim() const { return constraint_.dim(); }
  const ConstraintSpec& constraint() const { return constraint_; }

  // Noise (if configured) is seeded from `seed`.
  std::unique_ptr<ValueOracle> make_value_oracle(std::uint64_t seed) const;
  std::unique_ptr<ValueOracle> make_exact_oracle() const;
  std::unique_ptr<SetOracle> make_set_oracle() const;

 private:
  ObjectiveKind kind_;
  double noise_ = 0.0;
  std::shared_ptr<const QuadraticInstance> quadratic_;
  std::shared_ptr<const Matrix> matrix_;
  std::shared_ptr<const Graph> graph_;
  ConstraintSpec constraint_;
};

struct RunOptions {
  std::filesystem::path out_dir = ".";
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed_override;
};

struct CellFailure {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::string message;
};

struct ExperimentOutput {
  std::filesystem::path trace_csv;
  std::filesystem::path summary_csv;
  std::size_t trace_rows = 0;
  std::size_t summary_rows = 0;
  std::vector<CellFailure> failures;
};

// Runs every (algorithm, seed) cell and writes
//   <stem>_trace.csv   algorithm,seed,iteration,queries,elapsed_ms,value
//   <stem>_summary.csv algorithm,final_value_mean,final_value_sd,total_queries,relative_runtime
// Failed cells are reported in the result (and <stem>_errors.csv); the
// remaining cells still run.
ExperimentOutput run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

// Reads a trace CSV and writes a value-vs-queries line chart, one line per
// algorithm (averaged over seeds).
void write_svg_plot(const std::filesystem::path& trace_csv, const std::filesystem::path& svg_path);

}  // namespace bbg

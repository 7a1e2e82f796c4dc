// Experiment configuration parsing and problem construction.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "bbg/bench.hpp"
#include "bbg/error.hpp"

namespace bbg {

namespace pt = boost::property_tree;

const char* to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::Nqp:
      return "nqp";
    case ObjectiveKind::Coverage:
      return "coverage";
    case ObjectiveKind::CoverageSet:
      return "coverage_set";
    case ObjectiveKind::LogDet:
      return "logdet";
    case ObjectiveKind::Influence:
      return "influence";
  }
  return "unknown";
}

bool is_discrete(ObjectiveKind kind) {
  return kind == ObjectiveKind::CoverageSet || kind == ObjectiveKind::LogDet ||
         kind == ObjectiveKind::Influence;
}

namespace {

const std::set<std::string> kExperimentKeys{
    "name",   "objective", "dim",  "instance_seed", "data_file",  "topics", "articles",
    "rows",   "attributes", "bandwidth", "graph", "noise", "constraint", "blocks",
    "budgets", "limits", "cap", "seeds", "output", "timing"};
const std::set<std::string> kAlgorithmKeys{"iterations", "delta",  "batch",
                                           "samples",    "step0", "value_samples"};
const std::set<std::string> kAlgorithms{"bcg", "dbg", "scg", "ga", "zga"};

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& raw) {
  const std::string s = trimmed(raw);
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(fmt::format("key '{}': '{}' is not a valid number", key, raw));
  }
  return v;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& raw) {
  std::vector<T> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(key, item));
  if (out.empty()) throw ParseError(fmt::format("key '{}' needs at least one value", key));
  return out;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string s = trimmed(raw);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ParseError(fmt::format("key '{}': '{}' is not a boolean", key, raw));
}

void check_keys(const pt::ptree& section, const std::string& name, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : section) {
    if (!allowed.count(key)) throw ParseError(fmt::format("[{}]: unknown key '{}'", name, key));
  }
}

ObjectiveKind parse_objective(const std::string& raw) {
  const std::string s = trimmed(raw);
  for (ObjectiveKind k : {ObjectiveKind::Nqp, ObjectiveKind::Coverage, ObjectiveKind::CoverageSet,
                          ObjectiveKind::LogDet, ObjectiveKind::Influence}) {
    if (s == to_string(k)) return k;
  }
  throw ParseError(fmt::format("unknown objective '{}'", raw));
}

ConstraintKind parse_constraint_kind(const std::string& raw) {
  const std::string s = trimmed(raw);
  for (ConstraintKind k : {ConstraintKind::Box, ConstraintKind::BlockBudget, ConstraintKind::PartitionMatroid}) {
    if (s == to_string(k)) return k;
  }
  throw ParseError(fmt::format("unknown constraint '{}'", raw));
}

// Section headers in file order. The INI reader drops sections without keys,
// but an algorithm section with all defaults is meaningful.
std::vector<std::string> section_names(const std::string& text) {
  std::vector<std::string> names;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trimmed(line);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']') continue;
    std::string name = trimmed(t.substr(1, t.size() - 2));
    if (std::find(names.begin(), names.end(), name) != names.end()) {
      throw ParseError(fmt::format("section [{}] appears twice", name));
    }
    names.push_back(std::move(name));
  }
  return names;
}

AlgoParams parse_params(const pt::ptree& section, const std::string& name) {
  check_keys(section, name, kAlgorithmKeys);
  AlgoParams p;
  for (const auto& [key, node] : section) {
    const std::string& v = node.data();
    if (key == "iterations") p.iterations = parse_number<std::size_t>(key, v);
    if (key == "delta") p.delta = parse_number<double>(key, v);
    if (key == "batch") p.batch = parse_number<std::size_t>(key, v);
    if (key == "samples") p.samples = parse_number<std::size_t>(key, v);
    if (key == "step0") p.step0 = parse_number<double>(key, v);
    if (key == "value_samples") p.value_samples = parse_number<std::size_t>(key, v);
  }
  try {
    p.validate();
  } catch (const ArgumentError& e) {
    throw ParseError(fmt::format("[{}]: {}", name, e.what()));
  }
  return p;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(fmt::format("config line {}: {}", e.line(), e.message()));
  }

  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  for (const auto& [key, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ParseError(fmt::format("key '{}' appears outside any section", key));
    }
  }
  bool saw_experiment = false;
  const pt::ptree no_keys;
  for (const std::string& section : section_names(text)) {
    const pt::ptree& body = tree.get_child(pt::ptree::path_type(section, '\0'), no_keys);
    if (section == "experiment") {
      saw_experiment = true;
      check_keys(body, section, kExperimentKeys);
      std::vector<double> limits;
      for (const auto& [key, node] : body) {
        const std::string& v = node.data();
        ObjectiveConfig& o = cfg.objective;
        if (key == "name") cfg.name = trimmed(v);
        if (key == "objective") o.kind = parse_objective(v);
        if (key == "dim") o.dim = parse_number<std::size_t>(key, v);
        if (key == "instance_seed") o.instance_seed = parse_number<std::uint64_t>(key, v);
        if (key == "data_file") o.data_file = trimmed(v);
        if (key == "topics") o.topics = parse_number<std::size_t>(key, v);
        if (key == "articles") o.articles = parse_number<std::size_t>(key, v);
        if (key == "rows") o.rows = parse_number<std::size_t>(key, v);
        if (key == "attributes") o.attributes = parse_number<std::size_t>(key, v);
        if (key == "bandwidth") o.bandwidth = parse_number<double>(key, v);
        if (key == "graph") o.graph = trimmed(v);
        if (key == "noise") o.noise = parse_number<double>(key, v);
        if (key == "constraint") cfg.constraint.kind = parse_constraint_kind(v);
        if (key == "blocks") cfg.constraint.block_sizes = parse_list<std::size_t>(key, v);
        if (key == "budgets") cfg.constraint.budgets = parse_list<double>(key, v);
        if (key == "limits") limits = parse_list<double>(key, v);
        if (key == "cap") cfg.constraint.cap = parse_number<double>(key, v);
        if (key == "seeds") cfg.seeds = parse_list<std::uint64_t>(key, v);
        if (key == "output") cfg.output = trimmed(v);
        if (key == "timing") cfg.timing = parse_bool(key, v);
      }
      if (!limits.empty()) {
        if (!cfg.constraint.budgets.empty()) throw ParseError("give either 'budgets' or 'limits', not both");
        cfg.constraint.budgets = limits;
      }
    } else if (kAlgorithms.count(section)) {
      cfg.algorithms.push_back(AlgorithmConfig{section, parse_params(body, section)});
    } else {
      throw ParseError(fmt::format("unknown section [{}]", section));
    }
  }
  if (!saw_experiment) throw ParseError("missing [experiment] section");
  if (cfg.algorithms.empty()) throw ParseError("no algorithm sections given");
  if (cfg.seeds.empty()) throw ParseError("'seeds' must list at least one seed");
  if (cfg.output.empty()) cfg.output = cfg.name;
  if (cfg.output.empty() || cfg.output.find('/') != std::string::npos) {
    throw ParseError(fmt::format("output stem '{}' must be a plain file name", cfg.output));
  }
  if (!(cfg.objective.noise >= 0.0)) throw ParseError("noise must be nonnegative");

  const bool discrete = is_discrete(cfg.objective.kind);
  for (const auto& algo : cfg.algorithms) {
    if (discrete && algo.name == "bcg") {
      throw ParseError("bcg runs on continuous objectives; use dbg for set functions");
    }
    if (!discrete && algo.name == "dbg") {
      throw ParseError("dbg runs on set functions; use bcg for continuous objectives");
    }
  }
  if (discrete && cfg.constraint.kind != ConstraintKind::PartitionMatroid) {
    throw ParseError(fmt::format("objective '{}' needs constraint = partition_matroid",
                                 to_string(cfg.objective.kind)));
  }

  // Build once so data and dimension problems surface as config errors.
  try {
    Problem probe(cfg);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open config '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

// ---------------------------------------------------------------------------

namespace {

std::filesystem::path resolve(const ExperimentConfig& cfg, const std::string& file) {
  std::filesystem::path p(file);
  if (p.is_relative() && !cfg.base_dir.empty()) p = cfg.base_dir / p;
  return p;
}

ConstraintSpec build_constraint(const ConstraintConfig& c, std::size_t dim) {
  if (c.kind == ConstraintKind::Box) {
    if (!c.block_sizes.empty() || !c.budgets.empty()) {
      throw ParseError("a box constraint takes no blocks or budgets");
    }
    return ConstraintSpec::box(Point::Constant(static_cast<Eigen::Index>(dim), c.cap));
  }
  if (c.block_sizes.size() != c.budgets.size()) {
    throw ParseError(fmt::format("{} blocks but {} budgets/limits", c.block_sizes.size(), c.budgets.size()));
  }
  std::size_t next = 0;
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t size : c.block_sizes) {
    if (size == 0) throw ParseError("block sizes must be positive");
    std::vector<std::size_t> idx(size);
    for (std::size_t k = 0; k < size; ++k) idx[k] = next++;
    blocks.push_back(std::move(idx));
  }
  if (next > dim) {
    throw ParseError(fmt::format("blocks cover {} coordinates but the objective has {}", next, dim));
  }
  if (c.kind == ConstraintKind::PartitionMatroid) {
    std::vector<int> limits;
    for (double b : c.budgets) {
      if (b != std::floor(b)) throw ParseError(fmt::format("matroid limit {} is not an integer", b));
      limits.push_back(static_cast<int>(b));
    }
    return ConstraintSpec::partition_matroid(dim, std::move(blocks), std::move(limits));
  }
  std::vector<Block> budgeted;
  for (std::size_t k = 0; k < blocks.size(); ++k) budgeted.push_back(Block{std::move(blocks[k]), c.budgets[k]});
  return ConstraintSpec::block_budget(dim, std::move(budgeted), c.cap);
}

}  // namespace

Problem::Problem(const ExperimentConfig& config)
    : kind_(config.objective.kind), noise_(config.objective.noise), constraint_(ConstraintSpec::box(Point::Ones(1))) {
  const ObjectiveConfig& o = config.objective;
  std::size_t dim = 0;
  switch (kind_) {
    case ObjectiveKind::Nqp:
      quadratic_ = std::make_shared<QuadraticInstance>(nqp_generate(o.dim, o.instance_seed));
      dim = o.dim;
      break;
    case ObjectiveKind::Coverage:
    case ObjectiveKind::CoverageSet: {
      Matrix topics = o.data_file.empty() ? synthesize_topics(o.topics, o.articles, o.instance_seed)
                                          : load_matrix_csv(resolve(config, o.data_file));
      validate_probability_matrix(topics, "topic matrix");
      dim = static_cast<std::size_t>(topics.cols());
      matrix_ = std::make_shared<Matrix>(std::move(topics));
      break;
    }
    case ObjectiveKind::LogDet: {
      const Matrix data = o.data_file.empty() ? synthesize_data(o.rows, o.attributes, o.instance_seed)
                                              : load_matrix_csv(resolve(config, o.data_file));
      matrix_ = std::make_shared<Matrix>(rbf_covariance(data, o.bandwidth));
      dim = static_cast<std::size_t>(data.cols());
      break;
    }
    case ObjectiveKind::Influence:
      graph_ = std::make_shared<Graph>(o.graph == "karate" ? karate_club()
                                                           : load_edge_list(resolve(config, o.graph)));
      dim = graph_->node_count();
      if (dim == 0) throw ParseError("graph has no nodes");
      break;
  }
  if (dim == 0) throw ParseError("objective dimension must be positive");
  constraint_ = build_constraint(config.constraint, dim);
}

std::unique_ptr<ValueOracle> Problem::make_exact_oracle() const {
  switch (kind_) {
    case ObjectiveKind::Nqp:
      return std::make_unique<QuadraticObjective>(*quadratic_);
    case ObjectiveKind::Coverage:
      return std::make_unique<CoverageObjective>(matrix_);
    default:
      throw ArgumentError(fmt::format("objective '{}' is a set function", to_string(kind_)));
  }
}

std::unique_ptr<ValueOracle> Problem::make_value_oracle(std::uint64_t seed) const {
  std::unique_ptr<ValueOracle> exact = make_exact_oracle();
  if (noise_ == 0.0) return exact;
  return noisy_wrap(std::shared_ptr<ValueOracle>(std::move(exact)), noise_, seed);
}

std::unique_ptr<SetOracle> Problem::make_set_oracle() const {
  switch (kind_) {
    case ObjectiveKind::CoverageSet:
      return std::make_unique<CoverageSetObjective>(matrix_);
    case ObjectiveKind::LogDet:
      return std::make_unique<LogDetObjective>(matrix_);
    case ObjectiveKind::Influence:
      return std::make_unique<InfluenceObjective>(graph_);
    default:
      throw ArgumentError(fmt::format("objective '{}' is continuous", to_string(kind_)));
  }
}

}  // namespace bbg

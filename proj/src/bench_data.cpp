// Data-file loaders and exhaustive optimum for the experiment harness.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>

#include <fmt/format.h>

#include "bbg/bench.hpp"
#include "bbg/error.hpp"
#include "bbg/polytope.hpp"

namespace bbg {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(const std::string& text) {
  std::vector<std::string_view> lines;
  std::string_view rest(text);
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    lines.push_back(rest.substr(0, nl));
    if (nl == std::string_view::npos) break;
    rest.remove_prefix(nl + 1);
  }
  return lines;
}

}  // namespace

Graph parse_edge_list(const std::string& text) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t max_node = 0;
  bool any = false;
  const auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string_view line = trim(lines[ln]);
    if (line.empty() || line.front() == '#') continue;
    std::istringstream tokens{std::string(line)};
    std::string a;
    std::string b;
    std::string extra;
    if (!(tokens >> a >> b) || (tokens >> extra)) {
      throw ParseError(fmt::format("edge list line {}: expected two node ids", ln + 1));
    }
    long long ids[2];
    const std::string* parts[2] = {&a, &b};
    for (int k = 0; k < 2; ++k) {
      const std::string& tok = *parts[k];
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), ids[k]);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(fmt::format("edge list line {}: '{}' is not an integer", ln + 1, tok));
      }
      if (ids[k] < 0) throw ParseError(fmt::format("edge list line {}: negative node id {}", ln + 1, ids[k]));
    }
    edges.emplace_back(static_cast<std::size_t>(ids[0]), static_cast<std::size_t>(ids[1]));
    max_node = std::max({max_node, edges.back().first, edges.back().second});
    any = true;
  }
  Graph g(any ? max_node + 1 : 0);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

Graph load_edge_list(const std::filesystem::path& path) {
  try {
    return parse_edge_list(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

Matrix parse_matrix_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  const auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string_view line = trim(lines[ln]);
    if (line.empty()) continue;
    std::vector<double> row;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view cell = trim(rest.substr(0, comma));
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw ParseError(fmt::format("CSV row {}: cell '{}' is not a number", ln + 1, cell));
      }
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(fmt::format("CSV row {}: has {} columns, expected {}", ln + 1, row.size(),
                                   rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("CSV matrix is empty");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

Matrix load_matrix_csv(const std::filesystem::path& path) {
  try {
    return parse_matrix_csv(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// All subsets of `items` with at most `limit` elements, in lexicographic order.
std::vector<Subset> bounded_subsets(const std::vector<std::size_t>& items, std::size_t limit) {
  std::vector<Subset> out{Subset{}};
  for (std::size_t item : items) {
    const std::size_t n = out.size();
    for (std::size_t k = 0; k < n; ++k) {
      if (out[k].size() < limit) {
        Subset s = out[k];
        s.push_back(item);
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

void require_partition(const ConstraintSpec& matroid) {
  if (matroid.kind() != ConstraintKind::PartitionMatroid) {
    throw ArgumentError("brute-force optimum needs a partition-matroid constraint");
  }
}

}  // namespace

std::uint64_t count_independent_sets(const ConstraintSpec& matroid) {
  require_partition(matroid);
  const auto& blocks = matroid.polytope().blocks;
  std::size_t covered = 0;
  long double total = 1.0L;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const std::size_t n = blocks[b].indices.size();
    const std::size_t k = std::min<std::size_t>(n, static_cast<std::size_t>(matroid.limits()[b]));
    std::uint64_t ways = 0;
    for (std::size_t j = 0; j <= k; ++j) ways += binomial(n, j);
    total *= static_cast<long double>(ways);
    covered += n;
  }
  total *= std::pow(2.0L, static_cast<long double>(matroid.dim() - covered));
  if (total > 1e18L) return UINT64_MAX;
  return static_cast<std::uint64_t>(total);
}

BruteForceResult brute_force_opt(const SetOracle& f, const ConstraintSpec& matroid) {
  require_partition(matroid);
  if (matroid.dim() != f.ground_size()) {
    throw ArgumentError("brute-force optimum: constraint and ground set sizes differ");
  }
  const std::uint64_t count = count_independent_sets(matroid);
  if (count > kMaxBruteForceSets) {
    throw CapacityError(fmt::format("{} independent sets exceed the brute-force limit of {}", count,
                                    kMaxBruteForceSets));
  }

  std::vector<std::vector<Subset>> groups;
  std::vector<bool> owned(matroid.dim(), false);
  const auto& blocks = matroid.polytope().blocks;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t i : blocks[b].indices) owned[i] = true;
    groups.push_back(bounded_subsets(blocks[b].indices, static_cast<std::size_t>(matroid.limits()[b])));
  }
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < owned.size(); ++i) {
    if (!owned[i]) free.push_back(i);
  }
  if (!free.empty()) groups.push_back(bounded_subsets(free, free.size()));

  BruteForceResult best;
  best.value = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(groups.size(), 0);
  Subset s;
  while (true) {
    s.clear();
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const Subset& part = groups[g][pick[g]];
      s.insert(s.end(), part.begin(), part.end());
    }
    std::sort(s.begin(), s.end());
    const double v = f.value(s);
    ++best.sets_evaluated;
    if (v > best.value) {
      best.value = v;
      best.best = s;
    }
    std::size_t g = 0;
    while (g < groups.size() && ++pick[g] == groups[g].size()) {
      pick[g] = 0;
      ++g;
    }
    if (g == groups.size()) break;
  }
  return best;
}

ReferenceOptimum continuous_reference_opt(const ValueOracle& f, const ConstraintSpec& constraint,
                                          std::size_t restarts, std::size_t iterations,
                                          std::uint64_t seed) {
  if (!f.has_gradient()) throw ArgumentError("reference optimum needs an exact gradient");
  if (restarts == 0 || iterations == 0) throw ArgumentError("restarts and iterations must be positive");
  require_dim(Point::Zero(static_cast<Eigen::Index>(constraint.dim())), f.dim(), "reference optimum");
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const BudgetPolytope& poly = constraint.polytope();
  const double eta0 = diameter_bound(poly) / f.lipschitz();

  ReferenceOptimum best;
  best.value = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < restarts; ++r) {
    Point x(static_cast<Eigen::Index>(f.dim()));
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = unif(rng) * poly.upper[i];
    x = project(poly, x);
    for (std::size_t t = 1; t <= iterations; ++t) {
      x = project(poly, x + (eta0 / std::sqrt(static_cast<double>(t))) * f.gradient(x));
    }
    const double v = f.value(x);
    if (v > best.value) {
      best.value = v;
      best.point = x;
    }
  }
  return best;
}

}  // namespace bbg

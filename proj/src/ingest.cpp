// Copyright 2026 The nfrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nfrec/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "nfrec/error.hpp"
#include "nfrec/random.hpp"

namespace nfrec {
namespace {

constexpr double kDefaultCost = 10.0;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  std::istringstream is(s);
  is >> out;
  return !is.fail() && (is.eof() || (is >> std::ws).eof());
}

// Assigns dense indices in order of first appearance.
class LabelIndex {
 public:
  int id(const std::string& label) {
    auto [it, inserted] = index_.try_emplace(label, static_cast<int>(labels_.size()));
    if (inserted) labels_.push_back(label);
    return it->second;
  }
  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> labels_;
};

Instance default_instance(Matrix similarity) {
  const auto k = static_cast<int>(similarity.rows());
  return Instance(std::move(similarity), Vector::Constant(k, kDefaultCost), uniform_popularity(k),
                  {});
}

Matrix submatrix(const Matrix& m, const std::vector<int>& keep) {
  const auto n = static_cast<Eigen::Index>(keep.size());
  Matrix out(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) out(a, b) = m(keep[a], keep[b]);
  return out;
}

std::vector<std::string> select_labels(const std::vector<std::string>& labels,
                                       const std::vector<int>& keep) {
  std::vector<std::string> out;
  out.reserve(keep.size());
  for (int i : keep) out.push_back(labels[i]);
  return out;
}

}  // namespace

std::string IngestReport::to_key_value() const {
  std::ostringstream os;
  os << std::setprecision(12) << "nodes " << nodes << '\n'
     << "edges " << edges << '\n'
     << "mean_out_degree " << mean_out_degree << '\n'
     << "mean_out_degree_cached " << mean_out_degree_cached << '\n'
     << "input_nodes " << input_nodes << '\n'
     << "pruned_nodes " << pruned_nodes << '\n'
     << "pruning_rounds " << pruning_rounds << '\n';
  return os.str();
}

// --- ratings ---------------------------------------------------------------

std::vector<Rating> read_ratings_csv(std::istream& in) {
  std::vector<Rating> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (fields.size() < 3)
      throw DataError("ratings line " + std::to_string(line_no) + ": expected user,item,rating");
    double value = 0.0;
    if (!parse_double(fields[2], value)) {
      if (out.empty() && line_no == 1) continue;  // header
      throw DataError("ratings line " + std::to_string(line_no) + ": rating is not numeric");
    }
    out.push_back({fields[0], fields[1], value});
  }
  return out;
}

ItemSimilarity item_similarity_from_ratings(const std::vector<Rating>& ratings,
                                            const RatingsParams& params) {
  if (ratings.empty()) throw IngestError("ratings table is empty");
  if (params.neighborhood < 1) throw InvalidArgument("neighborhood size must be >= 1");
  LabelIndex users, items;
  std::map<std::pair<int, int>, double> observed;  // (user, item) -> rating, last one wins
  for (const auto& r : ratings) observed[{users.id(r.user), items.id(r.item)}] = r.value;
  const int nu = users.size();
  const int ni = items.size();

  std::vector<std::vector<std::pair<int, double>>> by_user(static_cast<std::size_t>(nu));
  for (const auto& [key, value] : observed) by_user[key.first].push_back({key.second, value});
  std::vector<double> user_mean(static_cast<std::size_t>(nu), 0.0);
  for (int u = 0; u < nu; ++u) {
    double s = 0.0;
    for (const auto& e : by_user[u]) s += e.second;
    user_mean[u] = s / static_cast<double>(by_user[u].size());
  }

  // Adjusted cosine between items over co-rating users.
  Matrix dot = Matrix::Zero(ni, ni), norm_a = Matrix::Zero(ni, ni);
  for (int u = 0; u < nu; ++u) {
    for (const auto& [a, ra] : by_user[u]) {
      const double da = ra - user_mean[u];
      for (const auto& [b, rb] : by_user[u]) {
        const double db = rb - user_mean[u];
        dot(a, b) += da * db;
        norm_a(a, b) += da * da;
      }
    }
  }
  Matrix neighbor_sim = Matrix::Zero(ni, ni);
  for (int a = 0; a < ni; ++a) {
    for (int b = 0; b < ni; ++b) {
      if (a == b) continue;
      const double den = std::sqrt(norm_a(a, b) * norm_a(b, a));
      if (den > 0.0) neighbor_sim(a, b) = dot(a, b) / den;
    }
  }

  // Completed, user-centered rating vectors: items x users.
  Matrix centered = Matrix::Zero(ni, nu);
  std::vector<std::pair<double, double>> pool;
  for (int u = 0; u < nu; ++u) {
    std::vector<char> rated(static_cast<std::size_t>(ni), 0);
    for (const auto& [i, r] : by_user[u]) {
      rated[i] = 1;
      centered(i, u) = r - user_mean[u];
    }
    for (int a = 0; a < ni; ++a) {
      if (rated[a]) continue;
      pool.clear();
      for (const auto& [j, r] : by_user[u]) {
        const double s = neighbor_sim(a, j);
        if (s > 0.0) pool.push_back({s, r - user_mean[u]});
      }
      const auto k = std::min<std::size_t>(pool.size(), static_cast<std::size_t>(params.neighborhood));
      std::partial_sort(pool.begin(), pool.begin() + k, pool.end(),
                        [](const auto& x, const auto& y) { return x.first > y.first; });
      double num = 0.0, den = 0.0;
      for (std::size_t m = 0; m < k; ++m) {
        num += pool[m].first * pool[m].second;
        den += pool[m].first;
      }
      centered(a, u) = den > 0.0 ? num / den : 0.0;
    }
  }

  Vector norms = centered.rowwise().norm();
  Matrix sim = centered * centered.transpose();
  for (int a = 0; a < ni; ++a) {
    for (int b = 0; b < ni; ++b) {
      const double den = norms(a) * norms(b);
      sim(a, b) = (a == b || den == 0.0) ? 0.0 : std::clamp(sim(a, b) / den, -1.0, 1.0);
    }
  }
  return {std::move(sim), items.labels()};
}

IngestResult build_from_ratings(const std::vector<Rating>& ratings, const RatingsParams& params) {
  auto [sim, labels] = item_similarity_from_ratings(ratings, params);
  const int n = static_cast<int>(sim.rows());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (sim(a, b) < params.floor) sim(a, b) = 0.0;

  IngestReport report;
  report.input_nodes = n;
  std::vector<int> keep(static_cast<std::size_t>(n));
  std::iota(keep.begin(), keep.end(), 0);
  while (true) {
    std::vector<int> next;
    for (int a : keep) {
      int related = 0;
      for (int b : keep)
        if (sim(a, b) > 0.0) ++related;
      if (related >= params.min_related) next.push_back(a);
    }
    if (next.size() == keep.size()) break;
    ++report.pruning_rounds;
    keep = std::move(next);
    if (keep.empty()) break;
  }
  if (keep.empty())
    throw IngestError("ratings pipeline: every item was pruned (min_related = " +
                      std::to_string(params.min_related) + ")");

  Instance instance = default_instance(submatrix(sim, keep));
  IngestReport stats = degree_stats(instance);
  stats.input_nodes = report.input_nodes;
  stats.pruned_nodes = n - static_cast<int>(keep.size());
  stats.pruning_rounds = report.pruning_rounds;
  return {std::move(instance), stats, select_labels(labels, keep)};
}

// --- adjacency -------------------------------------------------------------

std::vector<std::pair<std::string, std::string>> read_edge_list(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> edges;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::string src, dst;
    if (!(is >> src >> dst))
      throw DataError("edge list line " + std::to_string(line_no) + ": expected 'src dst'");
    edges.emplace_back(src, dst);
  }
  return edges;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

// Kosaraju with explicit stacks. Returns a component id per node.
std::vector<int> strong_components(int n, const std::vector<std::vector<int>>& out,
                                   const std::vector<std::vector<int>>& in) {
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::pair<int, std::size_t>> stack{{s, 0}};
    seen[s] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < out[v].size()) {
        const int w = out[v][next++];
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::vector<int> component(static_cast<std::size_t>(n), -1);
  int count = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (component[*it] >= 0) continue;
    std::vector<int> stack{*it};
    component[*it] = count;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : in[v]) {
        if (component[w] < 0) {
          component[w] = count;
          stack.push_back(w);
        }
      }
    }
    ++count;
  }
  return component;
}

}  // namespace

IngestResult build_from_adjacency(const std::vector<std::pair<std::string, std::string>>& edges,
                                  std::uint64_t weight_seed, ComponentMode mode) {
  LabelIndex nodes;
  std::vector<std::pair<int, int>> arcs;
  for (const auto& [src, dst] : edges) {
    const int a = nodes.id(src);
    const int b = nodes.id(dst);
    if (a != b) arcs.emplace_back(a, b);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  const int n = nodes.size();
  if (n == 0 || arcs.empty()) throw IngestError("adjacency: graph has no edges");

  std::vector<int> component(static_cast<std::size_t>(n));
  if (mode == ComponentMode::kWeak) {
    DisjointSets sets(n);
    for (const auto& [a, b] : arcs) sets.unite(a, b);
    for (int v = 0; v < n; ++v) component[v] = sets.find(v);
  } else {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(n)), in(static_cast<std::size_t>(n));
    for (const auto& [a, b] : arcs) {
      out[a].push_back(b);
      in[b].push_back(a);
    }
    component = strong_components(n, out, in);
  }

  // Largest component; ties go to the one containing the earliest node.
  std::map<int, int> sizes;
  std::map<int, int> first_node;
  for (int v = 0; v < n; ++v) {
    ++sizes[component[v]];
    first_node.try_emplace(component[v], v);
  }
  int best = -1;
  for (const auto& [id, size] : sizes) {
    if (best < 0 || size > sizes[best] || (size == sizes[best] && first_node[id] < first_node[best]))
      best = id;
  }
  std::vector<int> keep;
  std::vector<int> position(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v) {
    if (component[v] == best) {
      position[v] = static_cast<int>(keep.size());
      keep.push_back(v);
    }
  }
  const auto k = static_cast<int>(keep.size());
  if (k < 2) throw IngestError("adjacency: largest component has fewer than two nodes");

  Matrix u = Matrix::Zero(k, k);
  RandomStream stream(weight_seed, 0);
  for (const auto& [a, b] : arcs) {
    if (position[a] < 0 || position[b] < 0) continue;
    u(position[a], position[b]) = 0.5 + 0.5 * stream.uniform();
  }
  Instance instance = default_instance(std::move(u));
  IngestReport report = degree_stats(instance);
  report.input_nodes = n;
  report.pruned_nodes = n - k;
  return {std::move(instance), report, select_labels(nodes.labels(), keep)};
}

// --- synthetic -------------------------------------------------------------

IngestResult build_synthetic(int k, std::uint64_t seed) {
  if (k < 101) throw InvalidArgument("build_synthetic: requires K >= 101");
  RandomStream stream(seed, 0);
  Matrix u = Matrix::Zero(k, k);
  std::vector<int> others;
  std::vector<int> chosen;
  for (int i = 0; i < k; ++i) {
    const auto degree = static_cast<std::ptrdiff_t>(1 + stream.below(100));
    others.clear();
    for (int j = 0; j < k; ++j)
      if (j != i) others.push_back(j);
    chosen.clear();
    std::sample(others.begin(), others.end(), std::back_inserter(chosen), degree, stream.engine());
    for (int j : chosen) u(i, j) = 0.5 + 0.5 * stream.uniform();
  }
  Instance instance = default_instance(std::move(u));
  IngestReport report = degree_stats(instance);
  report.input_nodes = k;
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) labels.push_back(std::to_string(i));
  return {std::move(instance), report, std::move(labels)};
}

// --- caching and statistics -----------------------------------------------

Instance apply_caching(const Instance& instance, double ratio, double cost_uncached,
                       double cost_cached) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidArgument("apply_caching: ratio must be in (0,1)");
  if (!(cost_cached >= 0.0 && cost_uncached >= cost_cached))
    throw InvalidArgument("apply_caching: requires 0 <= cost_cached <= cost_uncached");
  const int k = instance.size();
  const int m = std::clamp(static_cast<int>(std::ceil(ratio * k - 1e-9)), 1, k);
  std::vector<int> cached(static_cast<std::size_t>(m));
  std::iota(cached.begin(), cached.end(), 0);
  Vector cost = Vector::Constant(k, cost_uncached);
  cost.head(m).setConstant(cost_cached);
  return Instance(instance.similarity(), std::move(cost), uniform_popularity(k), std::move(cached));
}

IngestReport degree_stats(const Instance& instance) {
  IngestReport r;
  r.nodes = instance.size();
  r.input_nodes = r.nodes;
  std::size_t into_cache = 0;
  for (int i = 0; i < instance.size(); ++i) {
    for (const auto& e : instance.neighbors(i)) {
      ++r.edges;
      if (instance.is_cached(e.index)) ++into_cache;
    }
  }
  r.mean_out_degree = static_cast<double>(r.edges) / r.nodes;
  r.mean_out_degree_cached = static_cast<double>(into_cache) / r.nodes;
  return r;
}

std::vector<std::pair<int, double>> degree_ccdf(const Instance& instance) {
  std::vector<int> degrees;
  degrees.reserve(static_cast<std::size_t>(instance.size()));
  for (int i = 0; i < instance.size(); ++i)
    degrees.push_back(static_cast<int>(instance.neighbors(i).size()));
  std::sort(degrees.begin(), degrees.end());
  std::vector<std::pair<int, double>> out;
  const double n = static_cast<double>(degrees.size());
  for (std::size_t m = 0; m < degrees.size(); ++m) {
    if (m > 0 && degrees[m] == degrees[m - 1]) continue;
    out.emplace_back(degrees[m], static_cast<double>(degrees.size() - m) / n);
  }
  return out;
}

}  // namespace nfrec

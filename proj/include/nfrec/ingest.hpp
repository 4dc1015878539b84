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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nfrec/instance.hpp"

namespace nfrec {

/// Connectivity summary of a similarity graph (edge i -> j iff u_ij > 0).
struct IngestReport {
  int nodes = 0;
  std::size_t edges = 0;
  double mean_out_degree = 0.0;
  double mean_out_degree_cached = 0.0;  ///< edges landing in the cached set, per node
  int input_nodes = 0;                  ///< before pruning / component selection
  int pruned_nodes = 0;
  int pruning_rounds = 0;

  std::string to_key_value() const;
};

/// Builders emit uniform p0, cost 10 on every item and no cached set;
/// apply_caching assigns the cache afterwards.
struct IngestResult {
  Instance instance;
  IngestReport report;
  std::vector<std::string> labels;  ///< original identifier of every kept item
};

// --- ratings ---------------------------------------------------------------

struct Rating {
  std::string user;
  std::string item;
  double value = 0.0;
};

struct RatingsParams {
  double floor = 0.5;       ///< similarities below this become 0
  int min_related = 25;     ///< items with fewer related items are pruned
  int neighborhood = 50;    ///< k of the item-based rating predictor
};

/// Reads "user,item,rating[,...]" rows. A first line whose rating field is
/// not numeric is treated as a header.
std::vector<Rating> read_ratings_csv(std::istream& in);

struct ItemSimilarity {
  Matrix similarity;  ///< cosine in [-1,1], zero diagonal
  std::vector<std::string> labels;
};

/// Fills the rating matrix with item-based k-NN predictions (adjusted cosine
/// on co-rated users, ratings centered by user mean) and returns the cosine
/// similarity of the completed, centered item vectors.
ItemSimilarity item_similarity_from_ratings(const std::vector<Rating>& ratings,
                                            const RatingsParams& params);

/// item_similarity_from_ratings, then floor, then repeated removal of items
/// with fewer than min_related related items until nothing changes.
IngestResult build_from_ratings(const std::vector<Rating>& ratings, const RatingsParams& params);

// --- adjacency -------------------------------------------------------------

enum class ComponentMode { kWeak, kStrong };

/// Reads "src dst" pairs, one per line; blank lines and '#' comments skipped.
std::vector<std::pair<std::string, std::string>> read_edge_list(std::istream& in);

/// Keeps the largest connected component of the directed graph and gives each
/// kept edge a weight drawn from Uniform(0.5, 1) with `weight_seed`.
IngestResult build_from_adjacency(const std::vector<std::pair<std::string, std::string>>& edges,
                                  std::uint64_t weight_seed,
                                  ComponentMode mode = ComponentMode::kWeak);

// --- synthetic -------------------------------------------------------------

/// Every item gets Uniform{1..100} out-neighbors drawn without replacement
/// (never itself), with weights Uniform(0.5, 1). Requires K >= 101.
IngestResult build_synthetic(int k, std::uint64_t seed);

// --- caching and statistics -----------------------------------------------

/// Caches the first ceil(ratio * K) items at `cost_cached`, charges
/// `cost_uncached` elsewhere and sets p0 uniform.
Instance apply_caching(const Instance& instance, double ratio, double cost_uncached = 10.0,
                       double cost_cached = 0.0);

IngestReport degree_stats(const Instance& instance);

/// (d, fraction of items with out-degree >= d) for every distinct degree d.
std::vector<std::pair<int, double>> degree_ccdf(const Instance& instance);

}  // namespace nfrec

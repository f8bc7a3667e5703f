#pragma once

#include <cstdint>
#include <vector>

namespace ftsurf {

struct WeightedEdge {
  int u = 0;
  int v = 0;
  std::int64_t w = 0;
};

/// Maximum-weight matching on a general graph by the primal-dual blossom method,
/// O(n^3). With max_cardinality set, the result is the heaviest among the
/// maximum-cardinality matchings. Returns mate[v] (or -1).
std::vector<int> max_weight_matching(const std::vector<WeightedEdge>& edges, bool max_cardinality,
                                     int num_vertices = -1);

/// Minimum-weight perfect matching of a complete graph given as an n x n
/// row-major cost matrix (n even). Returns mate[v].
std::vector<int> min_weight_perfect_matching(const std::vector<std::int64_t>& cost, int n);

}  // namespace ftsurf

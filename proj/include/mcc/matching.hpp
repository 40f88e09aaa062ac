#pragma once

#include <cstdint>
#include <vector>

namespace mcc {

struct WeightedEdge {
  int u, v;
  int64_t w;
};

// Maximum-weight matching on a general graph (Edmonds' blossom algorithm with
// dual variables, O(n^3)). Returns mate[v] or -1. With max_cardinality the
// result is a maximum-weight matching among the maximum-cardinality ones.
std::vector<int> max_weight_matching(int n, const std::vector<WeightedEdge>& edges,
                                     bool max_cardinality);

// Events paired with each other or with the boundary at minimum total cost.
// dist is symmetric, bdist[i] is the cost of sending event i to the boundary.
// partner[i] = j, or -1 for the boundary.
struct BoundaryMatching {
  std::vector<int> partner;
  int64_t weight = 0;
};
BoundaryMatching match_with_boundary(const std::vector<std::vector<int64_t>>& dist,
                                     const std::vector<int64_t>& bdist);

// Exhaustive reference over all pairings, for small event counts.
BoundaryMatching match_with_boundary_brute(const std::vector<std::vector<int64_t>>& dist,
                                           const std::vector<int64_t>& bdist);

}  // namespace mcc

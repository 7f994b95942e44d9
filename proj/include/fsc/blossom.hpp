#pragma once

#include <cstdint>
#include <vector>

namespace fsc {

struct WeightedEdge {
  int u = 0;
  int v = 0;
  std::int64_t weight = 0;
};

// Maximum-weight matching in a general graph (Edmonds' blossom algorithm with
// a primal-dual weight adjustment, O(n^3)). Vertices are 0..n-1; returns
// mate[v], or -1 for unmatched vertices. With max_cardinality set, returns the
// heaviest among the maximum-cardinality matchings. Integer weights keep all
// dual arithmetic exact.
std::vector<int> max_weight_matching(int n, const std::vector<WeightedEdge>& edges, bool max_cardinality = false);

}  // namespace fsc

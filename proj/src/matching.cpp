#include "fsc/matching.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>

#include "fsc/blossom.hpp"

namespace fsc {

namespace {

constexpr std::uint16_t kFar = 0xFFFF;

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

DistanceOracle::DistanceOracle(const Lattice& lattice) : lattice_(&lattice), num_vertices_(lattice.num_vertices()) {
  adjacency_.assign(static_cast<std::size_t>(num_vertices_), {});
  dangling_.assign(static_cast<std::size_t>(num_vertices_), -1);
  for (int e = 0; e < lattice.num_qubits(); ++e) {
    const auto& ends = lattice.edge_vertices()[e];
    if (ends[0] != Lattice::kNone && ends[1] != Lattice::kNone) {
      adjacency_[ends[0]].push_back({ends[1], e});
      adjacency_[ends[1]].push_back({ends[0], e});
    } else if (ends[0] != Lattice::kNone || ends[1] != Lattice::kNone) {
      int v = ends[0] != Lattice::kNone ? ends[0] : ends[1];
      // A vertex can have a dangling edge at both ends only when L = 2; keep the lower one.
      if (dangling_[v] < 0) dangling_[v] = e;
    }
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());

  boundary_.assign(static_cast<std::size_t>(num_vertices_), kUnreachable);
  std::deque<int> queue;
  for (int v = 0; v < num_vertices_; ++v) {
    if (dangling_[v] >= 0) {
      boundary_[v] = 1;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (auto [w, e] : adjacency_[u]) {
      if (boundary_[w] != kUnreachable) continue;
      boundary_[w] = boundary_[u] + 1;
      queue.push_back(w);
    }
  }

  if (num_vertices_ <= kMaxTabulated) {
    table_.resize(static_cast<std::size_t>(num_vertices_) * num_vertices_);
    for (int s = 0; s < num_vertices_; ++s) {
      std::vector<std::uint16_t> r = bfs(s);
      std::copy(r.begin(), r.end(), table_.begin() + static_cast<std::ptrdiff_t>(s) * num_vertices_);
    }
  }
}

std::vector<std::uint16_t> DistanceOracle::bfs(int source) const {
  std::vector<std::uint16_t> dist(static_cast<std::size_t>(num_vertices_), kFar);
  std::vector<int> queue;
  queue.reserve(static_cast<std::size_t>(num_vertices_));
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int u = queue[head];
    for (auto [w, e] : adjacency_[u]) {
      if (dist[w] != kFar) continue;
      dist[w] = static_cast<std::uint16_t>(dist[u] + 1);
      queue.push_back(w);
    }
  }
  return dist;
}

const std::uint16_t* DistanceOracle::row(int source) const noexcept {
  if (table_.empty()) return nullptr;
  return table_.data() + static_cast<std::ptrdiff_t>(source) * num_vertices_;
}

std::int64_t DistanceOracle::distance(int u, int v) const {
  std::uint16_t d;
  if (const std::uint16_t* r = row(v)) {
    d = r[u];
  } else {
    d = bfs(v)[u];
  }
  return d == kFar ? kUnreachable : d;
}

void DistanceOracle::append_path(int u, const std::uint16_t* to_target, std::vector<int>& qubits) const {
  if (to_target[u] == kFar) throw std::logic_error("append_path: target unreachable");
  while (to_target[u] != 0) {
    bool moved = false;
    for (auto [w, e] : adjacency_[u]) {
      if (to_target[w] + 1 == to_target[u]) {
        qubits.push_back(e);
        u = w;
        moved = true;
        break;
      }
    }
    if (!moved) throw std::logic_error("append_path: distance row is not a BFS row");
  }
}

void DistanceOracle::append_boundary_path(int u, std::vector<int>& qubits) const {
  if (boundary_[u] == kUnreachable) throw std::logic_error("append_boundary_path: boundary unreachable");
  while (boundary_[u] != 1) {
    bool moved = false;
    for (auto [w, e] : adjacency_[u]) {
      if (boundary_[w] + 1 == boundary_[u]) {
        qubits.push_back(e);
        u = w;
        moved = true;
        break;
      }
    }
    if (!moved) throw std::logic_error("append_boundary_path: inconsistent boundary distances");
  }
  qubits.push_back(dangling_[u]);
}

MatchingGraph build_matching_graph(const Syndrome& syndrome, const DistanceOracle& oracle) {
  if (syndrome.bits.size() != static_cast<std::size_t>(oracle.num_vertices())) {
    throw std::invalid_argument("syndrome does not match the vertex checks of the lattice");
  }
  MatchingGraph g;
  for (int v = 0; v < oracle.num_vertices(); ++v) {
    if (syndrome.bits[v]) g.defects.push_back(v);
  }
  const int n = g.size();
  g.weights.assign(static_cast<std::size_t>(n) * n, 0);
  g.boundary.resize(static_cast<std::size_t>(n));
  std::vector<const std::uint16_t*> rows(static_cast<std::size_t>(n));
  if (!oracle.tabulated()) g.rows.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (oracle.tabulated()) {
      rows[i] = oracle.row(g.defects[i]);
    } else {
      g.rows[i] = oracle.bfs(g.defects[i]);
      rows[i] = g.rows[i].data();
    }
    g.boundary[i] = oracle.boundary_distance(g.defects[i]);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::uint16_t d = rows[j][g.defects[i]];
      g.weights[static_cast<std::size_t>(i) * n + j] = d == kFar ? kUnreachable : d;
    }
  }
  return g;
}

MatchingGraph matching_graph_from_weights(std::vector<std::vector<std::int64_t>> weights,
                                          std::vector<std::int64_t> boundary) {
  const std::size_t n = weights.size();
  if (boundary.size() != n) throw std::invalid_argument("boundary weights must match the defect count");
  MatchingGraph g;
  g.defects.resize(n);
  std::iota(g.defects.begin(), g.defects.end(), 0);
  g.weights.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i].size() != n) throw std::invalid_argument("weight matrix must be square");
    for (std::size_t j = 0; j < n; ++j) {
      if (weights[i][j] != weights[j][i]) throw std::invalid_argument("weight matrix must be symmetric");
      g.weights[i * n + j] = weights[i][j];
    }
  }
  g.boundary = std::move(boundary);
  return g;
}

// Pairing defects i, j instead of sending both to their partners saves
// gain(i, j) = b_i + b_j - w_ij, so the minimum-weight perfect matching of the
// partner graph is sum_i b_i minus a maximum-gain (not necessarily perfect)
// matching over defects. Pairs with gain <= 0 never help and are dropped, and
// the remaining gain graph splits into independent components.
std::vector<MatchedPair> min_weight_perfect_matching(const MatchingGraph& graph) {
  const int n = graph.size();
  std::int64_t largest = 0;
  for (std::int64_t w : graph.weights) {
    if (w < kUnreachable) largest = std::max(largest, w);
  }
  for (std::int64_t b : graph.boundary) {
    if (b < kUnreachable) largest = std::max(largest, b);
  }
  // Stand-in for a missing boundary: dearer than any matching of real edges.
  const std::int64_t no_boundary = (largest + 1) * (n + 1);
  auto boundary_cost = [&](int i) { return graph.boundary[i] < kUnreachable ? graph.boundary[i] : no_boundary; };

  std::vector<WeightedEdge> edges;
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::int64_t w = graph.weight(i, j);
      if (w >= kUnreachable) continue;
      std::int64_t gain = boundary_cost(i) + boundary_cost(j) - w;
      if (gain <= 0) continue;
      edges.push_back({i, j, gain});
      parent[find_root(parent, i)] = find_root(parent, j);
    }
  }

  std::vector<int> mate(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<int>> members(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) members[find_root(parent, i)].push_back(i);
  std::vector<int> local(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<WeightedEdge>> component_edges(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < members[r].size(); ++k) local[members[r][k]] = static_cast<int>(k);
  }
  for (const WeightedEdge& e : edges) {
    component_edges[find_root(parent, e.u)].push_back({local[e.u], local[e.v], e.weight});
  }
  for (int r = 0; r < n; ++r) {
    if (members[r].size() < 2) continue;
    std::vector<int> m = max_weight_matching(static_cast<int>(members[r].size()), component_edges[r]);
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (m[k] >= 0) mate[members[r][k]] = members[r][m[k]];
    }
  }

  std::vector<MatchedPair> pairs;
  for (int i = 0; i < n; ++i) {
    if (mate[i] < 0) {
      if (graph.boundary[i] >= kUnreachable) throw std::runtime_error("defect cannot be matched: no boundary reachable");
      pairs.push_back({i, kBoundary});
    } else if (mate[i] > i) {
      pairs.push_back({i, mate[i]});
    }
  }
  return pairs;
}

std::int64_t matching_weight(const MatchingGraph& graph, const std::vector<MatchedPair>& pairs) {
  std::int64_t total = 0;
  for (const MatchedPair& p : pairs) {
    total += p.second == kBoundary ? graph.boundary[p.first] : graph.weight(p.first, p.second);
  }
  return total;
}

ErrorChain lift_correction(const std::vector<MatchedPair>& pairs, const MatchingGraph& graph,
                           const DistanceOracle& oracle) {
  ErrorChain correction{Pauli::kZ, std::vector<std::uint8_t>(static_cast<std::size_t>(oracle.lattice().num_qubits()), 0)};
  std::vector<int> path;
  for (const MatchedPair& p : pairs) {
    path.clear();
    int u = graph.defects[p.first];
    if (p.second == kBoundary) {
      oracle.append_boundary_path(u, path);
    } else {
      const std::uint16_t* target =
          oracle.tabulated() ? oracle.row(graph.defects[p.second]) : graph.rows[p.second].data();
      oracle.append_path(u, target, path);
    }
    for (int q : path) correction.bits[q] ^= 1;
  }
  return correction;
}

MwpmDecoder::MwpmDecoder(const Lattice& lattice)
    : lattice_(&lattice),
      oracle_(lattice),
      mats_(stabilizer_matrices(lattice)),
      logicals_(logical_representatives(lattice)) {}

TrialResult MwpmDecoder::decode(const std::vector<std::uint8_t>& error) const {
  Syndrome syndrome{syndrome_bits(mats_.x_checks, error)};
  MatchingGraph graph = build_matching_graph(syndrome, oracle_);
  std::vector<MatchedPair> pairs = min_weight_perfect_matching(graph);
  ErrorChain correction = lift_correction(pairs, graph, oracle_);
  std::vector<std::uint8_t> residual = error;
  for (std::size_t q = 0; q < residual.size(); ++q) residual[q] ^= correction.bits[q];
  for (std::uint8_t b : syndrome_bits(mats_.x_checks, residual)) {
    if (b) throw std::logic_error("matching correction does not reproduce the syndrome");
  }
  TrialResult result;
  result.failed = odd_overlap(residual, logicals_.x_membrane);
  result.residual_weight = weight(residual);
  return result;
}

TrialResult decode_mwpm(const MwpmDecoder& decoder, double p, Engine& engine) {
  std::vector<std::uint8_t> error(static_cast<std::size_t>(decoder.mats().num_qubits), 0);
  add_errors(error, p, engine);
  return decoder.decode(error);
}

}  // namespace fsc

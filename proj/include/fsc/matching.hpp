#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fsc/code.hpp"
#include "fsc/lattice.hpp"
#include "fsc/noise.hpp"
#include "fsc/trial.hpp"

namespace fsc {

inline constexpr std::int64_t kUnreachable = std::int64_t{1} << 40;

// Shortest-path metric on the primal graph (present vertices and edges) with
// the rough boundary as an extra absorbing site behind every dangling edge.
// Rows of the all-pairs table are filled by breadth-first search when the
// lattice is small enough, and computed on demand otherwise.
class DistanceOracle {
 public:
  explicit DistanceOracle(const Lattice& lattice);

  const Lattice& lattice() const noexcept { return *lattice_; }
  int num_vertices() const noexcept { return num_vertices_; }
  // (neighbour vertex, qubit) pairs, sorted by neighbour index.
  const std::vector<std::pair<int, int>>& neighbours(int v) const noexcept { return adjacency_[v]; }
  int dangling_qubit(int v) const noexcept { return dangling_[v]; }
  std::int64_t boundary_distance(int v) const noexcept { return boundary_[v]; }
  bool tabulated() const noexcept { return !table_.empty(); }

  // Distances from `source` to every vertex; 0xFFFF marks unreachable.
  std::vector<std::uint16_t> bfs(int source) const;
  // Tabulated row, or nullptr when rows are computed on demand.
  const std::uint16_t* row(int source) const noexcept;
  std::int64_t distance(int u, int v) const;

  // Appends the qubits of the shortest path from u to the vertex whose
  // distance row is `to_target`. Among equal-length paths the step to the
  // lowest-index neighbour is taken.
  void append_path(int u, const std::uint16_t* to_target, std::vector<int>& qubits) const;
  // Path from u into the rough boundary, ending on a dangling edge.
  void append_boundary_path(int u, std::vector<int>& qubits) const;

  static constexpr int kMaxTabulated = 8192;

 private:
  const Lattice* lattice_;
  int num_vertices_ = 0;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;
  std::vector<int> dangling_;
  std::vector<std::int64_t> boundary_;
  std::vector<std::uint16_t> table_;
};

// Defects plus one virtual boundary partner per defect. Defect i pairs with
// defect j at weights[i*n+j], with its own partner at boundary[i], and any two
// partners pair at zero cost.
struct MatchingGraph {
  std::vector<int> defects;  // vertex indices (or abstract node ids)
  std::vector<std::int64_t> weights;
  std::vector<std::int64_t> boundary;
  std::vector<std::vector<std::uint16_t>> rows;  // per-defect BFS rows when not tabulated

  int size() const noexcept { return static_cast<int>(defects.size()); }
  std::int64_t weight(int i, int j) const noexcept { return weights[static_cast<std::size_t>(i) * defects.size() + j]; }
};

MatchingGraph build_matching_graph(const Syndrome& syndrome, const DistanceOracle& oracle);
// Abstract graph for tests: a symmetric n*n weight matrix and boundary weights.
MatchingGraph matching_graph_from_weights(std::vector<std::vector<std::int64_t>> weights,
                                          std::vector<std::int64_t> boundary);

inline constexpr int kBoundary = -1;

struct MatchedPair {
  int first = 0;
  int second = kBoundary;  // another defect, or kBoundary for the virtual partner
  friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
};

// Exact minimum-weight perfect matching of defects and partners.
std::vector<MatchedPair> min_weight_perfect_matching(const MatchingGraph& graph);
std::int64_t matching_weight(const MatchingGraph& graph, const std::vector<MatchedPair>& pairs);

ErrorChain lift_correction(const std::vector<MatchedPair>& pairs, const MatchingGraph& graph,
                           const DistanceOracle& oracle);

class MwpmDecoder {
 public:
  explicit MwpmDecoder(const Lattice& lattice);

  const DistanceOracle& oracle() const noexcept { return oracle_; }
  const CheckMatrices& mats() const noexcept { return mats_; }
  const LogicalPair& logicals() const noexcept { return logicals_; }

  // Decodes a given Z error; the residual is checked to be syndrome-free.
  TrialResult decode(const std::vector<std::uint8_t>& error) const;

 private:
  const Lattice* lattice_;
  DistanceOracle oracle_;
  CheckMatrices mats_;
  LogicalPair logicals_;
};

// Code-capacity trial: Z errors at rate p, perfect syndrome, matching.
TrialResult decode_mwpm(const MwpmDecoder& decoder, double p, Engine& engine);

}  // namespace fsc

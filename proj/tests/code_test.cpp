#include <gtest/gtest.h>

#include <algorithm>
#include <deque>
#include <set>

#include "fsc/code.hpp"
#include "fsc/gf2.hpp"
#include "fsc/lattice.hpp"

namespace fsc {
namespace {

// Row reduction over std::vector<bool>, deliberately naive.
int oracle_rank(const std::vector<std::vector<int>>& rows, int cols) {
  std::vector<std::vector<bool>> m;
  for (const auto& r : rows) {
    std::vector<bool> dense(static_cast<std::size_t>(cols), false);
    for (int c : r) dense[c] = !dense[c];
    m.push_back(dense);
  }
  int rank = 0;
  for (int c = 0; c < cols && rank < static_cast<int>(m.size()); ++c) {
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(m.size()); ++r) {
      if (m[r][c]) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[pivot], m[rank]);
    for (int r = 0; r < static_cast<int>(m.size()); ++r) {
      if (r != rank && m[r][c]) {
        for (int k = 0; k < cols; ++k) m[r][k] = m[r][k] != m[rank][k];
      }
    }
    ++rank;
  }
  return rank;
}

int oracle_k(const CheckMatrices& mats) {
  return mats.num_qubits - oracle_rank(mats.x_checks, mats.num_qubits) - oracle_rank(mats.z_checks, mats.num_qubits);
}

// Primal graph with two virtual terminals behind the dangling edges:
// node V is the bottom (z = 1 edges) and V + 1 the top.
struct PrimalGraph {
  int nodes = 0;
  std::vector<std::array<int, 2>> edges;  // one per qubit
};

PrimalGraph primal_graph(const Lattice& lattice) {
  PrimalGraph g;
  const int v = lattice.num_vertices();
  g.nodes = v + 2;
  for (int q = 0; q < lattice.num_qubits(); ++q) {
    std::array<int, 2> ends = lattice.edge_vertices()[q];
    GridPoint p = lattice.point(lattice.cells(1)[q]);
    for (int& e : ends) {
      if (e == Lattice::kNone) e = p.z == 1 ? v : v + 1;
    }
    g.edges.push_back(ends);
  }
  return g;
}

int oracle_z_distance(const Lattice& lattice) {
  PrimalGraph g = primal_graph(lattice);
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.nodes));
  for (const auto& e : g.edges) {
    adj[e[0]].push_back(e[1]);
    adj[e[1]].push_back(e[0]);
  }
  std::vector<int> dist(static_cast<std::size_t>(g.nodes), -1);
  std::deque<int> queue{g.nodes - 2};
  dist[g.nodes - 2] = 0;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int w : adj[u]) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist[g.nodes - 1];
}

// Unit-capacity max flow (edge-disjoint bottom-to-top paths) by repeated BFS
// augmentation; equals the smallest edge cut, i.e. the lightest X membrane.
int oracle_x_distance(const Lattice& lattice) {
  PrimalGraph g = primal_graph(lattice);
  struct Arc {
    int to;
    int cap;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out(static_cast<std::size_t>(g.nodes));
  for (const auto& e : g.edges) {
    out[e[0]].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({e[1], 1});
    out[e[1]].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({e[0], 1});
  }
  const int s = g.nodes - 2;
  const int t = g.nodes - 1;
  int flow = 0;
  while (true) {
    std::vector<int> via(static_cast<std::size_t>(g.nodes), -1);
    std::deque<int> queue{s};
    via[s] = -2;
    while (!queue.empty() && via[t] == -1) {
      int u = queue.front();
      queue.pop_front();
      for (int a : out[u]) {
        if (arcs[a].cap > 0 && via[arcs[a].to] == -1) {
          via[arcs[a].to] = a;
          queue.push_back(arcs[a].to);
        }
      }
    }
    if (via[t] == -1) return flow;
    for (int u = t; u != s;) {
      int a = via[u];
      arcs[a].cap -= 1;
      arcs[a ^ 1].cap += 1;
      u = arcs[a ^ 1].to;
    }
    ++flow;
  }
}

std::vector<int> support_of(const std::vector<std::uint8_t>& chain) {
  std::vector<int> s;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (chain[i]) s.push_back(static_cast<int>(i));
  }
  return s;
}

bool commutes_with_all(const std::vector<std::vector<int>>& checks, const std::vector<std::uint8_t>& chain) {
  for (const auto& row : checks) {
    int parity = 0;
    for (int q : row) parity ^= chain[q];
    if (parity) return false;
  }
  return true;
}

TEST(Checks, CssExhaustiveSmall) {
  CheckMatrices mats = stabilizer_matrices(build_fractal_lattice({3, 1, 0, 2}));
  for (const auto& x : mats.x_checks) {
    std::set<int> xs(x.begin(), x.end());
    for (const auto& z : mats.z_checks) {
      int overlap = 0;
      for (int q : z) overlap += xs.count(q);
      ASSERT_EQ(overlap % 2, 0);
    }
  }
  EXPECT_TRUE(validate(mats).ok());
}

TEST(Checks, RowWeights) {
  CheckMatrices mats = stabilizer_matrices(build_fractal_lattice({3, 1, 1, 3}));
  for (const auto& r : mats.x_checks) {
    EXPECT_GE(r.size(), 1u);
    EXPECT_LE(r.size(), 6u);
  }
  for (const auto& r : mats.z_checks) {
    EXPECT_GE(r.size(), 2u);
    EXPECT_LE(r.size(), 4u);
  }
}

TEST(Checks, DroppedColumnBreaksCss) {
  CheckMatrices mats = stabilizer_matrices(build_fractal_lattice({3, 1, 0, 3}));
  const int q = mats.z_checks[5].front();
  for (auto& row : mats.z_checks) row.erase(std::remove(row.begin(), row.end(), q), row.end());
  ValidationReport report = validate(mats);
  ASSERT_FALSE(report.ok());
  EXPECT_NE(report.violations.front().find("CSS condition fails"), std::string::npos);
}

TEST(Rank, AgreesWithOracle) {
  for (const FractalSpec& s : {FractalSpec{3, 1, 0, 2}, FractalSpec{3, 1, 0, 3}, FractalSpec{3, 1, 1, 3},
                               FractalSpec{3, 1, 1, 6}}) {
    CheckMatrices mats = stabilizer_matrices(build_fractal_lattice(s));
    EXPECT_EQ(gf2_rank(mats.z_checks, static_cast<std::size_t>(mats.num_qubits)),
              static_cast<std::size_t>(oracle_rank(mats.z_checks, mats.num_qubits)));
    EXPECT_EQ(count_logical_qubits(mats), oracle_k(mats));
  }
}

TEST(Rank, OneLogicalQubit) {
  for (const FractalSpec& s : {FractalSpec{3, 1, 0, 3}, FractalSpec{3, 1, 1, 3}, FractalSpec{3, 1, 2, 9}}) {
    EXPECT_EQ(count_logical_qubits(stabilizer_matrices(build_fractal_lattice(s))), 1);
  }
}

TEST(Rank, InjectedLogicalRowLeavesNone) {
  Lattice lattice = build_fractal_lattice({3, 1, 1, 3});
  CheckMatrices mats = stabilizer_matrices(lattice);
  mats.z_checks.push_back(support_of(logical_representatives(lattice).z_string));
  EXPECT_EQ(count_logical_qubits(mats), 0);
  EXPECT_EQ(oracle_k(mats), 0);
}

TEST(Logicals, ZStringIsVerticalPath) {
  Lattice lattice = build_fractal_lattice({3, 1, 0, 4});
  CheckMatrices mats = stabilizer_matrices(lattice);
  LogicalPair l = logical_representatives(lattice);
  EXPECT_EQ(weight(l.z_string), 4);
  EXPECT_TRUE(commutes_with_all(mats.x_checks, l.z_string));
  EXPECT_TRUE(commutes_with_all(mats.z_checks, l.x_membrane));
  EXPECT_TRUE(odd_overlap(l.z_string, l.x_membrane));
}

TEST(Logicals, MembraneAvoidsHole) {
  Lattice lattice = build_fractal_lattice({3, 1, 1, 3});
  CheckMatrices mats = stabilizer_matrices(lattice);
  LogicalPair l = logical_representatives(lattice);
  EXPECT_EQ(weight(l.x_membrane), 3 * 3 - 1);
  EXPECT_TRUE(commutes_with_all(mats.z_checks, l.x_membrane));
  EXPECT_TRUE(commutes_with_all(mats.x_checks, l.z_string));
  EXPECT_TRUE(odd_overlap(l.z_string, l.x_membrane));
}

TEST(Distance, ZMatchesBfsOracle) {
  for (const FractalSpec& s : {FractalSpec{3, 1, 0, 4}, FractalSpec{3, 1, 1, 3}, FractalSpec{3, 1, 1, 6},
                               FractalSpec{3, 1, 2, 9}}) {
    Lattice lattice = build_fractal_lattice(s);
    int dz = min_logical_weight(lattice, Pauli::kZ);
    EXPECT_EQ(dz, oracle_z_distance(lattice));
    EXPECT_EQ(dz, s.size);
  }
}

TEST(Distance, XMatchesFlowOracle) {
  Lattice small = build_fractal_lattice({3, 1, 1, 3});
  EXPECT_EQ(oracle_x_distance(small), 8);
  EXPECT_EQ(min_logical_weight(small, Pauli::kX), 8);
  Lattice two = build_fractal_lattice({3, 1, 2, 9});
  EXPECT_EQ(oracle_x_distance(two), 64);
  EXPECT_EQ(min_logical_weight(two, Pauli::kX), 64);
  Lattice plain = build_fractal_lattice({3, 1, 0, 5});
  EXPECT_EQ(min_logical_weight(plain, Pauli::kX), oracle_x_distance(plain));
}

// Counting for an h^3 hole, straight from the cell tables.
struct Deltas {
  long faces;
  long vertices;
  long qubits;
  long z_relations;  // rows minus rank
};

Deltas oracle_deltas(int size, int h) {
  Lattice plain = build_fractal_lattice({3, 1, 0, size});
  Lattice holed(FractalSpec{3, 1, 0, size}, {bulk_cube_hole(size, h)});
  CheckMatrices before = stabilizer_matrices(plain);
  CheckMatrices after = stabilizer_matrices(holed);
  return {plain.num_faces() - holed.num_faces(), plain.num_vertices() - holed.num_vertices(),
          plain.num_qubits() - holed.num_qubits(),
          (static_cast<long>(before.z_checks.size()) - oracle_rank(before.z_checks, before.num_qubits)) -
              (static_cast<long>(after.z_checks.size()) - oracle_rank(after.z_checks, after.num_qubits))};
}

long delta(const CountingReport& r, const std::string& name, bool actual) {
  for (const auto& d : r.deltas) {
    if (d.name == name) return actual ? d.actual : d.expected;
  }
  ADD_FAILURE() << "no delta named " << name;
  return -1;
}

TEST(Counting, HoleOfSideTwo) {
  Lattice plain = build_fractal_lattice({3, 1, 0, 8});
  CountingReport r = verify_hole_counting(plain, stabilizer_matrices(plain), 2);
  EXPECT_TRUE(r.ok()) << r.describe();
  Deltas o = oracle_deltas(8, 2);
  EXPECT_EQ(o.faces, 12);
  EXPECT_EQ(o.vertices, 1);
  EXPECT_EQ(o.qubits, 6);
  EXPECT_EQ(o.z_relations, 7);
  EXPECT_EQ(delta(r, "dN_Z", true), o.faces);
  EXPECT_EQ(delta(r, "dN_X", true), o.vertices);
  EXPECT_EQ(delta(r, "dN_q", true), o.qubits);
  EXPECT_EQ(delta(r, "dR_Z", true), o.z_relations);
  EXPECT_EQ(r.k_before, 1);
  EXPECT_EQ(r.k_after, 1);
}

TEST(Counting, HoleOfSideThree) {
  Lattice plain = build_fractal_lattice({3, 1, 0, 12});
  CountingReport r = verify_hole_counting(plain, stabilizer_matrices(plain), 3);
  EXPECT_TRUE(r.ok()) << r.describe();
  EXPECT_EQ(delta(r, "dN_Z", false), 54);
  EXPECT_EQ(delta(r, "dN_X", false), 8);
  EXPECT_EQ(delta(r, "dN_q", false), 36);
  EXPECT_EQ(delta(r, "dR_Z", false), 26);
  EXPECT_EQ(r.k_after, 1);
}

TEST(Counting, HoleMustFitInBulk) {
  EXPECT_THROW(bulk_cube_hole(4, 3), SpecError);
  EXPECT_THROW(bulk_cube_hole(8, 1), SpecError);
}

}  // namespace
}  // namespace fsc

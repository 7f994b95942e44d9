#include "fsc/code.hpp"

#include <algorithm>
#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/push_relabel_max_flow.hpp>
#include <deque>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "fsc/gf2.hpp"

namespace fsc {

namespace {

void guard_size(const Lattice& lattice) {
  if (lattice.num_qubits() > kMaxExactQubits) {
    throw std::length_error("lattice has " + std::to_string(lattice.num_qubits()) +
                            " qubits, beyond the exact-probe limit of " + std::to_string(kMaxExactQubits));
  }
}

// Which rough boundary a dangling edge reaches: -1 bottom, +1 top, 0 none.
int dangling_side(const Lattice& lattice, int qubit) {
  const auto& ends = lattice.edge_vertices()[qubit];
  if (ends[0] != Lattice::kNone && ends[1] != Lattice::kNone) return 0;
  GridPoint p = lattice.point(lattice.cells(1)[qubit]);
  if (p.z == 1) return -1;
  if (p.z == 2 * lattice.size() - 1) return 1;
  return 0;
}

}  // namespace

CheckMatrices stabilizer_matrices(const Lattice& lattice) {
  CheckMatrices mats;
  mats.num_qubits = lattice.num_qubits();
  mats.x_checks.assign(static_cast<std::size_t>(lattice.num_vertices()), {});
  for (int e = 0; e < lattice.num_qubits(); ++e) {
    for (int v : lattice.edge_vertices()[e]) {
      if (v != Lattice::kNone) mats.x_checks[v].push_back(e);
    }
  }
  mats.z_checks.reserve(static_cast<std::size_t>(lattice.num_faces()));
  for (const auto& edges : lattice.face_edges()) {
    std::vector<int> row;
    for (int e : edges) {
      if (e != Lattice::kNone) row.push_back(e);
    }
    std::sort(row.begin(), row.end());
    mats.z_checks.push_back(std::move(row));
  }
  return mats;
}

ValidationReport validate(const CheckMatrices& mats) {
  ValidationReport report;
  std::vector<std::vector<int>> x_rows_of(static_cast<std::size_t>(mats.num_qubits));
  for (std::size_t r = 0; r < mats.x_checks.size(); ++r) {
    if (mats.x_checks[r].size() > 6) {
      report.violations.push_back("X check " + std::to_string(r) + " has weight " +
                                  std::to_string(mats.x_checks[r].size()) + " > 6");
    }
    for (int q : mats.x_checks[r]) {
      if (q < 0 || q >= mats.num_qubits) {
        report.violations.push_back("X check " + std::to_string(r) + " references missing qubit " + std::to_string(q));
        continue;
      }
      x_rows_of[q].push_back(static_cast<int>(r));
    }
  }
  for (std::size_t r = 0; r < mats.z_checks.size(); ++r) {
    if (mats.z_checks[r].size() > 4) {
      report.violations.push_back("Z check " + std::to_string(r) + " has weight " +
                                  std::to_string(mats.z_checks[r].size()) + " > 4");
    }
    std::map<int, int> overlap;
    for (int q : mats.z_checks[r]) {
      if (q < 0 || q >= mats.num_qubits) {
        report.violations.push_back("Z check " + std::to_string(r) + " references missing qubit " + std::to_string(q));
        continue;
      }
      for (int x : x_rows_of[q]) overlap[x] ^= 1;
    }
    for (auto [x, parity] : overlap) {
      if (parity) {
        report.violations.push_back("CSS condition fails: Z check " + std::to_string(r) + " anticommutes with X check " +
                                    std::to_string(x));
      }
    }
  }
  return report;
}

int count_logical_qubits(const CheckMatrices& mats) {
  auto n = static_cast<std::size_t>(mats.num_qubits);
  return static_cast<int>(n - gf2_rank(mats.x_checks, n) - gf2_rank(mats.z_checks, n));
}

bool odd_overlap(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("odd_overlap: chains of different length");
  unsigned parity = 0;
  for (std::size_t i = 0; i < a.size(); ++i) parity ^= a[i] & b[i];
  return parity & 1U;
}

int weight(const std::vector<std::uint8_t>& chain) {
  return static_cast<int>(std::count_if(chain.begin(), chain.end(), [](std::uint8_t b) { return b != 0; }));
}

LogicalPair logical_representatives(const Lattice& lattice) {
  guard_size(lattice);
  const int nv = lattice.num_vertices();
  const int nq = lattice.num_qubits();
  std::vector<std::vector<std::pair<int, int>>> adjacency(static_cast<std::size_t>(nv));
  std::vector<int> bottom_edge(static_cast<std::size_t>(nv), -1);
  std::vector<int> top_edge(static_cast<std::size_t>(nv), -1);
  for (int e = 0; e < nq; ++e) {
    const auto& ends = lattice.edge_vertices()[e];
    if (ends[0] != Lattice::kNone && ends[1] != Lattice::kNone) {
      adjacency[ends[0]].push_back({ends[1], e});
      adjacency[ends[1]].push_back({ends[0], e});
      continue;
    }
    int v = ends[0] != Lattice::kNone ? ends[0] : ends[1];
    if (v == Lattice::kNone) continue;
    int side = dangling_side(lattice, e);
    if (side < 0) bottom_edge[v] = e;
    if (side > 0) top_edge[v] = e;
  }
  for (auto& list : adjacency) std::sort(list.begin(), list.end());

  std::vector<int> dist(static_cast<std::size_t>(nv), -1);
  std::vector<int> parent_edge(static_cast<std::size_t>(nv), -1);
  std::vector<int> parent(static_cast<std::size_t>(nv), -1);
  std::deque<int> queue;
  for (int v = 0; v < nv; ++v) {
    if (bottom_edge[v] >= 0) {
      dist[v] = 1;
      parent_edge[v] = bottom_edge[v];
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (auto [w, e] : adjacency[u]) {
      if (dist[w] >= 0) continue;
      dist[w] = dist[u] + 1;
      parent[w] = u;
      parent_edge[w] = e;
      queue.push_back(w);
    }
  }
  int best = -1;
  for (int v = 0; v < nv; ++v) {
    if (top_edge[v] >= 0 && dist[v] >= 0 && (best < 0 || dist[v] < dist[best])) best = v;
  }
  if (best < 0) throw std::runtime_error("no path joins the rough boundaries; the lattice is malformed");

  LogicalPair pair;
  pair.z_string.assign(static_cast<std::size_t>(nq), 0);
  pair.z_string[top_edge[best]] = 1;
  for (int v = best; v >= 0; v = parent[v]) pair.z_string[parent_edge[v]] = 1;

  int best_slab = -1;
  std::size_t best_weight = 0;
  for (int k = 0; k < lattice.size(); ++k) {
    std::size_t w = lattice.slab_qubits(k).size();
    if (best_slab < 0 || w < best_weight) {
      best_slab = k;
      best_weight = w;
    }
  }
  pair.membrane_slab = best_slab;
  pair.x_membrane.assign(static_cast<std::size_t>(nq), 0);
  for (int q : lattice.slab_qubits(best_slab)) pair.x_membrane[q] = 1;
  return pair;
}

int min_logical_weight(const Lattice& lattice, Pauli species) {
  guard_size(lattice);
  if (species == Pauli::kZ) return weight(logical_representatives(lattice).z_string);

  using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
  using Graph = boost::adjacency_list<
      boost::vecS, boost::vecS, boost::directedS, boost::no_property,
      boost::property<boost::edge_capacity_t, long,
                      boost::property<boost::edge_residual_capacity_t, long,
                                      boost::property<boost::edge_reverse_t, Traits::edge_descriptor>>>>;
  const int nv = lattice.num_vertices();
  const int source = nv;
  const int sink = nv + 1;
  Graph g(static_cast<std::size_t>(nv + 2));
  auto capacity = boost::get(boost::edge_capacity, g);
  auto reverse = boost::get(boost::edge_reverse, g);
  auto residual = boost::get(boost::edge_residual_capacity, g);
  auto arc = [&](int u, int v, long cap) {
    auto forward = boost::add_edge(static_cast<std::size_t>(u), static_cast<std::size_t>(v), g).first;
    auto backward = boost::add_edge(static_cast<std::size_t>(v), static_cast<std::size_t>(u), g).first;
    capacity[forward] = cap;
    capacity[backward] = 0;
    reverse[forward] = backward;
    reverse[backward] = forward;
  };
  for (int e = 0; e < lattice.num_qubits(); ++e) {
    const auto& ends = lattice.edge_vertices()[e];
    if (ends[0] != Lattice::kNone && ends[1] != Lattice::kNone) {
      arc(ends[0], ends[1], 1);
      arc(ends[1], ends[0], 1);
      continue;
    }
    int v = ends[0] != Lattice::kNone ? ends[0] : ends[1];
    if (v == Lattice::kNone) continue;
    int side = dangling_side(lattice, e);
    if (side < 0) arc(source, v, 1);
    if (side > 0) arc(v, sink, 1);
  }
  long flow = boost::push_relabel_max_flow(g, static_cast<std::size_t>(source), static_cast<std::size_t>(sink),
                                           capacity, residual, reverse, boost::get(boost::vertex_index, g));
  (void)residual;
  return static_cast<int>(flow);
}

HoleBox bulk_cube_hole(int size, int h) {
  if (h < 2 || h + 2 > size - 1) {
    throw SpecError("bulk hole of " + std::to_string(h) + "^3 cubes does not fit strictly inside L = " +
                    std::to_string(size));
  }
  HoleBox box;
  box.level = 1;
  // Cube corners are vertices: x, y in [0, 2L-2] step 2, z in [0, 2L] step 2.
  int lo_xy = 2 * ((size - 1 - h) / 2);
  int lo_z = 2 * ((size - h) / 2);
  box.lo = {lo_xy, lo_xy, lo_z};
  box.hi = {lo_xy + 2 * h, lo_xy + 2 * h, lo_z + 2 * h};
  return box;
}

bool CountingReport::ok() const {
  return k_before == k_after &&
         std::all_of(deltas.begin(), deltas.end(), [](const Delta& d) { return d.expected == d.actual; });
}

std::string CountingReport::describe() const {
  std::ostringstream out;
  out << "h=" << hole_size;
  for (const Delta& d : deltas) out << " " << d.name << " expected " << d.expected << " got " << d.actual << ";";
  out << " k " << k_before << " -> " << k_after;
  return out.str();
}

CountingReport verify_hole_counting(const Lattice& plain, const CheckMatrices& before, int hole_size) {
  if (!plain.holes().empty()) throw SpecError("hole counting needs a plain lattice without holes");
  Lattice punched(plain.spec(), {bulk_cube_hole(plain.size(), hole_size)});
  CheckMatrices after = stabilizer_matrices(punched);
  const long h = hole_size;
  auto n = static_cast<std::size_t>(before.num_qubits);
  auto n_after = static_cast<std::size_t>(after.num_qubits);
  long rank_z_before = static_cast<long>(gf2_rank(before.z_checks, n));
  long rank_z_after = static_cast<long>(gf2_rank(after.z_checks, n_after));
  long relations_before = static_cast<long>(before.z_checks.size()) - rank_z_before;
  long relations_after = static_cast<long>(after.z_checks.size()) - rank_z_after;

  CountingReport report;
  report.hole_size = hole_size;
  report.deltas = {
      {"dN_Z", 3 * h * h * (h - 1), static_cast<long>(before.z_checks.size() - after.z_checks.size())},
      {"dN_X", (h - 1) * (h - 1) * (h - 1), static_cast<long>(before.x_checks.size() - after.x_checks.size())},
      {"dN_q", 3 * h * (h - 1) * (h - 1), static_cast<long>(before.num_qubits - after.num_qubits)},
      {"dR_Z", h * h * h - 1, relations_before - relations_after},
  };
  report.k_before = count_logical_qubits(before);
  report.k_after = count_logical_qubits(after);
  return report;
}

}  // namespace fsc

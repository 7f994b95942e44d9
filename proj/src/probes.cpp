#include "fsc/probes.hpp"

#include <algorithm>
#include <climits>
#include <stdexcept>
#include <unordered_set>

namespace fsc {

std::array<int, 3> envelope(const Lattice& lattice, const std::vector<int>& qubits, const std::vector<HoleBox>& holes) {
  std::array<int, 3> lo{INT_MAX, INT_MAX, INT_MAX};
  std::array<int, 3> hi{INT_MIN, INT_MIN, INT_MIN};
  auto cover = [&](int axis, int a, int b) {
    lo[axis] = std::min(lo[axis], a);
    hi[axis] = std::max(hi[axis], b);
  };
  for (int q : qubits) {
    GridPoint g = lattice.point(lattice.cells(1)[q]);
    std::array<int, 3> c{g.x, g.y, g.z};
    // The dual face of an edge spans the two axes the edge does not.
    for (int axis = 0; axis < 3; ++axis) {
      if (c[axis] & 1) {
        cover(axis, c[axis], c[axis]);
      } else {
        cover(axis, c[axis] - 1, c[axis] + 1);
      }
    }
  }
  for (const HoleBox& h : holes) {
    for (int axis = 0; axis < 3; ++axis) cover(axis, h.lo[axis], h.hi[axis]);
  }
  std::array<int, 3> out{};
  if (qubits.empty() && holes.empty()) return out;
  for (int axis = 0; axis < 3; ++axis) out[axis] = (hi[axis] - lo[axis]) / 2;
  return out;
}

std::vector<int> random_membrane(const Lattice& lattice, int max_extent, int target, Engine& engine) {
  if (target < 1) throw std::invalid_argument("membrane needs at least one qubit");
  const int size = lattice.size();
  // Seed: a random edge within a few cells of the centre.
  std::vector<int> near_centre;
  for (int q = 0; q < lattice.num_qubits(); ++q) {
    GridPoint g = lattice.point(lattice.cells(1)[q]);
    int r = 3;
    if (std::abs(g.x - (size - 1)) <= r && std::abs(g.y - (size - 1)) <= r && std::abs(g.z - size) <= r) {
      near_centre.push_back(q);
    }
  }
  if (near_centre.empty()) throw std::invalid_argument("lattice too small for a bulk membrane");
  std::vector<int> cluster{near_centre[engine() % near_centre.size()]};
  std::unordered_set<int> members(cluster.begin(), cluster.end());

  const auto& edge_faces = lattice.edge_faces();
  const auto& face_edges = lattice.face_edges();
  int misses = 0;
  while (static_cast<int>(cluster.size()) < target && misses < 64) {
    int from = cluster[engine() % cluster.size()];
    std::vector<int> options;
    for (int f : edge_faces[from]) {
      if (f == Lattice::kNone) continue;
      for (int e : face_edges[f]) {
        if (e != Lattice::kNone && !members.count(e)) options.push_back(e);
      }
    }
    if (options.empty()) {
      ++misses;
      continue;
    }
    int pick = options[engine() % options.size()];
    cluster.push_back(pick);
    std::array<int, 3> env = envelope(lattice, cluster);
    if (env[0] > max_extent || env[1] > max_extent || env[2] > max_extent) {
      cluster.pop_back();
      ++misses;
      continue;
    }
    members.insert(pick);
    misses = 0;
  }
  std::sort(cluster.begin(), cluster.end());
  return cluster;
}

TrappedStrands trapped_strands(const Lattice& lattice) {
  TrappedStrands out;
  const FractalSpec& s = lattice.spec();
  if (s.a != out.spec.a || s.b != out.spec.b || s.level != out.spec.level || s.size != out.spec.size) {
    throw std::invalid_argument("trapped strand fixture is defined on FC(3,1,2) at L = 9");
  }
  // Level-2 unit holes sit at the centres of the 3x3x3 sub-blocks: cells
  // (1,1,1) and (4,1,1). The strip fills cells (2,1,1) and (3,1,1).
  for (int i : {2, 3}) {
    int id = lattice.id({2 * i, 2, 3});
    if (!lattice.present(id)) throw std::logic_error("trapped strand fixture: strip edge missing");
    out.qubits.push_back(lattice.index(id));
  }
  for (const HoleBox& h : lattice.holes()) {
    HoleBox a = HoleBox::unit_cells({1, 1, 1}, 1, 2);
    HoleBox b = HoleBox::unit_cells({4, 1, 1}, 1, 2);
    if ((h.lo == a.lo && h.hi == a.hi) || (h.lo == b.lo && h.hi == b.hi)) out.holes.push_back(h);
  }
  if (out.holes.size() != 2) throw std::logic_error("trapped strand fixture: holes not found");
  return out;
}

}  // namespace fsc

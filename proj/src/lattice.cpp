#include "fsc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace fsc {

namespace {

std::string where(const GridPoint& p) {
  std::ostringstream out;
  out << "(" << p.x << "," << p.y << "," << p.z << ")";
  return out.str();
}

int coord(const GridPoint& p, int axis) { return axis == 0 ? p.x : axis == 1 ? p.y : p.z; }

GridPoint shifted(GridPoint p, int axis, int delta) {
  if (axis == 0) p.x += delta;
  else if (axis == 1) p.y += delta;
  else p.z += delta;
  return p;
}

}  // namespace

void validate_spec(const FractalSpec& spec) {
  auto fail = [](const std::string& msg) { throw SpecError(msg); };
  if (spec.b <= 0) fail("invariant 0 < b violated: b = " + std::to_string(spec.b));
  if (spec.b >= spec.a) {
    fail("invariant b < a violated: b = " + std::to_string(spec.b) + ", a = " + std::to_string(spec.a));
  }
  if ((spec.a - spec.b) % 2 != 0) {
    fail("invariant (a - b) even violated: holes could not be centred (a = " + std::to_string(spec.a) +
         ", b = " + std::to_string(spec.b) + ")");
  }
  if (spec.level < 0) fail("invariant level >= 0 violated: level = " + std::to_string(spec.level));
  if (spec.size < 2) fail("invariant L >= 2 violated: L = " + std::to_string(spec.size));
  std::int64_t block = 1;
  for (int i = 0; i < spec.level; ++i) {
    block *= spec.a;
    if (block > spec.size) break;
  }
  if (spec.size % block != 0) {
    fail("invariant L divisible by a^level violated: L = " + std::to_string(spec.size) + ", a^level = " +
         std::to_string(block));
  }
}

double hausdorff_dimension(const FractalSpec& spec) {
  validate_spec(spec);
  double a = spec.a;
  double b = spec.b;
  return std::log(a * a * a - b * b * b) / std::log(a);
}

double membrane_dimension(const FractalSpec& spec) {
  validate_spec(spec);
  double a = spec.a;
  double b = spec.b;
  return std::log(a * a - b * b) / std::log(a);
}

std::int64_t expected_hole_cells(const FractalSpec& spec) {
  validate_spec(spec);
  std::int64_t count = 0;
  std::int64_t size = spec.size;
  std::int64_t copies = 1;
  for (int l = 0; l < spec.level; ++l) {
    std::int64_t hole = spec.b * size / spec.a;
    count += copies * hole * hole * hole;
    copies *= static_cast<std::int64_t>(spec.a) * spec.a * spec.a - static_cast<std::int64_t>(spec.b) * spec.b * spec.b;
    size /= spec.a;
  }
  return count;
}

bool HoleBox::meets(const GridPoint& p) const {
  for (int axis = 0; axis < 3; ++axis) {
    int c = coord(p, axis);
    int s = c & 1;
    if (!(c + s > lo[axis] && c - s < hi[axis])) return false;
  }
  return true;
}

HoleBox HoleBox::unit_cells(std::array<int, 3> corner, int extent, int level) {
  HoleBox box;
  box.level = level;
  for (int axis = 0; axis < 2; ++axis) {
    box.lo[axis] = 2 * corner[axis] - 1;
    box.hi[axis] = 2 * (corner[axis] + extent) - 1;
  }
  box.lo[2] = 2 * corner[2];
  box.hi[2] = 2 * (corner[2] + extent);
  return box;
}

const char* label_name(CellLabel label) {
  switch (label) {
    case CellLabel::kOutside: return "outside";
    case CellLabel::kBulk: return "bulk";
    case CellLabel::kRoughBoundary: return "rough_boundary";
    case CellLabel::kSmoothBoundary: return "smooth_boundary";
    case CellLabel::kHoleBoundary: return "hole_boundary";
    case CellLabel::kHoleShell: return "hole_shell";
    case CellLabel::kHoleInterior: return "hole_interior";
  }
  return "unknown";
}

std::vector<HoleBox> fractal_holes(const FractalSpec& spec) {
  validate_spec(spec);
  std::vector<HoleBox> holes;
  // Breadth-first so that holes come out ordered by level.
  struct Block {
    std::array<int, 3> origin;
    int size;
  };
  std::vector<Block> current{{{0, 0, 0}, spec.size}};
  for (int level = 1; level <= spec.level; ++level) {
    std::vector<Block> next;
    for (const Block& block : current) {
      int sub = block.size / spec.a;
      int offset = (spec.a - spec.b) / 2;
      std::array<int, 3> corner;
      for (int axis = 0; axis < 3; ++axis) corner[axis] = block.origin[axis] + offset * sub;
      holes.push_back(HoleBox::unit_cells(corner, spec.b * sub, level));
      for (int k = 0; k < spec.a; ++k) {
        for (int j = 0; j < spec.a; ++j) {
          for (int i = 0; i < spec.a; ++i) {
            bool centre = i >= offset && i < offset + spec.b && j >= offset && j < offset + spec.b &&
                          k >= offset && k < offset + spec.b;
            if (centre) continue;
            next.push_back({{block.origin[0] + i * sub, block.origin[1] + j * sub, block.origin[2] + k * sub}, sub});
          }
        }
      }
    }
    current = std::move(next);
  }
  return holes;
}

Lattice build_fractal_lattice(const FractalSpec& spec) { return Lattice(spec, fractal_holes(spec)); }

Lattice::Lattice(const FractalSpec& spec, std::vector<HoleBox> holes) : spec_(spec), holes_(std::move(holes)) {
  validate_spec(spec_);
  init_grid();
  assign_presence_from_holes();
  index_cells();
  derive_incidence();
  derive_transposes();
  derive_labels();
}

Lattice::Lattice(const FractalSpec& spec, std::vector<HoleBox> holes, Tables tables)
    : spec_(spec), holes_(std::move(holes)) {
  validate_spec(spec_);
  init_grid();
  for (int d = 0; d < 4; ++d) {
    for (const GridPoint& p : tables.cells[d]) {
      if (!in_box(p) || cell_dimension(p) != d) {
        throw SpecError("cell " + where(p) + " is not a " + std::to_string(d) + "-cell inside the L-box");
      }
      int i = id(p);
      if (index_[i] != kNone) throw SpecError("cell " + where(p) + " listed twice");
      index_[i] = static_cast<int>(cells_[d].size());
      cells_[d].push_back(i);
    }
  }
  auto check_refs = [](const auto& table, std::size_t expected_rows, std::size_t target_count, const char* name) {
    if (table.size() != expected_rows) {
      throw SpecError(std::string(name) + " table has " + std::to_string(table.size()) + " rows, expected " +
                      std::to_string(expected_rows));
    }
    for (const auto& row : table) {
      for (int v : row) {
        if (v != kNone && (v < 0 || static_cast<std::size_t>(v) >= target_count)) {
          throw SpecError(std::string(name) + " table references missing cell " + std::to_string(v));
        }
      }
    }
  };
  check_refs(tables.edge_vertices, cells_[1].size(), cells_[0].size(), "edge_vertices");
  check_refs(tables.face_edges, cells_[2].size(), cells_[1].size(), "face_edges");
  check_refs(tables.cube_faces, cells_[3].size(), cells_[2].size(), "cube_faces");
  edge_vertices_ = std::move(tables.edge_vertices);
  face_edges_ = std::move(tables.face_edges);
  cube_faces_ = std::move(tables.cube_faces);
  derive_transposes();
  derive_labels();
}

void Lattice::init_grid() {
  side_ = 2 * spec_.size + 1;
  strides_ = {1, side_, side_ * side_};
  index_.assign(static_cast<std::size_t>(grid_cells()), kNone);
  label_.assign(static_cast<std::size_t>(grid_cells()), CellLabel::kOutside);
}

bool Lattice::in_box(const GridPoint& p) const noexcept {
  int hi = 2 * spec_.size - 2;
  return p.x >= 0 && p.x <= hi && p.y >= 0 && p.y <= hi && p.z >= 1 && p.z <= hi + 1;
}

void Lattice::assign_presence_from_holes() {
  // Mark every in-box cell present, then clear the ones a hole touches.
  std::vector<char> alive(static_cast<std::size_t>(grid_cells()), 0);
  for (int i = 0; i < grid_cells(); ++i) alive[i] = in_box(point(i)) ? 1 : 0;
  for (const HoleBox& box : holes_) {
    GridPoint p;
    for (p.z = std::max(1, box.lo[2]); p.z <= std::min(2 * spec_.size - 1, box.hi[2]); ++p.z) {
      for (p.y = std::max(0, box.lo[1]); p.y <= std::min(2 * spec_.size - 2, box.hi[1]); ++p.y) {
        for (p.x = std::max(0, box.lo[0]); p.x <= std::min(2 * spec_.size - 2, box.hi[0]); ++p.x) {
          if (box.meets(p)) alive[id(p)] = 0;
        }
      }
    }
  }
  for (int i = 0; i < grid_cells(); ++i) index_[i] = alive[i] ? 0 : kNone;
}

void Lattice::index_cells() {
  for (auto& c : cells_) c.clear();
  for (int i = 0; i < grid_cells(); ++i) {
    if (index_[i] == kNone) continue;
    int d = cell_dimension(point(i));
    index_[i] = static_cast<int>(cells_[d].size());
    cells_[d].push_back(i);
  }
}

void Lattice::derive_incidence() {
  auto neighbours = [&](int cell, auto& out) {
    GridPoint p = point(cell);
    std::size_t n = 0;
    out.fill(kNone);
    for (int axis = 0; axis < 3; ++axis) {
      if ((coord(p, axis) & 1) == 0) continue;
      for (int delta : {-1, 1}) {
        int q = id(shifted(p, axis, delta));
        out[n++] = index_[q];
      }
    }
  };
  edge_vertices_.resize(cells_[1].size());
  for (std::size_t e = 0; e < cells_[1].size(); ++e) neighbours(cells_[1][e], edge_vertices_[e]);
  face_edges_.resize(cells_[2].size());
  for (std::size_t f = 0; f < cells_[2].size(); ++f) neighbours(cells_[2][f], face_edges_[f]);
  cube_faces_.resize(cells_[3].size());
  for (std::size_t c = 0; c < cells_[3].size(); ++c) neighbours(cells_[3][c], cube_faces_[c]);
}

void Lattice::derive_transposes() {
  edge_faces_.assign(cells_[1].size(), {kNone, kNone, kNone, kNone});
  for (std::size_t f = 0; f < face_edges_.size(); ++f) {
    for (int e : face_edges_[f]) {
      if (e == kNone) continue;
      for (int& slot : edge_faces_[e]) {
        if (slot == kNone) {
          slot = static_cast<int>(f);
          break;
        }
      }
    }
  }
  face_cubes_.assign(cells_[2].size(), {kNone, kNone});
  for (std::size_t c = 0; c < cube_faces_.size(); ++c) {
    for (int f : cube_faces_[c]) {
      if (f == kNone) continue;
      for (int& slot : face_cubes_[f]) {
        if (slot == kNone) {
          slot = static_cast<int>(c);
          break;
        }
      }
    }
  }
}

void Lattice::derive_labels() {
  int top = 2 * spec_.size - 1;
  int side_max = 2 * spec_.size - 2;
  shell_cubes_.clear();
  shell_faces_.clear();
  for (int i = 0; i < grid_cells(); ++i) {
    GridPoint p = point(i);
    if (!in_box(p)) {
      label_[i] = CellLabel::kOutside;
      continue;
    }
    int d = cell_dimension(p);
    if (!present(i)) {
      bool shell = false;
      if (d >= 2) {
        // Any present edge in the closure? Edges sit at p + s_a e_a + s_b e_b
        // with a, b spanned axes, or at p + s_a e_a for a face.
        std::vector<int> spanned;
        for (int axis = 0; axis < 3; ++axis) {
          if (coord(p, axis) & 1) spanned.push_back(axis);
        }
        if (d == 2) {
          for (int axis : spanned) {
            for (int delta : {-1, 1}) {
              GridPoint q = shifted(p, axis, delta);
              if (in_box(q) && present(id(q))) shell = true;
            }
          }
        } else {
          for (std::size_t u = 0; u < 3; ++u) {
            for (std::size_t v = u + 1; v < 3; ++v) {
              for (int du : {-1, 1}) {
                for (int dv : {-1, 1}) {
                  GridPoint q = shifted(shifted(p, spanned[u], du), spanned[v], dv);
                  if (in_box(q) && present(id(q))) shell = true;
                }
              }
            }
          }
        }
      }
      label_[i] = shell ? CellLabel::kHoleShell : CellLabel::kHoleInterior;
      if (shell) (d == 3 ? shell_cubes_ : shell_faces_).push_back(i);
      continue;
    }
    bool touches_hole = false;
    for (int axis = 0; axis < 3; ++axis) {
      if (coord(p, axis) & 1) continue;
      for (int delta : {-1, 1}) {
        GridPoint q = shifted(p, axis, delta);
        if (in_box(q) && !present(id(q))) touches_hole = true;
      }
    }
    if (touches_hole) {
      label_[i] = CellLabel::kHoleBoundary;
    } else if (p.z == 1 || p.z == top) {
      label_[i] = CellLabel::kRoughBoundary;
    } else if (p.x == 0 || p.x == side_max || p.y == 0 || p.y == side_max) {
      label_[i] = CellLabel::kSmoothBoundary;
    } else {
      label_[i] = CellLabel::kBulk;
    }
  }
}

std::vector<int> Lattice::slab_qubits(int k) const {
  std::vector<int> out;
  for (int y = 0; y < spec_.size; ++y) {
    for (int x = 0; x < spec_.size; ++x) {
      int i = id({2 * x, 2 * y, 2 * k + 1});
      if (present(i)) out.push_back(index_[i]);
    }
  }
  return out;
}

std::int64_t Lattice::hole_cells() const {
  std::int64_t count = 0;
  for (int k = 0; k < spec_.size; ++k) {
    for (int j = 0; j < spec_.size; ++j) {
      for (int i = 0; i < spec_.size; ++i) {
        GridPoint centre{2 * i, 2 * j, 2 * k + 1};
        for (const HoleBox& box : holes_) {
          if (box.lo[0] < centre.x && centre.x < box.hi[0] && box.lo[1] < centre.y && centre.y < box.hi[1] &&
              box.lo[2] < centre.z && centre.z < box.hi[2]) {
            ++count;
            break;
          }
        }
      }
    }
  }
  return count;
}

ValidationReport validate(const Lattice& lattice) {
  ValidationReport report;
  auto& v = report.violations;
  const auto& ev = lattice.edge_vertices();
  const auto& fe = lattice.face_edges();
  const auto& cf = lattice.cube_faces();

  // Boundary of boundary, for faces and cubes.
  for (std::size_t f = 0; f < fe.size(); ++f) {
    std::map<int, int> parity;
    for (int e : fe[f]) {
      if (e == Lattice::kNone) continue;
      for (int u : ev[e]) {
        if (u != Lattice::kNone) parity[u] ^= 1;
      }
    }
    for (auto [u, bit] : parity) {
      if (bit) {
        v.push_back("face " + std::to_string(f) + " at " + where(lattice.point(lattice.cells(2)[f])) +
                    ": boundary of boundary is nonzero at vertex " + std::to_string(u));
        break;
      }
    }
  }
  for (std::size_t c = 0; c < cf.size(); ++c) {
    std::map<int, int> parity;
    for (int f : cf[c]) {
      if (f == Lattice::kNone) continue;
      for (int e : fe[f]) {
        if (e != Lattice::kNone) parity[e] ^= 1;
      }
    }
    for (auto [e, bit] : parity) {
      if (bit) {
        v.push_back("cube " + std::to_string(c) + " at " + where(lattice.point(lattice.cells(3)[c])) +
                    ": boundary of boundary is nonzero at edge " + std::to_string(e));
        break;
      }
    }
  }

  // Presence must agree with the declared holes.
  for (int i = 0; i < lattice.grid_cells(); ++i) {
    GridPoint p = lattice.point(i);
    if (!lattice.in_box(p)) continue;
    bool covered = std::any_of(lattice.holes().begin(), lattice.holes().end(),
                               [&](const HoleBox& box) { return box.meets(p); });
    if (!lattice.present(i) && !covered) v.push_back("absent cell " + where(p) + " lies in no declared hole");
    if (lattice.present(i) && covered) v.push_back("present cell " + where(p) + " lies inside a declared hole");
  }

  // The dual picture must be the exact transpose of the primal incidence.
  const auto& efs = lattice.edge_faces();
  for (std::size_t f = 0; f < fe.size(); ++f) {
    for (int e : fe[f]) {
      if (e == Lattice::kNone) continue;
      if (std::find(efs[e].begin(), efs[e].end(), static_cast<int>(f)) == efs[e].end()) {
        v.push_back("dual map: qubit " + std::to_string(e) + " does not see face " + std::to_string(f));
      }
    }
  }
  for (std::size_t e = 0; e < efs.size(); ++e) {
    for (int f : efs[e]) {
      if (f == Lattice::kNone) continue;
      if (std::find(fe[f].begin(), fe[f].end(), static_cast<int>(e)) == fe[f].end()) {
        v.push_back("dual map: face " + std::to_string(f) + " does not contain qubit " + std::to_string(e));
      }
    }
  }
  const auto& fcs = lattice.face_cubes();
  for (std::size_t c = 0; c < cf.size(); ++c) {
    for (int f : cf[c]) {
      if (f == Lattice::kNone) continue;
      if (std::find(fcs[f].begin(), fcs[f].end(), static_cast<int>(c)) == fcs[f].end()) {
        v.push_back("dual map: face " + std::to_string(f) + " does not see cube " + std::to_string(c));
      }
    }
  }

  // Index tables: every present vertex and face carries a stabilizer index,
  // every present edge a qubit index, and shell cells carry none.
  for (int d = 0; d < 4; ++d) {
    const auto& ids = lattice.cells(d);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (lattice.index(ids[k]) != static_cast<int>(k) || cell_dimension(lattice.point(ids[k])) != d) {
        v.push_back("index table of dimension " + std::to_string(d) + " broken at entry " + std::to_string(k));
      }
    }
  }
  for (int i : lattice.shell_faces()) {
    if (lattice.index(i) != Lattice::kNone) v.push_back("hole-surface face " + where(lattice.point(i)) + " has an index");
  }
  return report;
}

}  // namespace fsc

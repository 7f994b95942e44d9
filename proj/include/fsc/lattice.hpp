#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

// Cell complex of the fractal surface code.
//
// Cells live on a doubled integer grid. A grid point (x, y, z) is a cell that
// spans every axis whose coordinate is odd, so its dimension is the number of
// odd coordinates: vertices have all-even coordinates, cubes all-odd.
//
// For linear size L the complex occupies x, y in [0, 2L-2] and z in [1, 2L-1]:
//   * L x L vertex columns, with vertex layers at even z = 2..2L-2 (L-1 layers);
//   * vertical edges at odd z = 1..2L-1, so each column holds L of them and the
//     lowest and highest one dangle (their outer endpoint is off the grid).
//     Those dangling edges form the rough top/bottom boundaries;
//   * the four side planes x, y in {0, 2L-2} are smooth.
// Qubits sit on edges. This is the usual open 3D surface code with
// n = L^3 + 2L(L-1)^2, d_Z = L (a vertical column) and d_X = L^2 (a slab of
// vertical edges).
//
// Unit cell (i, j, k), 0 <= i, j, k < L, is the box centred on the vertical
// edge of column (i, j) in slab k: x in (2i-1, 2i+1), z in (2k, 2k+2). Holes
// are open boxes; a cell is removed when its closure meets a hole box. The
// removed set is closed under taking cofaces, so what remains is a subcomplex.
//
// Storage pads the complex with one extra layer on every side so that all
// +-1 neighbours of a complex cell have a valid id; padding cells are absent
// and labelled kOutside.

namespace fsc {

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FractalSpec {
  int a = 3;
  int b = 1;
  int level = 0;
  int size = 3;  // L, unit cells per axis
};

void validate_spec(const FractalSpec& spec);

// ln(a^3 - b^3) / ln a
double hausdorff_dimension(const FractalSpec& spec);
// ln(a^2 - b^2) / ln a, the carpet carrying the X membrane
double membrane_dimension(const FractalSpec& spec);
// Unit cells covered by holes, from the recursion
// count(l, L) = (bL/a)^3 + (a^3 - b^3) count(l-1, L/a), count(0, .) = 0.
std::int64_t expected_hole_cells(const FractalSpec& spec);

struct GridPoint {
  int x = 0;
  int y = 0;
  int z = 0;
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

inline int cell_dimension(const GridPoint& p) { return (p.x & 1) + (p.y & 1) + (p.z & 1); }

struct HoleBox {
  std::array<int, 3> lo{};  // open interval (lo, hi) per axis
  std::array<int, 3> hi{};
  int level = 1;

  bool meets(const GridPoint& p) const;
  // Box covering unit cells [c, c + extent) on every axis.
  static HoleBox unit_cells(std::array<int, 3> corner, int extent, int level);
};

enum class CellLabel : std::uint8_t {
  kOutside,         // padding around the complex
  kBulk,
  kRoughBoundary,   // cells in the outermost z slabs, touching the dangling edges
  kSmoothBoundary,  // cells lying in a side plane
  kHoleBoundary,    // present cell that is a face of a removed cell
  kHoleShell,       // removed face or cube that still contains a present edge
  kHoleInterior,    // any other removed cell
};

const char* label_name(CellLabel label);

class Lattice {
 public:
  static constexpr int kNone = -1;

  // Builds the complex for `spec` with the given holes punched.
  Lattice(const FractalSpec& spec, std::vector<HoleBox> holes);

  // Assembles a lattice from explicit cell lists and incidence tables, without
  // recomputing incidence from geometry. Used when loading fixtures.
  struct Tables {
    std::array<std::vector<GridPoint>, 4> cells;
    std::vector<std::array<int, 2>> edge_vertices;
    std::vector<std::array<int, 4>> face_edges;
    std::vector<std::array<int, 6>> cube_faces;
  };
  Lattice(const FractalSpec& spec, std::vector<HoleBox> holes, Tables tables);

  const FractalSpec& spec() const noexcept { return spec_; }
  int size() const noexcept { return spec_.size; }
  const std::vector<HoleBox>& holes() const noexcept { return holes_; }

  int side() const noexcept { return side_; }  // storage points per axis
  int stride(int axis) const noexcept { return strides_[axis]; }
  int grid_cells() const noexcept { return side_ * side_ * side_; }
  int id(const GridPoint& p) const noexcept {
    return (p.x + 1) + side_ * ((p.y + 1) + side_ * p.z);
  }
  GridPoint point(int id) const noexcept {
    return GridPoint{id % side_ - 1, (id / side_) % side_ - 1, id / (side_ * side_)};
  }
  // Inside the L-box, ignoring holes.
  bool in_box(const GridPoint& p) const noexcept;

  bool present(int id) const noexcept { return index_[id] != kNone; }
  int index(int id) const noexcept { return index_[id]; }
  CellLabel label(int id) const noexcept { return label_[id]; }

  // Grid ids of present cells of dimension d, in index order.
  const std::vector<int>& cells(int d) const noexcept { return cells_[d]; }
  int num_vertices() const noexcept { return static_cast<int>(cells_[0].size()); }
  int num_qubits() const noexcept { return static_cast<int>(cells_[1].size()); }
  int num_faces() const noexcept { return static_cast<int>(cells_[2].size()); }
  int num_cubes() const noexcept { return static_cast<int>(cells_[3].size()); }

  // Incidence over per-dimension indices, padded with kNone.
  const std::vector<std::array<int, 2>>& edge_vertices() const noexcept { return edge_vertices_; }
  const std::vector<std::array<int, 4>>& face_edges() const noexcept { return face_edges_; }
  const std::vector<std::array<int, 6>>& cube_faces() const noexcept { return cube_faces_; }
  // Transposed maps, i.e. the dual picture: the dual edges bounding each dual
  // face (qubit) and the dual vertices ending each dual edge (face).
  const std::vector<std::array<int, 4>>& edge_faces() const noexcept { return edge_faces_; }
  const std::vector<std::array<int, 2>>& face_cubes() const noexcept { return face_cubes_; }

  // Removed cubes and faces that still contain a present edge. In the dual
  // picture these are the hole-boundary vertices and the stabilizer-free
  // hole-surface edges used by the sweep rule.
  const std::vector<int>& shell_cubes() const noexcept { return shell_cubes_; }
  const std::vector<int>& shell_faces() const noexcept { return shell_faces_; }

  // Qubits of the vertical edges in slab k (0 <= k < L) that are present.
  std::vector<int> slab_qubits(int k) const;

  // Unit cells covered by some hole.
  std::int64_t hole_cells() const;

 private:
  void init_grid();
  void assign_presence_from_holes();
  void index_cells();
  void derive_incidence();
  void derive_transposes();
  void derive_labels();

  FractalSpec spec_;
  std::vector<HoleBox> holes_;
  int side_ = 0;
  std::array<int, 3> strides_{};
  std::vector<int> index_;
  std::vector<CellLabel> label_;
  std::array<std::vector<int>, 4> cells_;
  std::vector<std::array<int, 2>> edge_vertices_;
  std::vector<std::array<int, 4>> face_edges_;
  std::vector<std::array<int, 6>> cube_faces_;
  std::vector<std::array<int, 4>> edge_faces_;
  std::vector<std::array<int, 2>> face_cubes_;
  std::vector<int> shell_cubes_;
  std::vector<int> shell_faces_;
};

// Holes of FC(a, b, level) at size L, outermost level first.
std::vector<HoleBox> fractal_holes(const FractalSpec& spec);

Lattice build_fractal_lattice(const FractalSpec& spec);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const noexcept { return violations.empty(); }
};

ValidationReport validate(const Lattice& lattice);

}  // namespace fsc

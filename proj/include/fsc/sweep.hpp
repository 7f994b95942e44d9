#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fsc/code.hpp"
#include "fsc/lattice.hpp"
#include "fsc/noise.hpp"
#include "fsc/trial.hpp"

// Sweep decoder for X errors. X errors on primal edges are dual faces; the
// face checks they violate are dual edges, so the syndrome is a set of loops
// on the dual lattice whose vertices are primal cubes. Removed cubes that
// still touch a qubit are the hole-boundary vertices, and removed faces that
// still touch a qubit are hole-surface dual edges with no stabilizer.

namespace fsc {

// Corner direction stored as a sign triple.
struct SweepDirection {
  std::array<int, 3> sign{1, 1, 1};

  // Bit 2a is the +a step from a dual vertex, bit 2a+1 the -a step.
  unsigned future_mask() const noexcept;
  friend bool operator==(const SweepDirection&, const SweepDirection&) = default;
};

// The 8 corners in rotation order. Entries 2i and 2i+1 are antipodal.
const std::array<SweepDirection, 8>& direction_schedule();

class SweepLattice {
 public:
  enum FaceKind : std::uint8_t { kNoFace = 0, kStabilizer = 1, kHoleSurface = 2 };
  enum VertexKind : std::uint8_t { kNoVertex = 0, kRegular = 1, kHoleVertex = 2 };

  explicit SweepLattice(const Lattice& lattice);

  const Lattice& lattice() const noexcept { return *lattice_; }
  std::uint8_t face_kind(int id) const noexcept { return face_kind_[id]; }
  std::uint8_t vertex_kind(int id) const noexcept { return vertex_kind_[id]; }
  int qubit(int id) const noexcept { return lattice_->index(id); }  // edges only
  const std::vector<int>& vertices() const noexcept { return vertices_; }
  // Grid offset of step k (k = 2a or 2a+1, see SweepDirection).
  int offset(int k) const noexcept { return offsets_[k]; }
  // Dual edges (stabilizer or hole-surface faces) on the boundary of a dual face.
  const std::array<int, 4>& qubit_faces(int qubit) const noexcept { return qubit_faces_[qubit]; }
  int qubit_cell(int qubit) const noexcept { return lattice_->cells(1)[qubit]; }

 private:
  const Lattice* lattice_;
  std::vector<std::uint8_t> face_kind_;
  std::vector<std::uint8_t> vertex_kind_;
  std::vector<int> vertices_;
  std::array<int, 6> offsets_{};
  std::vector<std::array<int, 4>> qubit_faces_;
};

// Grid ids of the dual edges at dual vertex `v` lying in the future of `d`.
std::vector<int> future_edges(const SweepLattice& sweep, int v, SweepDirection d);

struct SweepRule {
  bool hole_extension = true;  // rule (d); false gives the unmodified rule
  // Keep imaginary marks on hole-surface edges after the step that placed
  // them, toggled by later flips like real syndrome bits. Off by default:
  // the leftover marks block hole vertices and trap strands (see README).
  bool persistent_overlay = false;
};

// Syndrome and imaginary-overlay marks on dual edges plus the step rule.
class SweepState {
 public:
  SweepState(const SweepLattice& sweep, SweepRule rule = {});

  // Replaces the marks with a fresh measurement (indexed like the face checks)
  // and clears the overlay.
  void load_syndrome(const std::vector<std::uint8_t>& face_bits);
  void clear();

  // One parallel sweep step. Returns the qubits flipped.
  const std::vector<int>& step(SweepDirection d, Engine& engine);

  bool all_clear() const noexcept { return marked_.empty(); }
  bool syndrome_clear() const noexcept;
  bool marked(int face_id) const noexcept { return marks_[face_id] != 0; }
  bool overlay(int face_id) const noexcept;
  const std::vector<int>& marked_faces() const noexcept { return marked_; }

 private:
  void toggle(int face_id);

  const SweepLattice* sweep_;
  SweepRule rule_;
  std::vector<std::uint8_t> marks_;
  std::vector<int> marked_;
  std::vector<int> position_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<int> candidates_;
  std::vector<int> pending_edges_;
  std::vector<int> pending_overlay_;
  std::vector<std::uint8_t> edge_toggle_;
  std::vector<int> flipped_;
};

struct SweepParams {
  double p = 0.0;
  double q = 0.0;
  int rounds = 1;   // N
  int x = 1;        // sweep steps per noisy round
  int y = 0;        // rounds per direction; 0 means ceil(log2 L)
  int timeout = 0;  // T; 0 means 32 L
  int t = 0;        // timeout steps per direction; 0 means L
  SweepRule rule;
};

int default_rounds_per_direction(int size);

// The timeout loop alone, on a given error with a perfect syndrome, starting
// from schedule entry `first_direction`. `error` ends as the residual.
TrialResult sweep_timeout(const SweepLattice& sweep, const CheckMatrices& mats, const LogicalPair& logicals,
                          std::vector<std::uint8_t>& error, const SweepParams& params, int first_direction,
                          Engine& engine);

// N-1 noisy rounds, a final perfect round and the timeout loop.
TrialResult decode_sweep(const SweepLattice& sweep, const CheckMatrices& mats, const LogicalPair& logicals,
                         const SweepParams& params, Engine& engine);

}  // namespace fsc

#include "fsc/sweep.hpp"

#include <bit>
#include <stdexcept>

namespace fsc {

unsigned SweepDirection::future_mask() const noexcept {
  unsigned mask = 0;
  for (int a = 0; a < 3; ++a) mask |= 1U << (2 * a + (sign[a] > 0 ? 0 : 1));
  return mask;
}

const std::array<SweepDirection, 8>& direction_schedule() {
  static const std::array<SweepDirection, 8> schedule{{
      {{1, 1, 1}},
      {{-1, -1, -1}},
      {{1, 1, -1}},
      {{-1, -1, 1}},
      {{1, -1, 1}},
      {{-1, 1, -1}},
      {{-1, 1, 1}},
      {{1, -1, -1}},
  }};
  return schedule;
}

SweepLattice::SweepLattice(const Lattice& lattice) : lattice_(&lattice) {
  const auto cells = static_cast<std::size_t>(lattice.grid_cells());
  face_kind_.assign(cells, kNoFace);
  vertex_kind_.assign(cells, kNoVertex);
  for (int id : lattice.cells(2)) face_kind_[id] = kStabilizer;
  for (int id : lattice.shell_faces()) face_kind_[id] = kHoleSurface;
  for (int id : lattice.cells(3)) vertex_kind_[id] = kRegular;
  for (int id : lattice.shell_cubes()) vertex_kind_[id] = kHoleVertex;
  for (int id = 0; id < lattice.grid_cells(); ++id) {
    if (vertex_kind_[id] != kNoVertex) vertices_.push_back(id);
  }
  for (int a = 0; a < 3; ++a) {
    offsets_[2 * a] = lattice.stride(a);
    offsets_[2 * a + 1] = -lattice.stride(a);
  }
  qubit_faces_.resize(static_cast<std::size_t>(lattice.num_qubits()));
  for (int q = 0; q < lattice.num_qubits(); ++q) {
    int id = lattice.cells(1)[q];
    GridPoint p = lattice.point(id);
    int axis = (p.x & 1) ? 0 : (p.y & 1) ? 1 : 2;
    auto& out = qubit_faces_[q];
    out.fill(-1);
    int n = 0;
    for (int a = 0; a < 3; ++a) {
      if (a == axis) continue;
      for (int s = 0; s < 2; ++s) {
        int f = id + offsets_[2 * a + s];
        if (face_kind_[f] != kNoFace) out[n++] = f;
      }
    }
  }
}

std::vector<int> future_edges(const SweepLattice& sweep, int v, SweepDirection d) {
  if (sweep.vertex_kind(v) == SweepLattice::kNoVertex) throw std::invalid_argument("future_edges: not a dual vertex");
  std::vector<int> out;
  unsigned future = d.future_mask();
  for (int k = 0; k < 6; ++k) {
    int f = v + sweep.offset(k);
    if ((future >> k) & 1U && sweep.face_kind(f) != SweepLattice::kNoFace) out.push_back(f);
  }
  return out;
}

SweepState::SweepState(const SweepLattice& sweep, SweepRule rule) : sweep_(&sweep), rule_(rule) {
  const auto cells = static_cast<std::size_t>(sweep.lattice().grid_cells());
  marks_.assign(cells, 0);
  position_.assign(cells, -1);
  stamp_.assign(cells, 0);
  edge_toggle_.assign(static_cast<std::size_t>(sweep.lattice().num_qubits()), 0);
}

void SweepState::toggle(int f) {
  marks_[f] ^= 1;
  if (marks_[f]) {
    position_[f] = static_cast<int>(marked_.size());
    marked_.push_back(f);
  } else {
    int pos = position_[f];
    int last = marked_.back();
    marked_[pos] = last;
    position_[last] = pos;
    marked_.pop_back();
    position_[f] = -1;
  }
}

void SweepState::clear() {
  for (int f : marked_) {
    marks_[f] = 0;
    position_[f] = -1;
  }
  marked_.clear();
}

void SweepState::load_syndrome(const std::vector<std::uint8_t>& face_bits) {
  const auto& faces = sweep_->lattice().cells(2);
  if (face_bits.size() != faces.size()) throw std::invalid_argument("syndrome size does not match the face checks");
  clear();
  for (std::size_t i = 0; i < face_bits.size(); ++i) {
    if (face_bits[i]) toggle(faces[i]);
  }
}

bool SweepState::syndrome_clear() const noexcept {
  for (int f : marked_) {
    if (sweep_->face_kind(f) == SweepLattice::kStabilizer) return false;
  }
  return true;
}

bool SweepState::overlay(int f) const noexcept {
  return marks_[f] && sweep_->face_kind(f) == SweepLattice::kHoleSurface;
}

const std::vector<int>& SweepState::step(SweepDirection d, Engine& engine) {
  const SweepLattice& sw = *sweep_;
  flipped_.clear();
  pending_edges_.clear();
  pending_overlay_.clear();
  candidates_.clear();
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  for (int f : marked_) {
    for (int k = 0; k < 6; ++k) {
      int v = f + sw.offset(k);
      if (sw.vertex_kind(v) != SweepLattice::kNoVertex && stamp_[v] != epoch_) {
        stamp_[v] = epoch_;
        candidates_.push_back(v);
      }
    }
  }

  const unsigned future = d.future_mask();
  const unsigned past = ~future & 0x3FU;
  for (int v : candidates_) {
    unsigned mask = 0;
    for (int k = 0; k < 6; ++k) mask |= static_cast<unsigned>(marks_[v + sw.offset(k)]) << k;
    if (mask == 0 || (mask & past)) continue;
    int count = std::popcount(mask);
    if (count == 2) {
      int k1 = std::countr_zero(mask);
      int k2 = std::countr_zero(mask & (mask - 1));
      int q = sw.qubit(v + sw.offset(k1) + sw.offset(k2));
      if (q != Lattice::kNone) pending_edges_.push_back(q);
    } else if (count == 3) {
      int ks[3];
      int n = 0;
      for (int k = 0; k < 6; ++k) {
        if ((mask >> k) & 1U) ks[n++] = k;
      }
      int options[3];
      int m = 0;
      for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
          int q = sw.qubit(v + sw.offset(ks[i]) + sw.offset(ks[j]));
          if (q != Lattice::kNone) options[m++] = q;
        }
      }
      if (m > 0) pending_edges_.push_back(options[m == 1 ? 0 : engine() % static_cast<unsigned>(m)]);
    } else if (count == 1 && rule_.hole_extension && sw.vertex_kind(v) == SweepLattice::kHoleVertex) {
      int k1 = std::countr_zero(mask);
      int faces[2];
      int qubits[2];
      int m = 0;
      for (int k = 0; k < 6; ++k) {
        if (k == k1 || !((future >> k) & 1U)) continue;
        int f = v + sw.offset(k);
        if (sw.face_kind(f) != SweepLattice::kHoleSurface) continue;
        int q = sw.qubit(v + sw.offset(k1) + sw.offset(k));
        if (q == Lattice::kNone) continue;
        faces[m] = f;
        qubits[m] = q;
        ++m;
      }
      if (m > 0) {
        int pick = m == 1 ? 0 : static_cast<int>(engine() % static_cast<unsigned>(m));
        if (rule_.persistent_overlay) pending_overlay_.push_back(faces[pick]);
        pending_edges_.push_back(qubits[pick]);
      }
    }
  }

  for (int q : pending_edges_) edge_toggle_[q] ^= 1;
  for (int q : pending_edges_) {
    if (edge_toggle_[q]) {
      edge_toggle_[q] = 0;
      flipped_.push_back(q);
    }
  }
  for (int f : pending_overlay_) toggle(f);
  // Without a persistent overlay the imaginary edge only lives for the
  // decision that introduced it, so hole-surface edges never hold a mark.
  for (int q : flipped_) {
    for (int f : sw.qubit_faces(q)) {
      if (f >= 0 && (rule_.persistent_overlay || sw.face_kind(f) == SweepLattice::kStabilizer)) toggle(f);
    }
  }
  return flipped_;
}

int default_rounds_per_direction(int size) {
  int y = 0;
  while ((1 << y) < size) ++y;
  return std::max(1, y);
}

namespace {

struct ResolvedSchedule {
  int y;
  int timeout;
  int t;
};

ResolvedSchedule resolve(const SweepParams& params, int size) {
  if (params.rounds < 1 || params.x < 1 || params.y < 0 || params.timeout < 0 || params.t < 0) {
    throw std::invalid_argument("sweep parameters must be positive");
  }
  return {params.y > 0 ? params.y : default_rounds_per_direction(size), params.timeout > 0 ? params.timeout : 32 * size,
          params.t > 0 ? params.t : size};
}

// Perfect syndrome of `error`, then up to T steps starting from schedule
// entry `base`; `error` accumulates the corrections.
TrialResult run_timeout(SweepState& state, const CheckMatrices& mats, const LogicalPair& logicals,
                        std::vector<std::uint8_t>& error, const ResolvedSchedule& schedule, int base, Engine& engine) {
  const auto& directions = direction_schedule();
  state.load_syndrome(syndrome_bits(mats.z_checks, error));
  TrialResult result;
  for (int s = 0; s < schedule.timeout && !state.all_clear(); ++s) {
    for (int q : state.step(directions[(base + s / schedule.t) % 8], engine)) error[q] ^= 1;
    result.steps = s + 1;
  }
  for (std::uint8_t b : syndrome_bits(mats.z_checks, error)) {
    if (b) result.syndrome_cleared = false;
  }
  result.failed = !result.syndrome_cleared || odd_overlap(error, logicals.z_string);
  result.residual_weight = weight(error);
  return result;
}

}  // namespace

TrialResult sweep_timeout(const SweepLattice& sweep, const CheckMatrices& mats, const LogicalPair& logicals,
                          std::vector<std::uint8_t>& error, const SweepParams& params, int first_direction,
                          Engine& engine) {
  if (error.size() != static_cast<std::size_t>(sweep.lattice().num_qubits())) {
    throw std::invalid_argument("error chain does not match the lattice");
  }
  SweepState state(sweep, params.rule);
  return run_timeout(state, mats, logicals, error, resolve(params, sweep.lattice().size()), first_direction, engine);
}

TrialResult decode_sweep(const SweepLattice& sweep, const CheckMatrices& mats, const LogicalPair& logicals,
                         const SweepParams& params, Engine& engine) {
  const Lattice& lattice = sweep.lattice();
  const ResolvedSchedule schedule = resolve(params, lattice.size());
  const auto& directions = direction_schedule();

  std::vector<std::uint8_t> error(static_cast<std::size_t>(lattice.num_qubits()), 0);
  std::vector<std::uint8_t> faces;
  SweepState state(sweep, params.rule);
  for (int r = 0; r + 1 < params.rounds; ++r) {
    add_errors(error, params.p, engine);
    faces = syndrome_bits(mats.z_checks, error);
    add_errors(faces, params.q, engine);
    state.load_syndrome(faces);
    SweepDirection d = directions[(r / schedule.y) % 8];
    for (int s = 0; s < params.x; ++s) {
      for (int q : state.step(d, engine)) error[q] ^= 1;
    }
  }

  add_errors(error, params.p, engine);
  const int base = ((params.rounds - 1) / schedule.y) % 8;
  return run_timeout(state, mats, logicals, error, schedule, base, engine);
}

}  // namespace fsc

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fsc/lattice.hpp"
#include "fsc/noise.hpp"

// Error patterns with known geometry, used to probe the sweep-time bounds
// from the self test, the unit tests and the acceptance run.

namespace fsc {

// Linear dimensions (l_x, l_y, l_z), in dual-lattice units, of the smallest
// cuboid holding the dual faces of `qubits` and the given hole boxes.
std::array<int, 3> envelope(const Lattice& lattice, const std::vector<int>& qubits,
                            const std::vector<HoleBox>& holes = {});

// A connected cluster of qubits (dual faces sharing dual edges), grown at
// random from a seed qubit near the centre until it holds `target` qubits or
// cannot grow without its envelope exceeding `max_extent` on some axis.
std::vector<int> random_membrane(const Lattice& lattice, int max_extent, int target, Engine& engine);

// Two unit holes of FC(3,1,2) at L = 9, joined by a strip of two vertical
// edges. The strip's syndrome is a pair of parallel strands running between
// the holes, which the unmodified sweep rule cannot move.
struct TrappedStrands {
  FractalSpec spec{3, 1, 2, 9};
  std::vector<int> qubits;
  std::vector<HoleBox> holes;  // the two holes the strands end on
};

TrappedStrands trapped_strands(const Lattice& lattice);

}  // namespace fsc

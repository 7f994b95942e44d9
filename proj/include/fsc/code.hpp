#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsc/lattice.hpp"

namespace fsc {

enum class Pauli : std::uint8_t { kX, kZ };

struct CheckMatrices {
  int num_qubits = 0;
  std::vector<std::vector<int>> x_checks;  // A_v, one row per present vertex
  std::vector<std::vector<int>> z_checks;  // B_f, one row per present face
};

CheckMatrices stabilizer_matrices(const Lattice& lattice);

// CSS condition and row-weight bounds.
ValidationReport validate(const CheckMatrices& mats);

int count_logical_qubits(const CheckMatrices& mats);

struct LogicalPair {
  std::vector<std::uint8_t> z_string;    // vertical path between the rough boundaries
  std::vector<std::uint8_t> x_membrane;  // vertical edges of one slab
  int membrane_slab = 0;
};

LogicalPair logical_representatives(const Lattice& lattice);

bool odd_overlap(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b);
int weight(const std::vector<std::uint8_t>& chain);

// Exact minimum weight of a logical of the given Pauli species: shortest path
// between the rough boundaries for Z, minimum edge cut separating them for X.
int min_logical_weight(const Lattice& lattice, Pauli species);

// Largest lattice accepted by the exact probes above.
inline constexpr int kMaxExactQubits = 2'000'000;

// Open grid box covering h^3 primal cubes near the centre of a plain lattice.
HoleBox bulk_cube_hole(int size, int h);

struct CountingReport {
  struct Delta {
    std::string name;
    long expected = 0;
    long actual = 0;
  };
  int hole_size = 0;
  std::vector<Delta> deltas;
  int k_before = 0;
  int k_after = 0;
  bool ok() const;
  std::string describe() const;
};

// Punches one bulk h^3 cube hole into a plain lattice and compares the removed
// stabilizers, qubits and relations with the closed forms.
CountingReport verify_hole_counting(const Lattice& plain, const CheckMatrices& before, int hole_size);

}  // namespace fsc

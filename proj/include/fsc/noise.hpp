#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fsc/code.hpp"

namespace fsc {

using Engine = std::mt19937_64;

// Per-trial random stream. The engine is seeded from (master_seed, stream,
// trial_index) alone, so trials can run in any order on any thread.
struct TrialRng {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
  std::uint64_t stream = 0;

  Engine engine() const;
};

struct ErrorChain {
  Pauli species = Pauli::kX;
  std::vector<std::uint8_t> bits;
};

// One bit per row of the check matrix that detects the error species:
// vertex checks for Z errors, face checks for X errors.
struct Syndrome {
  std::vector<std::uint8_t> bits;
};

// Bernoulli(p) as one 64-bit draw compared against a fixed threshold.
class Bernoulli {
 public:
  explicit Bernoulli(double p);
  bool operator()(Engine& engine) const { return engine() < threshold_; }
  double p() const noexcept { return p_; }

 private:
  double p_;
  std::uint64_t threshold_;
};

// Above this many bits and for p < 0.2, sampling skips geometrically.
inline constexpr std::size_t kGeometricSkipThreshold = 1'000'000;

// XORs an i.i.d. Bernoulli(p) pattern into `bits`.
void add_errors(std::vector<std::uint8_t>& bits, double p, Engine& engine);

ErrorChain sample_errors(int n_qubits, double p, const TrialRng& rng, Pauli species = Pauli::kX);

std::vector<std::uint8_t> syndrome_bits(const std::vector<std::vector<int>>& checks,
                                        const std::vector<std::uint8_t>& error);

Syndrome measure_syndrome(const ErrorChain& error, const CheckMatrices& mats, double q, const TrialRng& rng,
                          bool perfect);

void check_probability(double p, const char* name);

}  // namespace fsc

#include "fsc/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fsc {

Engine TrialRng::engine() const {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream),      static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(trial_index), static_cast<std::uint32_t>(trial_index >> 32)};
  return Engine(seq);
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw std::invalid_argument(std::string("invariant 0 <= ") + name + " < 1 violated: " + name + " = " +
                                std::to_string(p));
  }
}

Bernoulli::Bernoulli(double p) : p_(p) {
  check_probability(p, "p");
  threshold_ = static_cast<std::uint64_t>(std::ldexp(p, 64));
}

void add_errors(std::vector<std::uint8_t>& bits, double p, Engine& engine) {
  if (p <= 0.0) return;
  if (bits.size() > kGeometricSkipThreshold && p < 0.2) {
    const double log_q = std::log1p(-p);
    std::size_t i = 0;
    while (true) {
      double u = (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;
      double gap = std::floor(std::log(u) / log_q);
      if (gap >= static_cast<double>(bits.size() - i)) return;
      i += static_cast<std::size_t>(gap);
      bits[i] ^= 1;
      ++i;
      if (i >= bits.size()) return;
    }
  }
  Bernoulli coin(p);
  for (auto& b : bits) b ^= static_cast<std::uint8_t>(coin(engine));
}

ErrorChain sample_errors(int n_qubits, double p, const TrialRng& rng, Pauli species) {
  check_probability(p, "p");
  ErrorChain chain{species, std::vector<std::uint8_t>(static_cast<std::size_t>(n_qubits), 0)};
  Engine engine = rng.engine();
  add_errors(chain.bits, p, engine);
  return chain;
}

std::vector<std::uint8_t> syndrome_bits(const std::vector<std::vector<int>>& checks,
                                        const std::vector<std::uint8_t>& error) {
  std::vector<std::uint8_t> out(checks.size(), 0);
  for (std::size_t r = 0; r < checks.size(); ++r) {
    std::uint8_t parity = 0;
    for (int q : checks[r]) parity ^= error[q];
    out[r] = parity & 1;
  }
  return out;
}

Syndrome measure_syndrome(const ErrorChain& error, const CheckMatrices& mats, double q, const TrialRng& rng,
                          bool perfect) {
  if (error.bits.size() != static_cast<std::size_t>(mats.num_qubits)) {
    throw std::invalid_argument("error chain and check matrices disagree on the qubit count");
  }
  const auto& checks = error.species == Pauli::kZ ? mats.x_checks : mats.z_checks;
  Syndrome s{syndrome_bits(checks, error.bits)};
  if (!perfect) {
    check_probability(q, "q");
    // Measurement flips draw from a sibling stream so they never reuse the
    // bits that produced the data error.
    TrialRng measurement = rng;
    measurement.stream ^= 0x9e3779b97f4a7c15ULL;
    Engine engine = measurement.engine();
    add_errors(s.bits, q, engine);
  }
  return s;
}

}  // namespace fsc

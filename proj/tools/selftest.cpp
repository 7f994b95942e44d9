#include "selftest.hpp"

#include <chrono>
#include <functional>
#include <ostream>
#include <string>

#include "fsc/code.hpp"
#include "fsc/lattice.hpp"
#include "fsc/matching.hpp"
#include "fsc/probes.hpp"
#include "fsc/sweep.hpp"

namespace fsc {

namespace {

std::string name_of(const FractalSpec& s) {
  return "FC(" + std::to_string(s.a) + "," + std::to_string(s.b) + "," + std::to_string(s.level) +
         ") L=" + std::to_string(s.size);
}

// Returns an empty string on success, otherwise what went wrong.
using Check = std::function<std::string()>;

std::string structure(const FractalSpec& spec) {
  Lattice lattice = build_fractal_lattice(spec);
  ValidationReport report = validate(lattice);
  if (!report.ok()) return report.violations.front();
  CheckMatrices mats = stabilizer_matrices(lattice);
  ValidationReport css = validate(mats);
  if (!css.ok()) return css.violations.front();
  int k = count_logical_qubits(mats);
  if (k != 1) return "k = " + std::to_string(k);
  int dz = min_logical_weight(lattice, Pauli::kZ);
  if (dz != spec.size) return "d_Z = " + std::to_string(dz);
  return {};
}

std::string x_distance(const FractalSpec& spec, int expected) {
  int dx = min_logical_weight(build_fractal_lattice(spec), Pauli::kX);
  return dx == expected ? std::string() : "d_X = " + std::to_string(dx) + ", expected " + std::to_string(expected);
}

std::string weight_one_mwpm() {
  Lattice lattice = build_fractal_lattice({3, 1, 1, 3});
  MwpmDecoder decoder(lattice);
  for (int q = 0; q < lattice.num_qubits(); ++q) {
    std::vector<std::uint8_t> error(static_cast<std::size_t>(lattice.num_qubits()), 0);
    error[q] = 1;
    if (decoder.decode(error).failed) return "qubit " + std::to_string(q) + " not corrected";
  }
  return {};
}

std::string weight_one_sweep() {
  Lattice lattice = build_fractal_lattice({3, 1, 1, 3});
  SweepLattice sweep(lattice);
  CheckMatrices mats = stabilizer_matrices(lattice);
  LogicalPair logicals = logical_representatives(lattice);
  Engine engine(1);
  for (int q = 0; q < lattice.num_qubits(); ++q) {
    std::vector<std::uint8_t> error(static_cast<std::size_t>(lattice.num_qubits()), 0);
    error[q] = 1;
    if (sweep_timeout(sweep, mats, logicals, error, {}, 0, engine).failed) {
      return "qubit " + std::to_string(q) + " not corrected";
    }
  }
  return {};
}

std::string sweep_time_bound(int samples) {
  Lattice lattice = build_fractal_lattice({3, 1, 0, 12});
  SweepLattice sweep(lattice);
  CheckMatrices mats = stabilizer_matrices(lattice);
  Engine engine(2024);
  const SweepDirection d = direction_schedule()[0];
  for (int i = 0; i < samples; ++i) {
    std::vector<int> membrane = random_membrane(lattice, 5, 1 + static_cast<int>(engine() % 40), engine);
    std::array<int, 3> env = envelope(lattice, membrane);
    int bound = env[0] + env[1] + env[2] - 1;
    std::vector<std::uint8_t> error(static_cast<std::size_t>(lattice.num_qubits()), 0);
    for (int q : membrane) error[q] = 1;
    SweepState state(sweep);
    state.load_syndrome(syndrome_bits(mats.z_checks, error));
    int steps = 0;
    while (!state.all_clear() && steps <= bound) {
      state.step(d, engine);
      ++steps;
    }
    if (!state.all_clear() || steps > bound) {
      return "membrane " + std::to_string(i) + " not cleared within " + std::to_string(bound) + " steps";
    }
  }
  return {};
}

std::string trapped(bool modified) {
  Lattice lattice = build_fractal_lattice({3, 1, 2, 9});
  SweepLattice sweep(lattice);
  CheckMatrices mats = stabilizer_matrices(lattice);
  TrappedStrands fixture = trapped_strands(lattice);
  std::array<int, 3> env = envelope(lattice, fixture.qubits, fixture.holes);
  const int limit = modified ? env[0] + env[1] + env[2] - 1 : 10 * lattice.size();
  std::vector<std::uint8_t> error(static_cast<std::size_t>(lattice.num_qubits()), 0);
  for (int q : fixture.qubits) error[q] = 1;
  SweepRule rule;
  rule.hole_extension = modified;
  SweepState state(sweep, rule);
  state.load_syndrome(syndrome_bits(mats.z_checks, error));
  Engine engine(3);
  int steps = 0;
  while (!state.all_clear() && steps < limit) {
    state.step(direction_schedule()[0], engine);
    ++steps;
  }
  if (modified && !state.all_clear()) return "strands not cleared within " + std::to_string(limit) + " steps";
  if (!modified && state.all_clear()) return "unmodified rule cleared the strands after " + std::to_string(steps);
  return {};
}

}  // namespace

int run_selftest(std::ostream& out) {
  std::vector<std::pair<std::string, Check>> checks;
  for (const FractalSpec& s : {FractalSpec{3, 1, 0, 2}, FractalSpec{3, 1, 0, 3}, FractalSpec{3, 1, 0, 4},
                               FractalSpec{3, 1, 0, 6}, FractalSpec{3, 1, 1, 3}, FractalSpec{3, 1, 1, 6},
                               FractalSpec{3, 1, 1, 9}, FractalSpec{3, 1, 1, 12}, FractalSpec{3, 1, 2, 9}}) {
    checks.emplace_back("structure " + name_of(s), [s] { return structure(s); });
  }
  checks.emplace_back("d_X FC(3,1,1) L=3 is 8", [] { return x_distance({3, 1, 1, 3}, 8); });
  checks.emplace_back("d_X FC(3,1,2) L=9 is 64", [] { return x_distance({3, 1, 2, 9}, 64); });
  checks.emplace_back("weight-1 Z errors, matching", weight_one_mwpm);
  checks.emplace_back("weight-1 X errors, sweep", weight_one_sweep);
  checks.emplace_back("sweep-time bound, 200 bulk membranes", [] { return sweep_time_bound(200); });
  checks.emplace_back("trapped strands stall under the unmodified rule", [] { return trapped(false); });
  checks.emplace_back("trapped strands clear under the modified rule", [] { return trapped(true); });

  int failed = 0;
  for (const auto& [name, check] : checks) {
    auto start = std::chrono::steady_clock::now();
    std::string problem;
    try {
      problem = check();
    } catch (const std::exception& e) {
      problem = std::string("exception: ") + e.what();
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (problem.empty()) {
      out << "ok    " << name << " (" << static_cast<long>(ms) << " ms)\n";
    } else {
      out << "FAIL  " << name << ": " << problem << '\n';
      ++failed;
    }
  }
  return failed;
}

}  // namespace fsc

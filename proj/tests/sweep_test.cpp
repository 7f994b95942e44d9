#include <gtest/gtest.h>

#include <algorithm>
#include <bitset>
#include <set>

#include "fsc/code.hpp"
#include "fsc/lattice.hpp"
#include "fsc/noise.hpp"
#include "fsc/probes.hpp"
#include "fsc/sweep.hpp"

namespace fsc {
namespace {

std::vector<std::uint8_t> zeros(const Lattice& lattice) {
  return std::vector<std::uint8_t>(static_cast<std::size_t>(lattice.num_qubits()), 0);
}

TEST(Directions, ScheduleCoversCornersInAntipodalPairs) {
  const auto& schedule = direction_schedule();
  std::set<std::array<int, 3>> seen;
  for (const SweepDirection& d : schedule) {
    seen.insert(d.sign);
    unsigned mask = d.future_mask();
    EXPECT_EQ(std::bitset<6>(mask).count(), 3u);
    for (int a = 0; a < 3; ++a) {
      bool plus = (mask >> (2 * a)) & 1U;
      bool minus = (mask >> (2 * a + 1)) & 1U;
      EXPECT_NE(plus, minus);
      EXPECT_EQ(plus, d.sign[a] > 0);
    }
  }
  EXPECT_EQ(seen.size(), 8u);
  EXPECT_EQ(schedule[0].sign, (std::array<int, 3>{1, 1, 1}));
  for (int i = 0; i < 4; ++i) {
    for (int a = 0; a < 3; ++a) EXPECT_EQ(schedule[2 * i].sign[a], -schedule[2 * i + 1].sign[a]);
  }
}

class SweepSmall : public ::testing::Test {
 protected:
  Lattice plain = build_fractal_lattice({3, 1, 0, 4});
  Lattice holed = build_fractal_lattice({3, 1, 1, 3});
};

TEST_F(SweepSmall, BulkVertexFutureIsThePositiveSteps) {
  SweepLattice sweep(plain);
  const int v = plain.id({3, 3, 3});
  std::vector<int> f = future_edges(sweep, v, {{1, 1, 1}});
  std::vector<int> expected{plain.id({4, 3, 3}), plain.id({3, 4, 3}), plain.id({3, 3, 4})};
  std::sort(f.begin(), f.end());
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(f, expected);
  std::vector<int> back = future_edges(sweep, v, {{-1, -1, -1}});
  EXPECT_EQ(back.size(), 3u);
  EXPECT_TRUE(std::find(back.begin(), back.end(), plain.id({2, 3, 3})) != back.end());
}

TEST_F(SweepSmall, RoughEndTruncatesFuture) {
  SweepLattice sweep(plain);
  const int top = plain.id({3, 3, 2 * 4 - 1});
  EXPECT_LT(future_edges(sweep, top, {{1, 1, 1}}).size(), 3u);
  EXPECT_EQ(future_edges(sweep, top, {{1, 1, -1}}).size(), 3u);
  EXPECT_THROW(future_edges(sweep, plain.id({2, 2, 2}), {{1, 1, 1}}), std::invalid_argument);
}

TEST_F(SweepSmall, HoleCornerSeesHoleSurface) {
  SweepLattice sweep(holed);
  const int v = holed.id({3, 3, 3});
  ASSERT_EQ(sweep.vertex_kind(v), SweepLattice::kHoleVertex);
  std::vector<int> f = future_edges(sweep, v, {{-1, -1, 1}});
  bool surface = std::any_of(f.begin(), f.end(),
                             [&](int id) { return sweep.face_kind(id) == SweepLattice::kHoleSurface; });
  EXPECT_TRUE(surface);
}

TEST_F(SweepSmall, SingleFaceClearedInOneStep) {
  SweepLattice sweep(plain);
  CheckMatrices mats = stabilizer_matrices(plain);
  for (GridPoint g : {GridPoint{2, 2, 3}, GridPoint{3, 2, 4}, GridPoint{2, 3, 4}}) {
    const int q = plain.index(plain.id(g));
    ASSERT_GE(q, 0);
    std::vector<std::uint8_t> error = zeros(plain);
    error[q] = 1;
    SweepState state(sweep);
    std::vector<std::uint8_t> syndrome = syndrome_bits(mats.z_checks, error);
    ASSERT_EQ(std::count(syndrome.begin(), syndrome.end(), 1), 4);
    state.load_syndrome(syndrome);
    Engine engine(1);
    std::vector<int> flipped = state.step(direction_schedule()[0], engine);
    EXPECT_EQ(flipped, std::vector<int>{q});
    EXPECT_TRUE(state.all_clear());
  }
}

TEST_F(SweepSmall, WeightOneErrorsAllCorrected) {
  SweepLattice sweep(holed);
  CheckMatrices mats = stabilizer_matrices(holed);
  LogicalPair logicals = logical_representatives(holed);
  Engine engine(5);
  for (int first = 0; first < 8; ++first) {
    for (int q = 0; q < holed.num_qubits(); ++q) {
      std::vector<std::uint8_t> error = zeros(holed);
      error[q] = 1;
      TrialResult r = sweep_timeout(sweep, mats, logicals, error, {}, first, engine);
      ASSERT_FALSE(r.failed) << "qubit " << q << " direction " << first;
      // The residual may be a stabilizer, never a logical.
      std::vector<std::uint8_t> s = syndrome_bits(mats.z_checks, error);
      EXPECT_EQ(std::count(s.begin(), s.end(), 1), 0);
      EXPECT_FALSE(odd_overlap(error, logicals.z_string));
    }
  }
}

// Marks on stabilizer faces must always equal the syndrome of the error
// times everything flipped so far.
TEST(SweepInvariant, MarksTrackResidualSyndrome) {
  for (bool persistent : {false, true}) {
    Lattice lattice = build_fractal_lattice({3, 1, 1, 6});
    SweepLattice sweep(lattice);
    CheckMatrices mats = stabilizer_matrices(lattice);
    SweepRule rule;
    rule.persistent_overlay = persistent;
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
      std::vector<std::uint8_t> error = sample_errors(lattice.num_qubits(), 0.05, {8, trial, 0}).bits;
      SweepState state(sweep, rule);
      state.load_syndrome(syndrome_bits(mats.z_checks, error));
      Engine engine(trial);
      for (int step = 0; step < 40; ++step) {
        for (int q : state.step(direction_schedule()[(step / 6) % 8], engine)) error[q] ^= 1;
        std::vector<std::uint8_t> expected = syndrome_bits(mats.z_checks, error);
        for (std::size_t r = 0; r < expected.size(); ++r) {
          ASSERT_EQ(state.marked(lattice.cells(2)[r]), expected[r] != 0) << "step " << step;
        }
        if (!persistent) {
          for (int f : state.marked_faces()) ASSERT_EQ(sweep.face_kind(f), SweepLattice::kStabilizer);
        }
      }
    }
  }
}

TEST(SweepLemma, BulkMembranesWithinEnvelopeBound) {
  Lattice lattice = build_fractal_lattice({3, 1, 0, 12});
  SweepLattice sweep(lattice);
  CheckMatrices mats = stabilizer_matrices(lattice);
  Engine engine(77);
  for (const SweepDirection& d : direction_schedule()) {
    for (int i = 0; i < 40; ++i) {
      std::vector<int> membrane = random_membrane(lattice, 5, 1 + static_cast<int>(engine() % 40), engine);
      std::array<int, 3> env = envelope(lattice, membrane);
      ASSERT_LE(*std::max_element(env.begin(), env.end()), 5);
      const int bound = env[0] + env[1] + env[2] - 1;
      std::vector<std::uint8_t> error = zeros(lattice);
      for (int q : membrane) error[q] = 1;
      SweepState state(sweep);
      state.load_syndrome(syndrome_bits(mats.z_checks, error));
      int steps = 0;
      while (!state.all_clear() && steps < bound) {
        state.step(d, engine);
        ++steps;
      }
      EXPECT_TRUE(state.all_clear()) << "membrane of " << membrane.size() << " qubits, bound " << bound;
    }
  }
}

TEST(SweepLemma, EnvelopeOfOneFace) {
  Lattice lattice = build_fractal_lattice({3, 1, 0, 6});
  // A vertical edge is a horizontal dual face: one unit in x and y, none in z.
  EXPECT_EQ(envelope(lattice, {lattice.index(lattice.id({4, 4, 5}))}), (std::array<int, 3>{1, 1, 0}));
}

TEST(SweepTrapped, StrandsBetweenHoles) {
  Lattice lattice = build_fractal_lattice({3, 1, 2, 9});
  SweepLattice sweep(lattice);
  CheckMatrices mats = stabilizer_matrices(lattice);
  TrappedStrands fixture = trapped_strands(lattice);
  ASSERT_EQ(fixture.qubits.size(), 2u);
  ASSERT_EQ(fixture.holes.size(), 2u);
  std::vector<std::uint8_t> error = zeros(lattice);
  for (int q : fixture.qubits) error[q] = 1;
  const std::vector<std::uint8_t> syndrome = syndrome_bits(mats.z_checks, error);

  SweepRule unmodified;
  unmodified.hole_extension = false;
  SweepState stuck(sweep, unmodified);
  stuck.load_syndrome(syndrome);
  const std::size_t initial = stuck.marked_faces().size();
  Engine engine(3);
  for (int step = 0; step < 10 * lattice.size(); ++step) {
    EXPECT_TRUE(stuck.step(direction_schedule()[0], engine).empty());
    ASSERT_EQ(stuck.marked_faces().size(), initial);
  }

  std::array<int, 3> env = envelope(lattice, fixture.qubits, fixture.holes);
  const int bound = env[0] + env[1] + env[2] - 1;
  SweepState state(sweep);
  state.load_syndrome(syndrome);
  int steps = 0;
  while (!state.all_clear() && steps < bound) {
    state.step(direction_schedule()[0], engine);
    ++steps;
  }
  EXPECT_TRUE(state.all_clear());
}

TEST(SweepDecode, NoNoiseNoCorrection) {
  Lattice lattice = build_fractal_lattice({3, 1, 1, 6});
  SweepLattice sweep(lattice);
  CheckMatrices mats = stabilizer_matrices(lattice);
  LogicalPair logicals = logical_representatives(lattice);
  for (int rounds : {1, 5, 33}) {
    SweepParams params;
    params.rounds = rounds;
    Engine engine(rounds);
    TrialResult r = decode_sweep(sweep, mats, logicals, params, engine);
    EXPECT_FALSE(r.failed);
    EXPECT_TRUE(r.syndrome_cleared);
    EXPECT_EQ(r.residual_weight, 0);
  }
}

TEST(SweepDecode, SameEngineSameResult) {
  Lattice lattice = build_fractal_lattice({3, 1, 1, 6});
  SweepLattice sweep(lattice);
  CheckMatrices mats = stabilizer_matrices(lattice);
  LogicalPair logicals = logical_representatives(lattice);
  SweepParams params;
  params.p = 0.04;
  params.q = 0.04;
  params.rounds = 6;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Engine a(seed);
    Engine b(seed);
    TrialResult ra = decode_sweep(sweep, mats, logicals, params, a);
    TrialResult rb = decode_sweep(sweep, mats, logicals, params, b);
    EXPECT_EQ(ra.failed, rb.failed);
    EXPECT_EQ(ra.steps, rb.steps);
    EXPECT_EQ(ra.residual_weight, rb.residual_weight);
  }
}

TEST(SweepDecode, RejectsBadSchedule) {
  Lattice lattice = build_fractal_lattice({3, 1, 0, 3});
  SweepLattice sweep(lattice);
  CheckMatrices mats = stabilizer_matrices(lattice);
  LogicalPair logicals = logical_representatives(lattice);
  SweepParams params;
  params.x = -1;
  Engine engine(1);
  EXPECT_THROW(decode_sweep(sweep, mats, logicals, params, engine), std::invalid_argument);
  EXPECT_EQ(default_rounds_per_direction(12), 4);
  EXPECT_EQ(default_rounds_per_direction(16), 4);
  EXPECT_EQ(default_rounds_per_direction(17), 5);
}

}  // namespace
}  // namespace fsc

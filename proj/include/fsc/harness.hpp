#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fsc/code.hpp"
#include "fsc/lattice.hpp"
#include "fsc/matching.hpp"
#include "fsc/sweep.hpp"
#include "fsc/trial.hpp"

namespace fsc {

enum class Decoder { kSweep, kMwpm };

const char* decoder_name(Decoder decoder);
Decoder parse_decoder(const std::string& text);

// Measurement error rate as a function of p: q = p, a fixed value, or zero.
struct QSetting {
  enum class Rule { kEqual, kFixed, kZero };
  Rule rule = Rule::kEqual;
  double value = 0.0;

  double resolve(double p) const;
  std::string describe() const;  // "equal", "0" or the fixed value
};

QSetting parse_q(const std::string& text);
// q = p for the sweep decoder, q = 0 for matching.
QSetting default_q(Decoder decoder);

struct SweepSchedule {
  int steps_per_round = 1;        // x
  int rounds_per_direction = 0;   // y; 0 means ceil(log2 L)
  int timeout = 0;                // T; 0 means 32 L
  int timeout_per_direction = 0;  // t; 0 means L
  SweepRule rule;
};

struct CampaignConfig {
  Decoder decoder = Decoder::kMwpm;
  int a = 3;
  int b = 1;
  std::vector<int> levels{0};
  std::vector<int> sizes;
  std::vector<double> ps;
  QSetting q;
  int rounds = 1;  // N
  std::int64_t trials = 0;
  std::uint64_t master_seed = 0;
  SweepSchedule schedule;
};

// Throws SpecError naming the violated invariant.
void validate_config(const CampaignConfig& config);

// lo:hi:step, inclusive of hi up to rounding; values are rounded to 12
// significant digits so the grid prints the same everywhere.
std::vector<double> parse_p_range(const std::string& text);

struct PointKey {
  Decoder decoder = Decoder::kMwpm;
  int a = 3;
  int b = 1;
  int level = 0;
  int size = 0;
  double p = 0.0;
  double q = 0.0;
  int rounds = 1;
};

// Random stream id of a point, so every point draws from its own sequence.
std::uint64_t point_stream(const PointKey& key);

struct PointResult {
  PointKey key;
  std::int64_t trials = 0;
  std::int64_t failures = 0;
  std::uint64_t master_seed = 0;

  double p_L() const { return trials > 0 ? static_cast<double>(failures) / static_cast<double>(trials) : 0.0; }
  double std_error() const;
};

// Half-width of the Wilson score interval at one standard deviation.
double wilson_stderr(std::int64_t failures, std::int64_t trials);

// Immutable per-(level, L) decoding context shared by all worker threads.
class DecoderContext {
 public:
  DecoderContext(Decoder decoder, const FractalSpec& spec);
  DecoderContext(const DecoderContext&) = delete;
  DecoderContext& operator=(const DecoderContext&) = delete;

  Decoder decoder() const noexcept { return decoder_; }
  const Lattice& lattice() const noexcept { return *lattice_; }
  const CheckMatrices& mats() const noexcept { return mats_; }
  const LogicalPair& logicals() const noexcept { return logicals_; }

  TrialResult run_trial(const PointKey& key, const SweepSchedule& schedule, std::uint64_t master_seed,
                        std::uint64_t trial_index) const;

 private:
  Decoder decoder_;
  std::unique_ptr<Lattice> lattice_;
  CheckMatrices mats_;
  LogicalPair logicals_;
  std::unique_ptr<SweepLattice> sweep_;
  std::unique_ptr<MwpmDecoder> mwpm_;
};

// 0 means one worker per hardware thread.
int resolve_threads(int requested);

// Runs `trials` independent trials on `threads` workers. The failure count
// depends only on (key, schedule, seed, trials), never on the thread count.
PointResult run_point(const DecoderContext& context, const PointKey& key, const SweepSchedule& schedule,
                      std::uint64_t master_seed, std::int64_t trials, int threads);

using ProgressFn = std::function<void(const PointResult&)>;

// Every (level, L, p) point of the campaign, in level, size, p order.
std::vector<PointResult> run_campaign(const CampaignConfig& config, int threads, const ProgressFn& progress = {});

// Frozen interchange format with the plotting scripts.
inline constexpr const char* kCsvHeader = "decoder,a,b,level,L,p,q,N,trials,failures,p_L,stderr,master_seed";

// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

void write_csv(std::ostream& out, const std::vector<PointResult>& results);
std::vector<PointResult> read_csv(std::istream& in);

// Threshold at the largest number of rounds, with the raw series attached.
struct SustainableEstimate {
  double p_th = 0.0;
  int rounds = 0;
  std::vector<std::pair<int, double>> series;  // sorted by N
  bool no_limit_info = false;  // only one N available
  bool increasing = false;     // p_th grows with N somewhere, which it should not
};

SustainableEstimate sustainable_estimate(std::vector<std::pair<int, double>> series);

}  // namespace fsc

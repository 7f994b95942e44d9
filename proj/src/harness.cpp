#include "fsc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "fsc/noise.hpp"

namespace fsc {

const char* decoder_name(Decoder decoder) { return decoder == Decoder::kSweep ? "sweep" : "mwpm"; }

Decoder parse_decoder(const std::string& text) {
  if (text == "sweep") return Decoder::kSweep;
  if (text == "mwpm") return Decoder::kMwpm;
  throw SpecError("unknown decoder '" + text + "' (expected sweep or mwpm)");
}

double QSetting::resolve(double p) const {
  switch (rule) {
    case Rule::kEqual:
      return p;
    case Rule::kFixed:
      return value;
    case Rule::kZero:
      break;
  }
  return 0.0;
}

std::string QSetting::describe() const {
  switch (rule) {
    case Rule::kEqual:
      return "equal";
    case Rule::kFixed:
      return format_double(value);
    case Rule::kZero:
      break;
  }
  return "0";
}

QSetting parse_q(const std::string& text) {
  if (text == "equal") return {QSetting::Rule::kEqual, 0.0};
  double value = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw SpecError("cannot read q '" + text + "' (expected equal, 0 or a rate)");
  }
  if (!(value >= 0.0 && value < 1.0)) throw SpecError("invariant 0 <= q < 1 violated: q = " + text);
  if (value == 0.0) return {QSetting::Rule::kZero, 0.0};
  return {QSetting::Rule::kFixed, value};
}

QSetting default_q(Decoder decoder) {
  return decoder == Decoder::kSweep ? QSetting{QSetting::Rule::kEqual, 0.0} : QSetting{QSetting::Rule::kZero, 0.0};
}

void validate_config(const CampaignConfig& config) {
  auto fail = [](const std::string& msg) { throw SpecError(msg); };
  if (config.levels.empty()) fail("invariant at least one level violated: level list is empty");
  if (config.sizes.empty()) fail("invariant at least one size violated: size list is empty");
  if (config.ps.empty()) fail("invariant at least one p violated: p grid is empty");
  if (config.trials < 1) fail("invariant trials >= 1 violated: trials = " + std::to_string(config.trials));
  if (config.rounds < 1) fail("invariant N >= 1 violated: N = " + std::to_string(config.rounds));
  for (std::size_t i = 0; i < config.ps.size(); ++i) {
    double p = config.ps[i];
    if (!(p >= 0.0 && p < 1.0)) fail("invariant 0 <= p < 1 violated: p = " + format_double(p));
    if (i > 0 && !(p > config.ps[i - 1])) {
      fail("invariant p grid strictly increasing violated at p = " + format_double(p));
    }
  }
  if (config.q.rule == QSetting::Rule::kFixed && !(config.q.value >= 0.0 && config.q.value < 1.0)) {
    fail("invariant 0 <= q < 1 violated: q = " + format_double(config.q.value));
  }
  if (config.decoder == Decoder::kMwpm) {
    if (config.rounds != 1) {
      fail("invariant N = 1 for mwpm violated: matching runs at code capacity only, N = " +
           std::to_string(config.rounds));
    }
    for (double p : config.ps) {
      if (config.q.resolve(p) != 0.0) fail("invariant q = 0 for mwpm violated: matching runs at code capacity only");
    }
  }
  const SweepSchedule& s = config.schedule;
  if (s.steps_per_round < 1 || s.rounds_per_direction < 0 || s.timeout < 0 || s.timeout_per_direction < 0) {
    fail("invariant positive sweep schedule violated: x >= 1 and y, T, t >= 0 (0 = default)");
  }
  for (int level : config.levels) {
    for (int size : config.sizes) validate_spec({config.a, config.b, level, size});
  }
}

std::vector<double> parse_p_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ':')) {
    double value = 0.0;
    auto [end, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
    if (ec != std::errc() || end != piece.data() + piece.size()) {
      throw SpecError("cannot read p range '" + text + "' (expected lo:hi:step)");
    }
    parts.push_back(value);
  }
  if (parts.size() != 3) throw SpecError("cannot read p range '" + text + "' (expected lo:hi:step)");
  const double lo = parts[0];
  const double hi = parts[1];
  const double step = parts[2];
  if (!(step > 0.0)) throw SpecError("invariant step > 0 violated in p range '" + text + "'");
  if (!(hi >= lo)) throw SpecError("invariant lo <= hi violated in p range '" + text + "'");
  const auto count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid;
  for (int i = 0; i < count; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", lo + i * step);
    grid.push_back(std::stod(buf));
  }
  return grid;
}

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  // splitmix64 finaliser over a running combination
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

}  // namespace

std::uint64_t point_stream(const PointKey& key) {
  std::uint64_t h = 0x66736370ULL;
  h = mix(h, static_cast<std::uint64_t>(key.decoder));
  h = mix(h, static_cast<std::uint64_t>(key.a));
  h = mix(h, static_cast<std::uint64_t>(key.b));
  h = mix(h, static_cast<std::uint64_t>(key.level));
  h = mix(h, static_cast<std::uint64_t>(key.size));
  h = mix(h, std::bit_cast<std::uint64_t>(key.p));
  h = mix(h, std::bit_cast<std::uint64_t>(key.q));
  h = mix(h, static_cast<std::uint64_t>(key.rounds));
  return h;
}

double wilson_stderr(std::int64_t failures, std::int64_t trials) {
  if (trials <= 0) return 0.0;
  const double n = static_cast<double>(trials);
  const double k = static_cast<double>(failures);
  const double z2 = 1.0;
  return std::sqrt(k * (n - k) / n + z2 / 4.0) / (n + z2);
}

double PointResult::std_error() const { return wilson_stderr(failures, trials); }

DecoderContext::DecoderContext(Decoder decoder, const FractalSpec& spec)
    : decoder_(decoder), lattice_(std::make_unique<Lattice>(build_fractal_lattice(spec))) {
  if (decoder_ == Decoder::kSweep) {
    mats_ = stabilizer_matrices(*lattice_);
    logicals_ = logical_representatives(*lattice_);
    sweep_ = std::make_unique<SweepLattice>(*lattice_);
  } else {
    mwpm_ = std::make_unique<MwpmDecoder>(*lattice_);
    mats_ = mwpm_->mats();
    logicals_ = mwpm_->logicals();
  }
}

TrialResult DecoderContext::run_trial(const PointKey& key, const SweepSchedule& schedule, std::uint64_t master_seed,
                                      std::uint64_t trial_index) const {
  Engine engine = TrialRng{master_seed, trial_index, point_stream(key)}.engine();
  if (decoder_ == Decoder::kMwpm) return decode_mwpm(*mwpm_, key.p, engine);
  SweepParams params;
  params.p = key.p;
  params.q = key.q;
  params.rounds = key.rounds;
  params.x = schedule.steps_per_round;
  params.y = schedule.rounds_per_direction;
  params.timeout = schedule.timeout;
  params.t = schedule.timeout_per_direction;
  params.rule = schedule.rule;
  return decode_sweep(*sweep_, mats_, logicals_, params, engine);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

PointResult run_point(const DecoderContext& context, const PointKey& key, const SweepSchedule& schedule,
                      std::uint64_t master_seed, std::int64_t trials, int threads) {
  constexpr std::int64_t kChunk = 32;
  std::atomic<std::int64_t> next{0};
  std::atomic<std::int64_t> failures{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    std::int64_t local = 0;
    try {
      while (true) {
        std::int64_t begin = next.fetch_add(kChunk);
        if (begin >= trials) break;
        std::int64_t end = std::min(trials, begin + kChunk);
        for (std::int64_t i = begin; i < end; ++i) {
          local += context.run_trial(key, schedule, master_seed, static_cast<std::uint64_t>(i)).failed ? 1 : 0;
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      next.store(trials);
    }
    failures.fetch_add(local);
  };

  const int workers = static_cast<int>(std::min<std::int64_t>(resolve_threads(threads), (trials + kChunk - 1) / kChunk));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  PointResult result;
  result.key = key;
  result.trials = trials;
  result.failures = failures.load();
  result.master_seed = master_seed;
  return result;
}

std::vector<PointResult> run_campaign(const CampaignConfig& config, int threads, const ProgressFn& progress) {
  validate_config(config);
  std::vector<PointResult> results;
  for (int level : config.levels) {
    for (int size : config.sizes) {
      DecoderContext context(config.decoder, {config.a, config.b, level, size});
      for (double p : config.ps) {
        PointKey key{config.decoder, config.a, config.b, level, size, p, config.q.resolve(p), config.rounds};
        results.push_back(run_point(context, key, config.schedule, config.master_seed, config.trials, threads));
        if (progress) progress(results.back());
      }
    }
  }
  return results;
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("cannot format a double");
  return std::string(buf, end);
}

void write_csv(std::ostream& out, const std::vector<PointResult>& results) {
  out << kCsvHeader << '\n';
  for (const PointResult& r : results) {
    out << decoder_name(r.key.decoder) << ',' << r.key.a << ',' << r.key.b << ',' << r.key.level << ',' << r.key.size
        << ',' << format_double(r.key.p) << ',' << format_double(r.key.q) << ',' << r.key.rounds << ',' << r.trials
        << ',' << r.failures << ',' << format_double(r.p_L()) << ',' << format_double(r.std_error()) << ','
        << r.master_seed << '\n';
  }
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <typename T>
T parse_field(const std::string& text, const std::string& column, int line) {
  T value{};
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad value '" + text + "' in column " + column);
  }
  return value;
}

}  // namespace

std::vector<PointResult> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv is empty: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> expected = split_fields(kCsvHeader);
  const std::vector<std::string> header = split_fields(line);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i >= header.size() || header[i] != expected[i]) {
      throw std::runtime_error("csv header: expected column '" + expected[i] + "' at position " + std::to_string(i));
    }
  }
  if (header.size() != expected.size()) throw std::runtime_error("csv header: unexpected extra columns");

  std::vector<PointResult> results;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f = split_fields(line);
    if (f.size() != expected.size()) {
      throw std::runtime_error("csv line " + std::to_string(number) + ": expected " +
                               std::to_string(expected.size()) + " fields, got " + std::to_string(f.size()));
    }
    PointResult r;
    r.key.decoder = parse_decoder(f[0]);
    r.key.a = parse_field<int>(f[1], "a", number);
    r.key.b = parse_field<int>(f[2], "b", number);
    r.key.level = parse_field<int>(f[3], "level", number);
    r.key.size = parse_field<int>(f[4], "L", number);
    r.key.p = parse_field<double>(f[5], "p", number);
    r.key.q = parse_field<double>(f[6], "q", number);
    r.key.rounds = parse_field<int>(f[7], "N", number);
    r.trials = parse_field<std::int64_t>(f[8], "trials", number);
    r.failures = parse_field<std::int64_t>(f[9], "failures", number);
    r.master_seed = parse_field<std::uint64_t>(f[12], "master_seed", number);
    if (r.failures < 0 || r.failures > r.trials) {
      throw std::runtime_error("csv line " + std::to_string(number) + ": failures outside [0, trials]");
    }
    results.push_back(r);
  }
  return results;
}

SustainableEstimate sustainable_estimate(std::vector<std::pair<int, double>> series) {
  if (series.empty()) throw std::invalid_argument("sustainable estimate needs at least one (N, p_th) pair");
  std::sort(series.begin(), series.end());
  SustainableEstimate out;
  out.series = series;
  out.rounds = series.back().first;
  out.p_th = series.back().second;
  bool distinct = false;
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (series[i].first != series[i - 1].first) distinct = true;
    if (series[i].first > series[i - 1].first && series[i].second > series[i - 1].second) out.increasing = true;
  }
  out.no_limit_info = !distinct;
  return out;
}

}  // namespace fsc

// fsc: command-line front end for lattice construction, code reports,
// decoding runs, threshold campaigns and the self test.
//
// Exit status: 0 on success, 2 for configuration errors (bad flags or a spec
// that violates an invariant), 1 for failures at run time.

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fsc/code.hpp"
#include "fsc/fit.hpp"
#include "fsc/harness.hpp"
#include "fsc/lattice.hpp"
#include "fsc/lattice_io.hpp"
#include "fsc/manifest.hpp"
#include "selftest.hpp"

namespace {

using fsc::SpecError;

struct SpecFlags {
  int a = 3;
  int b = 1;
  int level = 0;
  int size = 3;

  fsc::FractalSpec spec() const { return {a, b, level, size}; }
};

void add_spec_flags(CLI::App* cmd, SpecFlags& f, bool with_level_and_size) {
  cmd->add_option("--a", f.a, "subdivision factor a")->capture_default_str();
  cmd->add_option("--b", f.b, "hole factor b")->capture_default_str();
  if (with_level_and_size) {
    cmd->add_option("--level", f.level, "fractal level")->capture_default_str();
    cmd->add_option("--size", f.size, "linear size L")->capture_default_str();
  }
}

struct DecodeFlags {
  std::string decoder = "mwpm";
  std::string q;  // empty: decoder default
  int rounds = 1;
  std::int64_t trials = 1000;
  std::string seed;  // empty: FSC_SEED, then 1
  std::string out;
  int steps_per_round = 1;
  int rounds_per_direction = 0;
  int timeout = 0;
  int timeout_per_direction = 0;
  bool unmodified_rule = false;
  bool persistent_overlay = false;
};

void add_decode_flags(CLI::App* cmd, DecodeFlags& f) {
  cmd->add_option("--decoder", f.decoder, "sweep or mwpm")->capture_default_str();
  cmd->add_option("--q", f.q, "measurement error rate: equal, 0 or a value (default: equal for sweep, 0 for mwpm)");
  cmd->add_option("--rounds", f.rounds, "syndrome rounds N")->capture_default_str();
  cmd->add_option("--trials", f.trials, "trials per point")->capture_default_str();
  cmd->add_option("--seed", f.seed, "master seed (default: $FSC_SEED, else 1)");
  cmd->add_option("--out", f.out, "output CSV")->required();
  cmd->add_option("--steps-per-round", f.steps_per_round, "sweep steps per noisy round (x)")->capture_default_str();
  cmd->add_option("--rounds-per-direction", f.rounds_per_direction, "rounds between direction changes (y, 0 = ceil log2 L)")
      ->capture_default_str();
  cmd->add_option("--timeout", f.timeout, "timeout steps (T, 0 = 32 L)")->capture_default_str();
  cmd->add_option("--timeout-per-direction", f.timeout_per_direction, "timeout steps per direction (t, 0 = L)")
      ->capture_default_str();
  cmd->add_flag("--unmodified-rule", f.unmodified_rule, "disable the hole-boundary sweep rule (test mode)");
  cmd->add_flag("--persistent-overlay", f.persistent_overlay, "keep imaginary syndromes between sweep steps");
}

std::uint64_t parse_seed(const std::string& text, const char* source) {
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw SpecError(std::string("cannot read master seed '") + text + "' from " + source);
  }
  return value;
}

std::uint64_t resolve_seed(const std::string& flag) {
  if (!flag.empty()) return parse_seed(flag, "--seed");
  if (const char* env = std::getenv("FSC_SEED"); env != nullptr && *env != '\0') return parse_seed(env, "FSC_SEED");
  return 1;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* name) {
  std::vector<T> out;
  std::stringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ',')) {
    T value{};
    auto [end, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
    if (ec != std::errc() || end != piece.data() + piece.size()) {
      throw SpecError(std::string("cannot read --") + name + " '" + text + "' (expected a comma-separated list)");
    }
    out.push_back(value);
  }
  if (out.empty()) throw SpecError(std::string("--") + name + " is empty");
  return out;
}

std::string join(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + std::to_string(values[i]);
  return out;
}

fsc::CampaignConfig campaign_from(const DecodeFlags& f, const SpecFlags& s) {
  fsc::CampaignConfig c;
  c.decoder = fsc::parse_decoder(f.decoder);
  c.a = s.a;
  c.b = s.b;
  c.q = f.q.empty() ? fsc::default_q(c.decoder) : fsc::parse_q(f.q);
  c.rounds = f.rounds;
  c.trials = f.trials;
  c.master_seed = resolve_seed(f.seed);
  c.schedule.steps_per_round = f.steps_per_round;
  c.schedule.rounds_per_direction = f.rounds_per_direction;
  c.schedule.timeout = f.timeout;
  c.schedule.timeout_per_direction = f.timeout_per_direction;
  c.schedule.rule.hole_extension = !f.unmodified_rule;
  c.schedule.rule.persistent_overlay = f.persistent_overlay;
  return c;
}

// Resolved options, keyed by long flag name, for the manifest.
nlohmann::json decode_config(const fsc::CampaignConfig& c, const DecodeFlags& f) {
  nlohmann::json j;
  j["decoder"] = fsc::decoder_name(c.decoder);
  j["a"] = c.a;
  j["b"] = c.b;
  j["q"] = c.q.describe();
  j["rounds"] = c.rounds;
  j["trials"] = c.trials;
  j["seed"] = std::to_string(c.master_seed);
  j["out"] = f.out;
  j["steps-per-round"] = f.steps_per_round;
  j["rounds-per-direction"] = f.rounds_per_direction;
  j["timeout"] = f.timeout;
  j["timeout-per-direction"] = f.timeout_per_direction;
  j["unmodified-rule"] = f.unmodified_rule;
  j["persistent-overlay"] = f.persistent_overlay;
  return j;
}

// How the sweep resolves choices the rule leaves open.
nlohmann::json decode_notes(const fsc::CampaignConfig& c) {
  if (c.decoder != fsc::Decoder::kSweep) return nlohmann::json::object();
  return {{"sweep_choice", "random: with three marked future edges, one of the three pairs is flipped, chosen uniformly"},
          {"imaginary_syndromes", c.schedule.rule.persistent_overlay ? "persistent" : "cleared after each step"},
          {"noisy_rounds", "imaginary syndromes cleared before every new measurement"},
          {"timeout_syndrome", "updated incrementally from one perfect measurement"}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

void finish_manifest(fsc::RunManifest& m, const std::vector<std::string>& outputs) {
  m.finished = fsc::utc_timestamp();
  for (const std::string& path : outputs) m.outputs.push_back({path, fsc::sha256_file(path)});
  fsc::write_manifest(fsc::manifest_path_for(outputs.front()), m);
}

void report_progress(const fsc::PointResult& r) {
  std::cerr << fsc::decoder_name(r.key.decoder) << " level=" << r.key.level << " L=" << r.key.size
            << " p=" << fsc::format_double(r.key.p) << " N=" << r.key.rounds << ": " << r.failures << "/" << r.trials
            << " failed\n";
}

// --config FILE is spliced in right after the subcommand, so explicit flags,
// which come later, win under the take-last policy.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::vector<std::string> rest;
  std::string config;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw SpecError("--config needs a file name");
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  std::vector<std::string> out{args[0]};
  if (config.empty()) {
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
  }
  auto sub = std::find_if(rest.begin(), rest.end(), [](const std::string& a) {
    return a == "lattice" || a == "code" || a == "run" || a == "threshold" || a == "selftest";
  });
  if (sub == rest.end()) throw SpecError("--config needs a subcommand");
  out.insert(out.end(), rest.begin(), sub + 1);
  for (const std::string& a : fsc::config_to_args(fsc::load_config(config))) out.push_back(a);
  out.insert(out.end(), sub + 1, rest.end());
  return out;
}

int run(int argc, char** argv) {
  std::vector<std::string> args = expand_config(argc, argv);
  std::vector<char*> cargs;
  for (std::string& a : args) cargs.push_back(a.data());

  CLI::App app{"Fractal surface codes: lattices, sweep and matching decoders, threshold campaigns"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  // Lets --threads appear after the subcommand too.
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = all cores)");

  SpecFlags lattice_spec;
  std::string lattice_out;
  auto* lattice_cmd = app.add_subcommand("lattice", "build FC(a,b,level) at size L and write it as JSON");
  add_spec_flags(lattice_cmd, lattice_spec, true);
  lattice_cmd->add_option("--out", lattice_out, "output JSON")->required();

  SpecFlags code_spec;
  std::string code_lattice;
  bool code_report = false;
  auto* code_cmd = app.add_subcommand("code", "print k, d_Z, d_X and hole-counting checks for a lattice");
  add_spec_flags(code_cmd, code_spec, true);
  code_cmd->add_option("--lattice", code_lattice, "lattice JSON (default: build from --a/--b/--level/--size)");
  code_cmd->add_flag("--report", code_report, "include the validation and hole-counting reports");

  SpecFlags run_spec;
  DecodeFlags run_flags;
  double run_p = 0.0;
  auto* run_cmd = app.add_subcommand("run", "decode one (level, L, p) point");
  add_spec_flags(run_cmd, run_spec, true);
  add_decode_flags(run_cmd, run_flags);
  run_cmd->add_option("--p", run_p, "physical error rate")->required();

  SpecFlags th_spec;
  DecodeFlags th_flags;
  std::string th_levels = "0";
  std::string th_sizes;
  std::string th_range;
  std::string th_fit;
  fsc::FitOptions fit_options;
  auto* th_cmd = app.add_subcommand("threshold", "run a campaign over levels, sizes and a p grid, then fit");
  add_spec_flags(th_cmd, th_spec, false);
  add_decode_flags(th_cmd, th_flags);
  th_cmd->add_option("--levels", th_levels, "comma-separated levels")->capture_default_str();
  th_cmd->add_option("--sizes", th_sizes, "comma-separated sizes L")->required();
  th_cmd->add_option("--p-range", th_range, "lo:hi:step")->required();
  th_cmd->add_option("--fit", th_fit, "write the threshold fit here");
  th_cmd->add_option("--window", fit_options.window, "p values nearest the crossing used by the fit")
      ->capture_default_str();
  th_cmd->add_option("--bootstrap", fit_options.bootstrap, "bootstrap resamples")->capture_default_str();

  auto* self_cmd = app.add_subcommand("selftest", "run the structural and decoder invariant checks");

  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*lattice_cmd) {
    fsc::RunManifest m;
    m.command = "lattice";
    m.started = fsc::utc_timestamp();
    fsc::Lattice lattice = fsc::build_fractal_lattice(lattice_spec.spec());
    fsc::save_lattice(lattice, lattice_out);
    m.config = {{"a", lattice_spec.a}, {"b", lattice_spec.b}, {"level", lattice_spec.level},
                {"size", lattice_spec.size}, {"out", lattice_out}};
    finish_manifest(m, {lattice_out});
    std::cout << "wrote " << lattice_out << ": " << lattice.num_qubits() << " qubits, " << lattice.holes().size()
              << " holes\n";
    return 0;
  }

  if (*code_cmd) {
    fsc::Lattice lattice = code_lattice.empty() ? fsc::build_fractal_lattice(code_spec.spec())
                                                : fsc::load_lattice(code_lattice);
    fsc::CheckMatrices mats = fsc::stabilizer_matrices(lattice);
    nlohmann::json doc;
    const fsc::FractalSpec& s = lattice.spec();
    doc["spec"] = {{"a", s.a}, {"b", s.b}, {"level", s.level}, {"size", s.size}};
    doc["n"] = mats.num_qubits;
    doc["k"] = fsc::count_logical_qubits(mats);
    doc["d_Z"] = fsc::min_logical_weight(lattice, fsc::Pauli::kZ);
    doc["d_X"] = fsc::min_logical_weight(lattice, fsc::Pauli::kX);
    if (code_report) {
      fsc::ValidationReport lat = fsc::validate(lattice);
      fsc::ValidationReport css = fsc::validate(mats);
      doc["validation"] = lat.violations;
      doc["checks"] = css.violations;
      doc["counting"] = nlohmann::json::array();
      if (s.level == 0) {
        for (int h : {2, 3}) {
          if (h + 2 > s.size - 1) continue;
          fsc::CountingReport r = fsc::verify_hole_counting(lattice, mats, h);
          nlohmann::json entry{{"h", h}, {"ok", r.ok()}, {"k_before", r.k_before}, {"k_after", r.k_after}};
          for (const auto& d : r.deltas) entry[d.name] = {{"expected", d.expected}, {"actual", d.actual}};
          doc["counting"].push_back(entry);
        }
      }
    }
    std::cout << doc.dump(2) << '\n';
    return 0;
  }

  if (*run_cmd) {
    fsc::CampaignConfig c = campaign_from(run_flags, run_spec);
    c.levels = {run_spec.level};
    c.sizes = {run_spec.size};
    c.ps = {run_p};
    fsc::RunManifest m;
    m.command = "run";
    m.started = fsc::utc_timestamp();
    m.master_seed = c.master_seed;
    m.config = decode_config(c, run_flags);
    m.notes = decode_notes(c);
    m.config["level"] = run_spec.level;
    m.config["size"] = run_spec.size;
    m.config["p"] = run_p;
    std::vector<fsc::PointResult> results = fsc::run_campaign(c, threads, report_progress);
    std::ostringstream csv;
    fsc::write_csv(csv, results);
    write_text(run_flags.out, csv.str());
    finish_manifest(m, {run_flags.out});
    const fsc::PointResult& r = results.front();
    std::cout << "p_L = " << fsc::format_double(r.p_L()) << " +- " << fsc::format_double(r.std_error()) << " ("
              << r.failures << "/" << r.trials << ")\n";
    return 0;
  }

  if (*th_cmd) {
    fsc::CampaignConfig c = campaign_from(th_flags, th_spec);
    c.levels = parse_list<int>(th_levels, "levels");
    c.sizes = parse_list<int>(th_sizes, "sizes");
    c.ps = fsc::parse_p_range(th_range);
    fsc::validate_config(c);
    if (!th_fit.empty()) {
      if (c.sizes.size() < 3) throw SpecError("invariant >= 3 sizes for --fit violated: got " + th_sizes);
      if (c.ps.size() < 5) throw SpecError("invariant >= 5 p values for --fit violated: got " + th_range);
    }
    fsc::RunManifest m;
    m.command = "threshold";
    m.started = fsc::utc_timestamp();
    m.master_seed = c.master_seed;
    m.config = decode_config(c, th_flags);
    m.notes = decode_notes(c);
    m.config["levels"] = join(c.levels);
    m.config["sizes"] = join(c.sizes);
    m.config["p-range"] = th_range;
    if (!th_fit.empty()) {
      m.config["fit"] = th_fit;
      m.config["window"] = fit_options.window;
      m.config["bootstrap"] = fit_options.bootstrap;
    }
    fit_options.seed = c.master_seed;
    std::vector<fsc::PointResult> results = fsc::run_campaign(c, threads, report_progress);
    std::ostringstream csv;
    fsc::write_csv(csv, results);
    write_text(th_flags.out, csv.str());
    std::vector<std::string> outputs{th_flags.out};
    if (!th_fit.empty()) {
      nlohmann::json fits = nlohmann::json::array();
      for (int level : c.levels) {
        std::vector<fsc::PointResult> subset;
        for (const auto& r : results) {
          if (r.key.level == level) subset.push_back(r);
        }
        fsc::ThresholdEstimate est = fsc::fit_threshold(fsc::fit_points(subset), fit_options);
        nlohmann::json entry = fsc::to_json(est);
        entry["decoder"] = fsc::decoder_name(c.decoder);
        entry["level"] = level;
        entry["rounds"] = c.rounds;
        std::cout << "level " << level << ": " << fsc::status_name(est.status);
        if (est.ok()) {
          std::cout << ", p_th = " << est.p_th << " +- " << est.p_th_err << ", nu = " << est.nu << " +- " << est.nu_err;
        } else if (!est.message.empty()) {
          std::cout << " (" << est.message << ")";
        }
        std::cout << '\n';
        fits.push_back(entry);
      }
      write_text(th_fit, (fits.size() == 1 ? fits[0] : fits).dump(2) + "\n");
      outputs.push_back(th_fit);
    }
    finish_manifest(m, outputs);
    return 0;
  }

  if (*self_cmd) {
    int failed = fsc::run_selftest(std::cout);
    std::cout << (failed == 0 ? "selftest passed\n" : std::to_string(failed) + " selftest check(s) failed\n");
    return failed == 0 ? 0 : 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

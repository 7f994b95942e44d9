#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace fsc {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kManifestSchema = "fsc.manifest/1";

struct OutputDigest {
  std::string path;
  std::string sha256;
};

// Everything needed to trace an output file back to the run that wrote it.
// `config` holds the resolved command-line options keyed by long flag name,
// so the manifest can be fed back through --config to repeat the run.
struct RunManifest {
  std::string tool_version = kToolVersion;
  std::string command;
  std::string started;
  std::string finished;
  std::uint64_t master_seed = 0;
  nlohmann::json config = nlohmann::json::object();
  // Descriptive facts about the run that are not options, such as how the
  // sweep breaks ties. Never read back as configuration.
  nlohmann::json notes = nlohmann::json::object();
  std::vector<OutputDigest> outputs;
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

// ISO 8601, UTC, second resolution.
std::string utc_timestamp();

nlohmann::json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& doc);

void write_manifest(const std::string& path, const RunManifest& manifest);
RunManifest read_manifest(const std::string& path);

// "<output>.manifest.json"
std::string manifest_path_for(const std::string& output);

// Reads a config file: either a flat object of options or a manifest, in
// which case its "config" object is used.
nlohmann::json load_config(const std::string& path);

// {"size": 6, "sizes": [6, 9]} -> {"--size", "6", "--sizes", "6,9"}. True
// booleans become bare flags and false ones are dropped.
std::vector<std::string> config_to_args(const nlohmann::json& config);

}  // namespace fsc

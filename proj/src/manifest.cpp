#include "fsc/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "fsc/harness.hpp"

namespace fsc {

namespace {

std::string to_hex(const unsigned char* data, unsigned int size) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * size);
  for (unsigned int i = 0; i < size; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 0xF]);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &size, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 digest failed");
  }
  return to_hex(digest, size);
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_file(path)); }

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json doc;
  doc["schema"] = kManifestSchema;
  doc["tool_version"] = m.tool_version;
  doc["command"] = m.command;
  doc["started"] = m.started;
  doc["finished"] = m.finished;
  doc["master_seed"] = m.master_seed;
  doc["config"] = m.config;
  doc["notes"] = m.notes;
  doc["outputs"] = nlohmann::json::array();
  for (const OutputDigest& o : m.outputs) doc["outputs"].push_back({{"path", o.path}, {"sha256", o.sha256}});
  return doc;
}

RunManifest manifest_from_json(const nlohmann::json& doc) {
  if (doc.value("schema", std::string()) != kManifestSchema) {
    throw std::runtime_error(std::string("manifest: expected schema ") + kManifestSchema);
  }
  RunManifest m;
  m.tool_version = doc.at("tool_version").get<std::string>();
  m.command = doc.at("command").get<std::string>();
  m.started = doc.at("started").get<std::string>();
  m.finished = doc.at("finished").get<std::string>();
  m.master_seed = doc.at("master_seed").get<std::uint64_t>();
  m.config = doc.at("config");
  m.notes = doc.value("notes", nlohmann::json::object());
  for (const auto& o : doc.at("outputs")) {
    m.outputs.push_back({o.at("path").get<std::string>(), o.at("sha256").get<std::string>()});
  }
  return m;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_json(manifest).dump(2) << '\n';
}

RunManifest read_manifest(const std::string& path) { return manifest_from_json(nlohmann::json::parse(read_file(path))); }

std::string manifest_path_for(const std::string& output) { return output + ".manifest.json"; }

nlohmann::json load_config(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError("config " + path + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw SpecError("config " + path + " must hold a JSON object");
  if (doc.contains("schema") && doc["schema"] == kManifestSchema) return doc.at("config");
  return doc;
}

std::vector<std::string> config_to_args(const nlohmann::json& config) {
  auto scalar = [](const nlohmann::json& v, const std::string& key) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return v.dump();
    if (v.is_number_float()) return format_double(v.get<double>());
    throw SpecError("config key '" + key + "' holds an unsupported value " + v.dump());
  };
  std::vector<std::string> args;
  for (const auto& [key, value] : config.items()) {
    if (value.is_null()) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back("--" + key);
      continue;
    }
    std::string text;
    if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i) text += (i ? "," : "") + scalar(value[i], key);
    } else {
      text = scalar(value, key);
    }
    args.push_back("--" + key);
    args.push_back(text);
  }
  return args;
}

}  // namespace fsc

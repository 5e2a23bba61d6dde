#include "burstsim/config.hpp"

#include <fstream>
#include <regex>
#include <set>

#include <json.hpp>

#include "burstsim/errors.hpp"

namespace burstsim {

namespace {

using nlohmann::json;

DeviceProfile parse_profile(const json& j, const std::string& name) {
  if (!j.is_object()) throw ConfigError(name + " must be an object");
  static const std::set<std::string> keys = {"seq_bw", "seek_base",
                                             "seek_per_byte",
                                             "per_req_overhead"};
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) throw ConfigError("unknown key " + name + "." + k);
  for (const auto& k : keys)
    if (!j.contains(k)) throw ConfigError("missing key " + name + "." + k);
  DeviceProfile p;
  p.seq_bw = j.at("seq_bw").get<double>();
  p.seek_base = j.at("seek_base").get<double>();
  p.seek_per_byte = j.at("seek_per_byte").get<double>();
  p.per_req_overhead = j.at("per_req_overhead").get<double>();
  return p;
}

json profile_json(const DeviceProfile& p) {
  return json{{"seq_bw", p.seq_bw},
              {"seek_base", p.seek_base},
              {"seek_per_byte", p.seek_per_byte},
              {"per_req_overhead", p.per_req_overhead}};
}

}  // namespace

void SimConfig::validate() const {
  if (hdd.seq_bw <= 0 || ssd.seq_bw <= 0)
    throw ConfigError("device seq_bw must be positive");
  if (hdd.seek_base < 0 || hdd.seek_per_byte < 0 || hdd.per_req_overhead < 0 ||
      ssd.seek_base < 0 || ssd.seek_per_byte < 0 || ssd.per_req_overhead < 0)
    throw ConfigError("device cost fields must be non-negative");
  if (ssd.seek_base != 0 || ssd.seek_per_byte != 0)
    throw ConfigError("ssd profile must have zero seek cost");
  if (window_w < 2) throw ConfigError("window_W must be at least 2");
  if (percent_list_capacity < 1)
    throw ConfigError("percent_list_capacity must be positive");
  if (default_threshold < 0 || default_threshold > 1)
    throw ConfigError("default_threshold outside [0,1]");
  if (region_bytes == 0) throw ConfigError("region_bytes must be positive");
  if (gate_check_interval_s <= 0)
    throw ConfigError("gate_check_interval_s must be positive");
  if (cfq_q < 1) throw ConfigError("cfq_Q must be at least 1");
  if (static_high < 0 || static_high > 1 || static_low < 0 || static_low > 1)
    throw ConfigError("water marks outside [0,1]");
  if (static_low > static_high)
    throw ConfigError("static_low must not exceed static_high");
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse failure: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("config root must be an object");

  static const std::set<std::string> keys = {
      "devices",          "window_W",   "percent_list_capacity",
      "default_threshold", "region_bytes", "gate_check_interval_s",
      "cfq_Q",            "static_high", "static_low",
      "seed"};
  std::string bad;
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) bad += (bad.empty() ? "" : ", ") + k;
  if (!bad.empty()) throw ConfigError("unknown config keys: " + bad);
  for (const auto& k : keys)
    if (!j.contains(k)) bad += (bad.empty() ? "" : ", ") + k;
  if (!bad.empty()) throw ConfigError("missing config keys: " + bad);

  const json& dev = j.at("devices");
  if (!dev.is_object()) throw ConfigError("devices must be an object");
  for (const auto& [k, v] : dev.items())
    if (k != "hdd" && k != "ssd")
      throw ConfigError("unknown key devices." + k);
  if (!dev.contains("hdd") || !dev.contains("ssd"))
    throw ConfigError("devices must define hdd and ssd");

  SimConfig cfg;
  cfg.hdd = parse_profile(dev.at("hdd"), "devices.hdd");
  cfg.ssd = parse_profile(dev.at("ssd"), "devices.ssd");
  cfg.window_w = j.at("window_W").get<uint32_t>();
  cfg.percent_list_capacity = j.at("percent_list_capacity").get<uint32_t>();
  cfg.default_threshold = j.at("default_threshold").get<double>();
  cfg.region_bytes = j.at("region_bytes").get<uint64_t>();
  cfg.gate_check_interval_s = j.at("gate_check_interval_s").get<double>();
  cfg.cfq_q = j.at("cfq_Q").get<uint32_t>();
  cfg.static_high = j.at("static_high").get<double>();
  cfg.static_low = j.at("static_low").get<double>();
  cfg.seed = j.at("seed").get<uint64_t>();
  cfg.validate();
  return cfg;
}

void save_config(const SimConfig& cfg, const std::filesystem::path& path) {
  json j{{"devices",
          json{{"hdd", profile_json(cfg.hdd)}, {"ssd", profile_json(cfg.ssd)}}},
         {"window_W", cfg.window_w},
         {"percent_list_capacity", cfg.percent_list_capacity},
         {"default_threshold", cfg.default_threshold},
         {"region_bytes", cfg.region_bytes},
         {"gate_check_interval_s", cfg.gate_check_interval_s},
         {"cfq_Q", cfg.cfq_q},
         {"static_high", cfg.static_high},
         {"static_low", cfg.static_low},
         {"seed", cfg.seed}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write config " + path.string());
  out << j.dump(2) << '\n';
}

uint64_t parse_size(const std::string& text) {
  static const std::regex pat(R"(^(\d+)\s*(KiB|MiB|GiB)?$)");
  std::smatch m;
  if (!std::regex_match(text, m, pat))
    throw ConfigError("bad size '" + text + "', expected N[KiB|MiB|GiB]");
  uint64_t v = std::stoull(m[1].str());
  if (m[2].matched) {
    const std::string unit = m[2].str();
    const uint64_t mult = unit == "KiB"   ? 1024ull
                          : unit == "MiB" ? 1024ull * 1024
                                          : 1024ull * 1024 * 1024;
    v *= mult;
  }
  return v;
}

}  // namespace burstsim

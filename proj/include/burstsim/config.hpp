// Simulation configuration: device profiles and scheduler knobs. The JSON
// schema is closed; a config file must carry every key and nothing else.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "burstsim/devices.hpp"

namespace burstsim {

struct SimConfig {
  DeviceProfile hdd{272629760.0, 0.0016, 1.0e-13, 1.0e-4};  // 260 MiB/s disk
  DeviceProfile ssd{230686720.0, 0.0, 0.0, 2.0e-5};         // 220 MiB/s flash
  uint32_t window_w = 128;
  uint32_t percent_list_capacity = 10;
  double default_threshold = 0.5;
  uint64_t region_bytes = 4ull << 30;
  double gate_check_interval_s = 0.1;
  uint32_t cfq_q = 128;
  double static_high = 0.45;  // fixed water marks for the static policy
  double static_low = 0.30;
  uint64_t seed = 42;

  void validate() const;  // throws ConfigError on out-of-range values
};

SimConfig load_config(const std::filesystem::path& path);
void save_config(const SimConfig& cfg, const std::filesystem::path& path);

// Accepts plain byte counts and KiB/MiB/GiB suffixes, e.g. "256KiB".
uint64_t parse_size(const std::string& text);

}  // namespace burstsim

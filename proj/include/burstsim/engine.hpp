// Discrete simulation of a write burst through the staging pipeline, plus
// closed-form stage-model predictions for uniform workloads.
//
// Time advances with the producer: direct HDD writes and buffer fills are
// charged to the clock, flushing runs on the side. While the producer writes
// into the buffer the drain target is idle, so flush work overlaps for free;
// while the producer writes straight to the HDD an unpaused flusher shares
// the head and its transfers extend the clock organically. A full buffer
// stalls the producer until a region drains. The reported total excludes
// configured idle gaps and whatever drain survives the last produced byte.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "burstsim/config.hpp"
#include "burstsim/redirector.hpp"
#include "burstsim/trace.hpp"

namespace burstsim {

enum class PolicyMode {
  kHddOnly,     // no buffer, every window straight to the HDD
  kFullBuffer,  // one whole-SSD region, flush only when it fills
  kStaticMarks, // two regions, fixed high/low water marks pick the target
  kAdaptive,    // two regions, percent-list threshold and traffic-aware gate
};

PolicyMode parse_mode(const std::string& name);   // CLI spellings
std::string mode_name(PolicyMode mode);

struct Phase {
  Trace trace;
  double gap_before_s = 0;  // idle time before the phase starts
};

struct DecisionRow {
  uint32_t stream_idx = 0;
  double percentage = 0;
  double threshold = 0;   // threshold the decision was taken against
  Device target = Device::kHdd;  // device chosen for the next stream
};

struct Metrics {
  double total_time_s = 0;      // producer busy time
  double throughput_mbps = 0;   // payload MB/s over total_time_s
  double ssd_fraction = 0;      // bytes staged via SSD / total bytes
  double flush_pause_s = 0;     // time the gate held a pending flush
  double stall_s = 0;           // producer time lost waiting for a region
  uint32_t pause_episodes = 0;  // distinct gate-closed spans with work pending
  double drain_s = 0;           // flush time left after the last produced byte
  uint64_t bytes_total = 0;
  uint64_t bytes_to_ssd = 0;
  uint64_t bytes_direct_hdd = 0;
  uint64_t bytes_flushed = 0;
};

struct SimResult {
  Metrics metrics;
  std::vector<DecisionRow> decisions;  // adaptive and static modes only
};

SimResult simulate(const std::vector<Phase>& phases, PolicyMode mode,
                   const SimConfig& cfg);
SimResult simulate(const Trace& trace, PolicyMode mode, const SimConfig& cfg);

// Stage-model predictions for n uniform stages of which m fit in the buffer.
// Without pipelining the overflow goes straight to the HDD; with it, every
// drained region is refilled concurrently, so each overflow stage costs the
// slower of one drain and one fill.
struct PipelineParams {
  uint32_t n = 0;            // stages total
  uint32_t m = 0;            // stages fitting in the whole buffer, m < n
  double t_ssd = 0;          // per-stage buffer fill time
  double t_hdd = 0;          // per-stage direct HDD time
  double t_f = 0;            // per-stage drain time
  double t_b = 0;            // per-stage backend fill, must equal t_ssd
  double t_f_interfered = 0; // drain time when fills disturb the drain

  void validate() const;  // throws std::invalid_argument
};

double predict_no_pipeline(const PipelineParams& p);
double predict_pipeline(const PipelineParams& p, bool interfered = false);

void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<std::pair<PolicyMode, Metrics>>& rows);
void write_decisions_csv(const std::filesystem::path& path,
                         const std::vector<DecisionRow>& rows);

}  // namespace burstsim

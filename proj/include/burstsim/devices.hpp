// Parametric device cost model with a single head position per device.
// A transfer costs per-request overhead plus size over sequential bandwidth,
// plus a seek term when the head has to move. Batched service sorts a queue
// window by offset and merges exactly adjacent transfers, the usual elevator
// behaviour of a disk scheduler.
#pragma once

#include <cstdint>
#include <vector>

namespace burstsim {

struct DeviceProfile {
  double seq_bw = 0;           // bytes per second, must be > 0
  double seek_base = 0;        // seconds per repositioning
  double seek_per_byte = 0;    // seconds per byte of head travel
  double per_req_overhead = 0; // seconds per original request
};

struct HeadState {
  uint64_t pos = 0;  // byte address after the last transfer
};

struct IoReq {
  uint64_t offset = 0;  // device byte address
  uint64_t size = 0;
  uint32_t count = 1;   // original requests folded into this transfer
};

// Distinct files map into one device address space far apart, so cross-file
// moves always pay a full seek.
inline constexpr uint64_t kFileStride = 32ull << 30;

inline uint64_t device_address(uint32_t file, uint64_t offset) {
  return file * kFileStride + offset;
}

// Cost of one transfer at the current head position; advances the head to
// the end of the transfer.
double service_time(const DeviceProfile& dev, HeadState& head, const IoReq& req);

// Sorts a batch by offset and merges exactly adjacent transfers. Merging
// keeps the original request count, so per-request overhead is preserved.
std::vector<IoReq> sort_merge_batch(std::vector<IoReq> batch);

// Serves arrivals in scheduler windows of q requests each: every window is
// sorted, merged, and serviced in offset order. Requires q >= 1.
double service_window(const DeviceProfile& dev, HeadState& head,
                      const std::vector<IoReq>& arrivals, uint32_t q);

}  // namespace burstsim

// Staging buffer carved into regions that cycle Empty -> Filling -> Full ->
// Flushing -> Empty. Appends are log-structured; a per-region MetaTree maps
// buffered bytes back to their home location and drives sorted flushing.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "burstsim/metatree.hpp"

namespace burstsim {

enum class RegionState { kEmpty, kFilling, kFull, kFlushing };

// Flow-control outcomes; these are expected states, not errors.
enum class AppendStatus { kOk, kRegionFull };
enum class SwapStatus { kOk, kBufferExhausted };
enum class FlushDecision { kProceed, kPause };

struct SsdLocation {
  uint32_t region = 0;
  uint64_t offset = 0;
};

class Region {
 public:
  Region(uint32_t index, uint64_t capacity_bytes);

  // Claims the next cursor_ bytes; kRegionFull leaves the region untouched.
  // Filling a region to exactly its capacity marks it kFull.
  AppendStatus append(uint64_t bytes, SsdLocation* loc);

  void mark_full();     // Filling -> Full (early close when the next request
                        // does not fit)
  void begin_flush();   // Full -> Flushing
  void finish_flush();  // Flushing -> Empty, rewinds the cursor

  RegionState state() const { return state_; }
  uint32_t index() const { return index_; }
  uint64_t capacity() const { return capacity_; }
  uint64_t used() const { return used_; }
  uint64_t free_bytes() const { return capacity_ - used_; }
  bool fits(uint64_t bytes) const;

 private:
  uint32_t index_;
  uint64_t capacity_;
  uint64_t used_ = 0;
  RegionState state_ = RegionState::kEmpty;
};

// One merged HDD write plus the buffered extents it covers.
struct FlushWrite {
  uint32_t file = 0;
  uint64_t offset = 0;  // destination offset in the home file
  uint64_t size = 0;
  std::vector<MetaEntry> reads;  // source extents, offset order
};

struct FlushPlan {
  std::vector<FlushWrite> writes;
  uint64_t total_bytes = 0;
};

// Walks the tree in order and merges gap-free same-file neighbours.
FlushPlan plan_flush(const MetaTree& tree);

// Traffic-aware flush gate: proceed while current randomness stays at or
// above the threshold (the stream is buffer-bound, so the drain target is
// idle); pause when it falls below.
FlushDecision flush_gate(double current_percentage, double threshold);

// Two regions pipelined: one fills while the other drains.
class TwoRegionBuffer {
 public:
  explicit TwoRegionBuffer(uint64_t region_bytes);

  AppendStatus append(uint64_t bytes, SsdLocation* loc);

  // Retires the full active region for flushing and starts filling the other.
  // Requires the active region to be kFull; kBufferExhausted when the other
  // region has not finished draining.
  SwapStatus swap();

  Region& active() { return regions_[active_]; }
  Region& other() { return regions_[1 - active_]; }
  Region& region(uint32_t idx) { return regions_[idx]; }
  MetaTree& tree(uint32_t idx) { return trees_[idx]; }
  uint32_t active_index() const { return active_; }
  uint64_t region_bytes() const { return regions_[0].capacity(); }

 private:
  std::vector<Region> regions_;
  std::vector<MetaTree> trees_;
  uint32_t active_ = 0;
};

}  // namespace burstsim

#include "burstsim/buffer.hpp"

#include <stdexcept>

#include "burstsim/errors.hpp"

namespace burstsim {

Region::Region(uint32_t index, uint64_t capacity_bytes)
    : index_(index), capacity_(capacity_bytes) {
  if (capacity_bytes == 0) throw ConfigError("region capacity must be positive");
}

bool Region::fits(uint64_t bytes) const {
  return (state_ == RegionState::kEmpty || state_ == RegionState::kFilling) &&
         bytes <= free_bytes();
}

AppendStatus Region::append(uint64_t bytes, SsdLocation* loc) {
  if (state_ != RegionState::kEmpty && state_ != RegionState::kFilling)
    throw std::logic_error("append to a region that is not accepting data");
  if (bytes == 0) throw std::invalid_argument("append of zero bytes");
  if (bytes > free_bytes()) return AppendStatus::kRegionFull;
  if (loc) *loc = {index_, used_};
  used_ += bytes;
  state_ = used_ == capacity_ ? RegionState::kFull : RegionState::kFilling;
  return AppendStatus::kOk;
}

void Region::mark_full() {
  if (state_ != RegionState::kFilling)
    throw std::logic_error("only a filling region can be closed early");
  state_ = RegionState::kFull;
}

void Region::begin_flush() {
  if (state_ != RegionState::kFull)
    throw std::logic_error("only a full region can start flushing");
  state_ = RegionState::kFlushing;
}

void Region::finish_flush() {
  if (state_ != RegionState::kFlushing)
    throw std::logic_error("finish_flush on a region that is not flushing");
  used_ = 0;
  state_ = RegionState::kEmpty;
}

FlushPlan plan_flush(const MetaTree& tree) {
  FlushPlan plan;
  tree.for_each_in_order([&](const MetaEntry& e) {
    plan.total_bytes += e.size;
    if (!plan.writes.empty()) {
      FlushWrite& last = plan.writes.back();
      if (last.file == e.key.file && last.offset + last.size == e.key.offset) {
        last.size += e.size;
        last.reads.push_back(e);
        return;
      }
    }
    plan.writes.push_back({e.key.file, e.key.offset, e.size, {e}});
  });
  return plan;
}

FlushDecision flush_gate(double current_percentage, double threshold) {
  return current_percentage >= threshold ? FlushDecision::kProceed
                                         : FlushDecision::kPause;
}

TwoRegionBuffer::TwoRegionBuffer(uint64_t region_bytes) {
  regions_.emplace_back(0, region_bytes);
  regions_.emplace_back(1, region_bytes);
  trees_.resize(2);
}

AppendStatus TwoRegionBuffer::append(uint64_t bytes, SsdLocation* loc) {
  return regions_[active_].append(bytes, loc);
}

SwapStatus TwoRegionBuffer::swap() {
  if (regions_[active_].state() != RegionState::kFull)
    throw std::logic_error("swap requires the active region to be full");
  if (other().state() != RegionState::kEmpty)
    return SwapStatus::kBufferExhausted;
  active_ = 1 - active_;
  return SwapStatus::kOk;
}

}  // namespace burstsim

// Adaptive stream redirection. Keeps a bounded FIFO of recent window
// percentages; the redirection threshold is the list value at index
// floor((1 - mean) * (count - 1)) after sorting, so a calm history raises
// the bar and a noisy history lowers it.
#pragma once

#include <cstddef>
#include <vector>

namespace burstsim {

enum class Device { kHdd, kSsd };

class PercentList {
 public:
  explicit PercentList(size_t capacity = 10);

  void insert(double percentage);  // evicts the oldest once full
  double avgper() const;           // mean of held values; 0 when empty
  // Threshold per the index rule above; default_threshold when empty.
  double threshold(double default_threshold) const;

  size_t size() const { return by_age_.size(); }
  size_t capacity() const { return capacity_; }
  const std::vector<double>& values_by_age() const { return by_age_; }

 private:
  size_t capacity_;
  std::vector<double> by_age_;  // insertion order, front is oldest
};

class Redirector {
 public:
  explicit Redirector(size_t capacity = 10, double default_threshold = 0.5);

  // Chooses the device for the NEXT stream from the current threshold:
  // switch to SSD when p rises above it, back to HDD when p falls below,
  // hold otherwise. Does not record p.
  Device decide(double percentage);

  void observe(double percentage);  // records p into the history
  void reset();                     // clears history and target

  double threshold() const;
  double default_threshold() const { return default_threshold_; }
  Device target() const { return target_; }
  const PercentList& history() const { return list_; }

 private:
  PercentList list_;
  double default_threshold_;
  Device target_ = Device::kHdd;
};

}  // namespace burstsim

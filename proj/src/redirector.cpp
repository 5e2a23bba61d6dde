#include "burstsim/redirector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "burstsim/errors.hpp"

namespace burstsim {

PercentList::PercentList(size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("percent list capacity must be positive");
}

void PercentList::insert(double percentage) {
  if (percentage < 0.0 || percentage > 1.0)
    throw std::invalid_argument("percentage outside [0,1]");
  if (by_age_.size() == capacity_) by_age_.erase(by_age_.begin());
  by_age_.push_back(percentage);
}

double PercentList::avgper() const {
  if (by_age_.empty()) return 0.0;
  double sum = 0;
  for (double v : by_age_) sum += v;
  return sum / static_cast<double>(by_age_.size());
}

double PercentList::threshold(double default_threshold) const {
  if (by_age_.empty()) return default_threshold;
  std::vector<double> sorted = by_age_;
  std::sort(sorted.begin(), sorted.end());
  const size_t n = sorted.size();
  double idx = std::floor((1.0 - avgper()) * static_cast<double>(n - 1));
  idx = std::clamp(idx, 0.0, static_cast<double>(n - 1));
  return sorted[static_cast<size_t>(idx)];
}

Redirector::Redirector(size_t capacity, double default_threshold)
    : list_(capacity), default_threshold_(default_threshold) {
  if (default_threshold < 0.0 || default_threshold > 1.0)
    throw ConfigError("default threshold outside [0,1]");
}

Device Redirector::decide(double percentage) {
  const double thr = threshold();
  if (percentage > thr && target_ == Device::kHdd)
    target_ = Device::kSsd;
  else if (percentage < thr && target_ == Device::kSsd)
    target_ = Device::kHdd;
  return target_;
}

void Redirector::observe(double percentage) { list_.insert(percentage); }

void Redirector::reset() {
  list_ = PercentList(list_.capacity());
  target_ = Device::kHdd;
}

double Redirector::threshold() const {
  return list_.threshold(default_threshold_);
}

}  // namespace burstsim

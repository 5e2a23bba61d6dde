#include "burstsim/devices.hpp"

#include <algorithm>
#include <stdexcept>

#include "burstsim/errors.hpp"

namespace burstsim {

double service_time(const DeviceProfile& dev, HeadState& head,
                    const IoReq& req) {
  if (dev.seq_bw <= 0) throw ConfigError("device bandwidth must be positive");
  if (req.size == 0) throw std::invalid_argument("zero-size request");
  const uint64_t start = req.offset;
  const uint64_t distance =
      start >= head.pos ? start - head.pos : head.pos - start;
  double t = req.count * dev.per_req_overhead +
             static_cast<double>(req.size) / dev.seq_bw;
  if (distance != 0)
    t += dev.seek_base + dev.seek_per_byte * static_cast<double>(distance);
  head.pos = start + req.size;
  return t;
}

std::vector<IoReq> sort_merge_batch(std::vector<IoReq> batch) {
  std::stable_sort(batch.begin(), batch.end(),
                   [](const IoReq& a, const IoReq& b) {
                     return a.offset < b.offset;
                   });
  std::vector<IoReq> merged;
  merged.reserve(batch.size());
  for (const auto& r : batch) {
    if (!merged.empty() && merged.back().offset + merged.back().size == r.offset) {
      merged.back().size += r.size;
      merged.back().count += r.count;
    } else {
      merged.push_back(r);
    }
  }
  return merged;
}

double service_window(const DeviceProfile& dev, HeadState& head,
                      const std::vector<IoReq>& arrivals, uint32_t q) {
  if (q < 1) throw ConfigError("scheduler window must be at least 1");
  double total = 0;
  for (size_t i = 0; i < arrivals.size(); i += q) {
    const size_t n = std::min<size_t>(q, arrivals.size() - i);
    std::vector<IoReq> batch(arrivals.begin() + i, arrivals.begin() + i + n);
    for (const auto& run : sort_merge_batch(std::move(batch)))
      total += service_time(dev, head, run);
  }
  return total;
}

}  // namespace burstsim

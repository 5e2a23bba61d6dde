#include "burstsim/detector.hpp"

#include <algorithm>
#include <stdexcept>

#include "burstsim/errors.hpp"

namespace burstsim {

uint32_t rf_pair(uint64_t o1, uint64_t o2, uint64_t req_bytes) {
  if (o1 > o2) throw std::invalid_argument("rf_pair requires sorted offsets");
  const uint64_t gap = o2 - o1;
  return (gap == 0 || gap == req_bytes) ? 0 : 1;
}

StreamStats stream_stats(std::span<const Request> window, uint64_t req_bytes) {
  if (window.size() < 2)
    throw std::invalid_argument("stream stats need at least 2 requests");
  std::vector<uint64_t> offsets;
  offsets.reserve(window.size());
  for (const auto& r : window) offsets.push_back(r.offset);
  std::sort(offsets.begin(), offsets.end());

  StreamStats st;
  st.n = static_cast<uint32_t>(window.size());
  for (size_t i = 0; i + 1 < offsets.size(); ++i)
    st.s += rf_pair(offsets[i], offsets[i + 1], req_bytes);
  st.percentage = static_cast<double>(st.s) / (st.n - 1);
  return st;
}

std::vector<std::span<const Request>> group(const std::vector<Request>& reqs,
                                            uint32_t w) {
  if (w < 2) throw ConfigError("window size must be at least 2");
  std::vector<std::span<const Request>> windows;
  windows.reserve(reqs.size() / w + 1);
  for (size_t i = 0; i < reqs.size(); i += w)
    windows.emplace_back(reqs.data() + i, std::min<size_t>(w, reqs.size() - i));
  return windows;
}

}  // namespace burstsim

// Randomness detection over fixed-size request windows. A window is scored
// by sorting its offsets and counting adjacent pairs whose gap is neither
// zero nor exactly one request, giving S out of N-1 and a percentage S/(N-1).
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "burstsim/trace.hpp"

namespace burstsim {

struct StreamStats {
  uint32_t n = 0;        // requests in the window
  uint32_t s = 0;        // random-factor sum over adjacent sorted pairs
  double percentage = 0;  // s / (n - 1)
};

// Random factor of one adjacent sorted pair: 0 when the pair is contiguous
// (gap == req_bytes) or overlapping at the same offset (gap == 0), else 1.
// Requires o1 <= o2.
uint32_t rf_pair(uint64_t o1, uint64_t o2, uint64_t req_bytes);

// Scores one window. Sort key is the offset alone; file ids are ignored,
// mirroring a block-level view of the queue. Requires at least 2 requests.
StreamStats stream_stats(std::span<const Request> window, uint64_t req_bytes);

// Splits arrivals into consecutive windows of w requests; the tail window
// keeps the remainder. Requires w >= 2 (a 1-request window has no pairs).
std::vector<std::span<const Request>> group(const std::vector<Request>& reqs,
                                            uint32_t w);

}  // namespace burstsim

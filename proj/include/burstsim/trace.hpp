// Synthetic write-request traces: per-process access patterns, arrival
// interleaving, CSV serialization.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace burstsim {

struct Request {
  uint64_t seq = 0;     // arrival index, dense from 0
  uint32_t proc = 0;    // issuing process rank
  uint32_t file = 0;    // logical file id
  uint64_t offset = 0;  // byte offset within the file
  uint64_t size = 0;    // bytes, constant across a trace
};

enum class Pattern {
  kSegmentedContiguous,  // each proc appends sequentially to its own segment
  kSegmentedRandom,      // each proc writes its segment blocks in shuffled order
  kStrided,              // procs cycle through interleaved stride slots
};

enum class Interleave {
  kRoundRobin,  // iteration-major, process-minor arrival order
  kRandom,      // seeded fair merge, pick weighted by remaining counts
};

struct PatternSpec {
  Pattern pattern = Pattern::kSegmentedContiguous;
  uint32_t procs = 1;
  uint64_t total_bytes = 0;  // across all procs, divisible by procs * req_bytes
  uint64_t req_bytes = 0;
  uint32_t file = 0;
  uint64_t seed = 0;  // drives random patterns and random interleaving
};

class Trace {
 public:
  Trace() = default;
  explicit Trace(std::vector<Request> reqs);  // validates, adopts

  static Trace generate(const PatternSpec& spec,
                        Interleave interleave = Interleave::kRoundRobin);

  // Fair random merge of several traces into one arrival stream. Inputs keep
  // their internal order; file ids must be pairwise distinct; request sizes
  // must match. Sequence numbers are reassigned densely.
  static Trace mix(const std::vector<Trace>& parts, uint64_t seed);

  static Trace load_csv(const std::filesystem::path& path);
  void save_csv(const std::filesystem::path& path) const;

  // Arrival-order slice [first, first+count), re-sequenced from 0.
  Trace slice(size_t first, size_t count) const;

  // This trace followed by tail, re-sequenced densely.
  Trace concat(const Trace& tail) const;

  const std::vector<Request>& requests() const { return reqs_; }
  size_t size() const { return reqs_.size(); }
  bool empty() const { return reqs_.empty(); }
  uint64_t req_bytes() const { return req_bytes_; }  // 0 when empty
  uint64_t total_bytes() const;
  uint32_t max_file() const;  // requires non-empty

 private:
  std::vector<Request> reqs_;
  uint64_t req_bytes_ = 0;
};

}  // namespace burstsim

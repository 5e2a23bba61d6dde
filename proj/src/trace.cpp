#include "burstsim/trace.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "burstsim/errors.hpp"
#include "burstsim/rng.hpp"

namespace burstsim {

namespace {

// Merges per-process request lists into one arrival order. Round-robin walks
// iteration-major across processes; random picks the next source with
// probability proportional to its remaining count, so every interleaving of
// the preserved per-process orders is equally likely.
std::vector<Request> interleave_lists(std::vector<std::vector<Request>> lists,
                                      Interleave policy, uint64_t seed) {
  size_t total = 0;
  for (const auto& l : lists) total += l.size();
  std::vector<Request> out;
  out.reserve(total);
  std::vector<size_t> next(lists.size(), 0);

  if (policy == Interleave::kRoundRobin) {
    for (size_t taken = 0; taken < total;) {
      for (size_t j = 0; j < lists.size(); ++j) {
        if (next[j] < lists[j].size()) {
          out.push_back(lists[j][next[j]++]);
          ++taken;
        }
      }
    }
  } else {
    std::mt19937_64 rng(sub_seed(seed, 0x6d6978));
    uint64_t remaining = total;
    while (remaining > 0) {
      uint64_t r = draw_below(rng, remaining);
      for (size_t j = 0; j < lists.size(); ++j) {
        uint64_t avail = lists[j].size() - next[j];
        if (r < avail) {
          out.push_back(lists[j][next[j]++]);
          break;
        }
        r -= avail;
      }
      --remaining;
    }
  }
  for (size_t i = 0; i < out.size(); ++i) out[i].seq = i;
  return out;
}

uint64_t parse_field(const std::string& text, size_t line_no) {
  uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ParseError("non-numeric field '" + text + "'", line_no);
  return v;
}

}  // namespace

Trace::Trace(std::vector<Request> reqs) : reqs_(std::move(reqs)) {
  for (size_t i = 0; i < reqs_.size(); ++i) {
    if (reqs_[i].seq != i)
      throw std::invalid_argument("trace sequence numbers must be dense from 0");
    if (reqs_[i].size == 0)
      throw std::invalid_argument("request size must be positive");
    if (i == 0)
      req_bytes_ = reqs_[i].size;
    else if (reqs_[i].size != req_bytes_)
      throw std::invalid_argument("trace request sizes must be uniform");
  }
}

Trace Trace::generate(const PatternSpec& spec, Interleave interleave) {
  if (spec.procs == 0) throw ConfigError("procs must be positive");
  if (spec.req_bytes == 0) throw ConfigError("request size must be positive");
  if (spec.total_bytes == 0 || spec.total_bytes % spec.req_bytes != 0)
    throw ConfigError("total bytes must be a positive multiple of request size");
  const uint64_t count = spec.total_bytes / spec.req_bytes;
  if (count % spec.procs != 0)
    throw ConfigError("request count must divide evenly across processes");
  const uint64_t per_proc = count / spec.procs;
  const uint64_t segment = spec.total_bytes / spec.procs;

  std::vector<std::vector<Request>> lists(spec.procs);
  for (uint32_t j = 0; j < spec.procs; ++j) {
    auto& l = lists[j];
    l.reserve(per_proc);
    switch (spec.pattern) {
      case Pattern::kSegmentedContiguous:
        for (uint64_t i = 0; i < per_proc; ++i)
          l.push_back({0, j, spec.file, j * segment + i * spec.req_bytes,
                       spec.req_bytes});
        break;
      case Pattern::kSegmentedRandom: {
        std::vector<uint64_t> blocks(per_proc);
        for (uint64_t i = 0; i < per_proc; ++i) blocks[i] = i;
        std::mt19937_64 rng(sub_seed(spec.seed, j));
        shuffle_vec(blocks, rng);
        for (uint64_t b : blocks)
          l.push_back({0, j, spec.file, j * segment + b * spec.req_bytes,
                       spec.req_bytes});
        break;
      }
      case Pattern::kStrided:
        for (uint64_t i = 0; i < per_proc; ++i)
          l.push_back({0, j, spec.file, (i * spec.procs + j) * spec.req_bytes,
                       spec.req_bytes});
        break;
    }
  }
  return Trace(interleave_lists(std::move(lists), interleave, spec.seed));
}

Trace Trace::mix(const std::vector<Trace>& parts, uint64_t seed) {
  if (parts.empty()) throw ConfigError("mix needs at least one trace");
  uint64_t req = 0;
  std::vector<std::vector<Request>> lists;
  lists.reserve(parts.size());
  std::set<uint32_t> files;
  for (const auto& t : parts) {
    if (t.empty()) continue;
    if (req == 0) req = t.req_bytes();
    if (t.req_bytes() != req)
      throw ConfigError("mixed traces must share one request size");
    std::set<uint32_t> own;
    for (const auto& r : t.requests()) own.insert(r.file);
    for (uint32_t f : own)
      if (!files.insert(f).second)
        throw ConfigError("mixed traces must use distinct file ids (clash on " +
                          std::to_string(f) + ")");
    lists.push_back(t.requests());
  }
  return Trace(interleave_lists(std::move(lists), Interleave::kRandom, seed));
}

Trace Trace::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty file", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "seq,proc,file,offset,size")
    throw ParseError("bad header, expected seq,proc,file,offset,size", 1);

  std::vector<Request> reqs;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) throw ParseError("blank row", line_no);
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 5)
      throw ParseError("expected 5 fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    Request r;
    r.seq = parse_field(fields[0], line_no);
    r.proc = static_cast<uint32_t>(parse_field(fields[1], line_no));
    r.file = static_cast<uint32_t>(parse_field(fields[2], line_no));
    r.offset = parse_field(fields[3], line_no);
    r.size = parse_field(fields[4], line_no);
    if (r.seq != reqs.size())
      throw ParseError("sequence number " + std::to_string(r.seq) +
                           " out of order (expected " +
                           std::to_string(reqs.size()) + ")",
                       line_no);
    if (r.size == 0) throw ParseError("zero request size", line_no);
    if (!reqs.empty() && r.size != reqs.front().size)
      throw ParseError("request size differs from first row", line_no);
    reqs.push_back(r);
  }
  return Trace(std::move(reqs));
}

void Trace::save_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << "seq,proc,file,offset,size\n";
  for (const auto& r : reqs_)
    out << r.seq << ',' << r.proc << ',' << r.file << ',' << r.offset << ','
        << r.size << '\n';
  if (!out) throw ParseError("write failed for " + path.string());
}

Trace Trace::slice(size_t first, size_t count) const {
  if (first + count > reqs_.size())
    throw std::invalid_argument("slice out of range");
  std::vector<Request> part(reqs_.begin() + first,
                            reqs_.begin() + first + count);
  for (size_t i = 0; i < part.size(); ++i) part[i].seq = i;
  return Trace(std::move(part));
}

Trace Trace::concat(const Trace& tail) const {
  if (!empty() && !tail.empty() && req_bytes_ != tail.req_bytes())
    throw ConfigError("concatenated traces must share one request size");
  std::vector<Request> all = reqs_;
  all.insert(all.end(), tail.reqs_.begin(), tail.reqs_.end());
  for (size_t i = 0; i < all.size(); ++i) all[i].seq = i;
  return Trace(std::move(all));
}

uint64_t Trace::total_bytes() const {
  return req_bytes_ * static_cast<uint64_t>(reqs_.size());
}

uint32_t Trace::max_file() const {
  if (reqs_.empty()) throw std::invalid_argument("empty trace has no files");
  uint32_t m = 0;
  for (const auto& r : reqs_) m = std::max(m, r.file);
  return m;
}

}  // namespace burstsim

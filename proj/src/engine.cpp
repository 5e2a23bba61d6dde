#include "burstsim/engine.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>

#include "burstsim/buffer.hpp"
#include "burstsim/detector.hpp"
#include "burstsim/errors.hpp"
#include "burstsim/redirector.hpp"

namespace burstsim {

PolicyMode parse_mode(const std::string& name) {
  if (name == "hdd-only") return PolicyMode::kHddOnly;
  if (name == "full-bb") return PolicyMode::kFullBuffer;
  if (name == "ssdup-static") return PolicyMode::kStaticMarks;
  if (name == "ssdup-adaptive") return PolicyMode::kAdaptive;
  throw ConfigError("unknown mode '" + name + "'");
}

std::string mode_name(PolicyMode mode) {
  switch (mode) {
    case PolicyMode::kHddOnly: return "hdd-only";
    case PolicyMode::kFullBuffer: return "full-bb";
    case PolicyMode::kStaticMarks: return "ssdup-static";
    case PolicyMode::kAdaptive: return "ssdup-adaptive";
  }
  throw std::logic_error("bad mode");
}

void PipelineParams::validate() const {
  if (m >= n) throw std::invalid_argument("need m < n stages");
  if (t_ssd <= 0 || t_hdd <= 0 || t_f <= 0 || t_b <= 0 || t_f_interfered <= 0)
    throw std::invalid_argument("stage times must be positive");
  if (t_b != t_ssd)
    throw std::invalid_argument("backend stage time must equal the fill time");
}

double predict_no_pipeline(const PipelineParams& p) {
  p.validate();
  return p.m * p.t_ssd + (p.n - p.m) * p.t_hdd;
}

double predict_pipeline(const PipelineParams& p, bool interfered) {
  p.validate();
  const double f = interfered ? p.t_f_interfered : p.t_f;
  return p.m * p.t_ssd + (p.n - p.m) * std::max(f, p.t_b);
}

namespace {

// One region's drain in flight. Entry costs are charged against the shared
// HDD head when the entry starts; the head then sits at the entry's end, so
// interleaved direct writes pay the cross-area seeks organically.
struct FlushJob {
  uint32_t region = 0;
  FlushPlan plan;
  size_t next = 0;
  double entry_rem = 0;
  bool entry_started = false;
};

class Sim {
 public:
  Sim(PolicyMode mode, const SimConfig& cfg) : mode_(mode), cfg_(cfg) {
    cfg_.validate();
    const bool two_region =
        mode == PolicyMode::kStaticMarks || mode == PolicyMode::kAdaptive;
    if (two_region) {
      buf_.emplace(cfg_.region_bytes);
    } else if (mode == PolicyMode::kFullBuffer) {
      // one region spanning the whole SSD, drained only when it fills
      single_.emplace(0u, 2 * cfg_.region_bytes);
      single_tree_.emplace();
    }
    redirector_ = Redirector(cfg_.percent_list_capacity, cfg_.default_threshold);
  }

  SimResult run(const std::vector<Phase>& phases) {
    for (const auto& ph : phases) {
      if (ph.trace.empty()) continue;
      if (buffered() && ph.trace.req_bytes() > region_capacity())
        throw ConfigError("buffer region smaller than one request");
    }
    bool first = true;
    for (const auto& ph : phases) {
      if (!first && mode_ == PolicyMode::kAdaptive) {
        redirector_.reset();  // explicit trace boundary
        latest_p_.reset();
      }
      first = false;
      if (ph.gap_before_s > 0) idle_gap(ph.gap_before_s);
      const uint64_t req_bytes = ph.trace.req_bytes();
      for (const auto& win : group(ph.trace.requests(), cfg_.window_w))
        serve_window(win, req_bytes);
    }
    drain_rest();
    return finish();
  }

 private:
  bool buffered() const { return mode_ != PolicyMode::kHddOnly; }

  uint64_t region_capacity() const {
    return buf_ ? buf_->region_bytes() : single_ ? single_->capacity() : 0;
  }

  Device current_target() const {
    switch (mode_) {
      case PolicyMode::kHddOnly: return Device::kHdd;
      case PolicyMode::kFullBuffer: return Device::kSsd;
      case PolicyMode::kStaticMarks: return static_target_;
      case PolicyMode::kAdaptive: return redirector_.target();
    }
    throw std::logic_error("bad mode");
  }

  void serve_window(std::span<const Request> win, uint64_t req_bytes) {
    if (current_target() == Device::kSsd)
      serve_ssd_window(win);
    else
      serve_hdd_window(win);

    if (win.size() >= 2 &&
        (mode_ == PolicyMode::kAdaptive || mode_ == PolicyMode::kStaticMarks)) {
      const StreamStats st = stream_stats(win, req_bytes);
      latest_p_ = st.percentage;
      if (mode_ == PolicyMode::kAdaptive) {
        const double thr = redirector_.threshold();
        const Device next = redirector_.decide(st.percentage);
        redirector_.observe(st.percentage);
        decisions_.push_back({stream_idx_, st.percentage, thr, next});
      } else {
        const double thr = static_target_ == Device::kHdd ? cfg_.static_high
                                                          : cfg_.static_low;
        if (static_target_ == Device::kHdd && st.percentage > cfg_.static_high)
          static_target_ = Device::kSsd;
        else if (static_target_ == Device::kSsd &&
                 st.percentage < cfg_.static_low)
          static_target_ = Device::kHdd;
        decisions_.push_back({stream_idx_, st.percentage, thr, static_target_});
      }
    }
    ++stream_idx_;
  }

  // Buffer fills advance the clock at SSD cost; the HDD is idle from the
  // producer's view, so pending flush work rides along for free.
  void serve_ssd_window(std::span<const Request> win) {
    for (const auto& r : win) {
      while (!active_fits(r.size)) make_room(r.size);
      SsdLocation loc{};
      const AppendStatus st = buffered_append(r.size, &loc);
      assert(st == AppendStatus::kOk);
      (void)st;
      active_tree(loc.region)
          .insert({{r.file, r.offset}, r.size, loc.region, loc.offset});
      const uint64_t addr = loc.region * region_capacity() + loc.offset;
      const double dt = service_time(cfg_.ssd, ssd_head_, {addr, r.size, 1});
      t_busy_ += dt;
      bytes_ssd_ += r.size;
      flusher_tick(dt, /*serialized=*/false);
    }
  }

  // Direct writes run through the elevator in scheduler batches; an unpaused
  // flusher takes a fair time share between merged runs, stretching the
  // window and dragging the head between the two areas.
  void serve_hdd_window(std::span<const Request> win) {
    std::vector<IoReq> batch;
    batch.reserve(cfg_.cfq_q);
    for (size_t i = 0; i < win.size(); i += cfg_.cfq_q) {
      batch.clear();
      const size_t n = std::min<size_t>(cfg_.cfq_q, win.size() - i);
      for (size_t k = 0; k < n; ++k) {
        const Request& r = win[i + k];
        batch.push_back({device_address(r.file, r.offset), r.size, 1});
        bytes_direct_ += r.size;
      }
      for (const auto& run : sort_merge_batch(batch)) {
        const double dt = service_time(cfg_.hdd, hdd_head_, run);
        t_busy_ += dt;
        flusher_tick(dt, /*serialized=*/true);
      }
    }
  }

  bool active_fits(uint64_t bytes) {
    if (buf_) return buf_->active().fits(bytes);
    return single_->fits(bytes);
  }

  AppendStatus buffered_append(uint64_t bytes, SsdLocation* loc) {
    return buf_ ? buf_->append(bytes, loc) : single_->append(bytes, loc);
  }

  MetaTree& active_tree(uint32_t region) {
    return buf_ ? buf_->tree(region) : *single_tree_;
  }

  // Frees buffer space for the producer: close the active region, hand it to
  // the flusher, and stall on the drain when both regions are tied up.
  void make_room(uint64_t bytes) {
    (void)bytes;
    if (buf_) {
      Region& act = buf_->active();
      if (act.state() == RegionState::kFilling) act.mark_full();
      if (buf_->other().state() == RegionState::kEmpty) {
        const SwapStatus sw = buf_->swap();
        assert(sw == SwapStatus::kOk);
        (void)sw;
        start_flush(buf_->other().index());
      } else {
        stall_drain();
      }
    } else {
      Region& reg = *single_;
      if (reg.state() == RegionState::kFilling) reg.mark_full();
      if (!job_) start_flush(0);
      stall_drain();
    }
  }

  void start_flush(uint32_t region_idx) {
    assert(!job_);
    Region& reg = buf_ ? buf_->region(region_idx) : *single_;
    MetaTree& tree = buf_ ? buf_->tree(region_idx) : *single_tree_;
    reg.begin_flush();
    job_ = FlushJob{region_idx, plan_flush(tree)};
  }

  void complete_job() {
    Region& reg = buf_ ? buf_->region(job_->region) : *single_;
    MetaTree& tree = buf_ ? buf_->tree(job_->region) : *single_tree_;
    reg.finish_flush();
    tree.clear();
    job_.reset();
  }

  // Spends up to `budget` seconds of flush work; returns what was spent.
  // Entry completion lands bytes and frees the region.
  double flusher_spend(double budget) {
    double spent = 0;
    while (job_ && budget > 1e-12) {
      if (!job_->entry_started) {
        const FlushWrite& w = job_->plan.writes[job_->next];
        const IoReq io{device_address(w.file, w.offset), w.size,
                       static_cast<uint32_t>(w.reads.size())};
        job_->entry_rem = service_time(cfg_.hdd, hdd_head_, io);
        job_->entry_started = true;
      }
      const double step = std::min(budget, job_->entry_rem);
      job_->entry_rem -= step;
      budget -= step;
      spent += step;
      if (job_->entry_rem <= 1e-12) {
        bytes_flushed_ += job_->plan.writes[job_->next].size;
        ++job_->next;
        job_->entry_started = false;
        if (job_->next == job_->plan.writes.size()) complete_job();
      }
    }
    return spent;
  }

  bool gate_closed() const {
    if (mode_ != PolicyMode::kAdaptive) return false;
    if (!latest_p_) return false;  // no current stream: proceed
    return flush_gate(*latest_p_, redirector_.threshold()) ==
           FlushDecision::kPause;
  }

  // Producer advanced by dt; give the flusher its chance. Serialized means
  // the producer occupies the HDD too, so flush time extends the clock.
  void flusher_tick(double dt, bool serialized) {
    if (!job_) {
      in_pause_ = false;
      return;
    }
    if (gate_closed()) {
      if (!in_pause_) {
        in_pause_ = true;
        ++pause_episodes_;
      }
      pause_s_ += dt;
      return;
    }
    in_pause_ = false;
    const double spent = flusher_spend(dt);
    if (serialized) t_busy_ += spent;
  }

  // Producer blocked on a full buffer: the drain owns the HDD outright.
  void stall_drain() {
    assert(job_);
    in_pause_ = false;
    const double dt = flusher_spend(std::numeric_limits<double>::infinity());
    t_busy_ += dt;
    stall_s_ += dt;
  }

  // Idle spans drain opportunistically: finish the pending job, then rotate
  // any region still holding data into a fresh drain, entry by entry while
  // the budget lasts.
  void idle_gap(double seconds) {
    in_pause_ = false;
    double budget = seconds;
    while (budget > 1e-12) {
      if (!job_ && !adopt_idle_job()) break;
      const double spent = flusher_spend(budget);
      budget -= spent;
      if (spent <= 1e-12) break;
    }
  }

  // Final drain: everything left must reach the HDD, off the busy clock.
  void drain_rest() {
    in_pause_ = false;
    while (true) {
      if (!job_ && !adopt_idle_job()) break;
      drain_s_ += flusher_spend(std::numeric_limits<double>::infinity());
    }
  }

  // With no producer running, a region holding data may rotate straight into
  // flushing; appends resume later on the other (empty) region.
  bool adopt_idle_job() {
    if (job_) return true;
    if (buf_) {
      Region& act = buf_->active();
      if (act.used() == 0) return false;
      if (act.state() == RegionState::kFilling) act.mark_full();
      if (buf_->other().state() != RegionState::kEmpty)
        throw std::logic_error("undrained region without a job");
      const SwapStatus sw = buf_->swap();
      assert(sw == SwapStatus::kOk);
      (void)sw;
      start_flush(buf_->other().index());
      return true;
    }
    if (single_ && single_->used() > 0) {
      if (single_->state() == RegionState::kFilling) single_->mark_full();
      start_flush(0);
      return true;
    }
    return false;
  }

  SimResult finish() {
    const uint64_t total = bytes_ssd_ + bytes_direct_;
    Metrics m;
    m.total_time_s = t_busy_;
    m.throughput_mbps =
        t_busy_ > 0 ? static_cast<double>(total) / 1e6 / t_busy_ : 0.0;
    m.ssd_fraction =
        total > 0 ? static_cast<double>(bytes_ssd_) / static_cast<double>(total)
                  : 0.0;
    m.flush_pause_s = pause_s_;
    m.stall_s = stall_s_;
    m.pause_episodes = pause_episodes_;
    m.drain_s = drain_s_;
    m.bytes_total = total;
    m.bytes_to_ssd = bytes_ssd_;
    m.bytes_direct_hdd = bytes_direct_;
    m.bytes_flushed = bytes_flushed_;
    assert(bytes_flushed_ == bytes_ssd_);
    return {m, std::move(decisions_)};
  }

  PolicyMode mode_;
  SimConfig cfg_;
  std::optional<TwoRegionBuffer> buf_;
  std::optional<Region> single_;
  std::optional<MetaTree> single_tree_;
  Redirector redirector_{10, 0.5};
  Device static_target_ = Device::kHdd;
  std::optional<double> latest_p_;
  std::optional<FlushJob> job_;
  HeadState hdd_head_;
  HeadState ssd_head_;
  bool in_pause_ = false;
  uint32_t stream_idx_ = 0;
  double t_busy_ = 0;
  double pause_s_ = 0;
  double stall_s_ = 0;
  double drain_s_ = 0;
  uint32_t pause_episodes_ = 0;
  uint64_t bytes_ssd_ = 0;
  uint64_t bytes_direct_ = 0;
  uint64_t bytes_flushed_ = 0;
  std::vector<DecisionRow> decisions_;
};

}  // namespace

SimResult simulate(const std::vector<Phase>& phases, PolicyMode mode,
                   const SimConfig& cfg) {
  return Sim(mode, cfg).run(phases);
}

SimResult simulate(const Trace& trace, PolicyMode mode, const SimConfig& cfg) {
  std::vector<Phase> phases;
  phases.push_back({trace, 0.0});
  return simulate(phases, mode, cfg);
}

void write_metrics_csv(
    const std::filesystem::path& path,
    const std::vector<std::pair<PolicyMode, Metrics>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "mode,total_time_s,throughput_MBps,ssd_fraction,flush_pause_s,stall_s\n";
  char buf[256];
  for (const auto& [mode, m] : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  mode_name(mode).c_str(), m.total_time_s, m.throughput_mbps,
                  m.ssd_fraction, m.flush_pause_s, m.stall_s);
    out << buf;
  }
}

void write_decisions_csv(const std::filesystem::path& path,
                         const std::vector<DecisionRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "stream_idx,percentage,threshold,target\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%u,%.6f,%.6f,%s\n", r.stream_idx,
                  r.percentage, r.threshold,
                  r.target == Device::kSsd ? "ssd" : "hdd");
    out << buf;
  }
}

}  // namespace burstsim

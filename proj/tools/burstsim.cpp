// burstsim: trace generation, randomness analysis, and policy simulation for
// a tiered SSD/HDD write buffer.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "burstsim/config.hpp"
#include "burstsim/detector.hpp"
#include "burstsim/engine.hpp"
#include "burstsim/errors.hpp"
#include "burstsim/trace.hpp"

namespace fs = std::filesystem;
using namespace burstsim;

namespace {

// All outputs land via a temp file in the target directory so a failed run
// never leaves a truncated artifact behind.
template <typename Fn>
void atomic_write(const fs::path& path, Fn&& writer) {
  fs::path tmp = path;
  tmp += ".tmp";
  writer(tmp);
  fs::rename(tmp, path);
}

uint64_t effective_seed(uint64_t flag_seed) {
  if (const char* env = std::getenv("BURSTSIM_SEED")) {
    try {
      size_t used = 0;
      const std::string s(env);
      const uint64_t v = std::stoull(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("BURSTSIM_SEED must be an unsigned integer");
    }
  }
  return flag_seed;
}

Pattern parse_pattern(const std::string& name) {
  if (name == "contig") return Pattern::kSegmentedContiguous;
  if (name == "random") return Pattern::kSegmentedRandom;
  if (name == "strided") return Pattern::kStrided;
  throw ConfigError("unknown pattern '" + name + "'");
}

int cmd_gen(const std::string& pattern, uint32_t procs,
            const std::string& total, const std::string& req, uint64_t seed,
            uint32_t file, const std::string& interleave,
            const std::string& mix_path, const fs::path& out) {
  PatternSpec spec;
  spec.pattern = parse_pattern(pattern);
  spec.procs = procs;
  spec.total_bytes = parse_size(total);
  spec.req_bytes = parse_size(req);
  spec.file = file;
  spec.seed = effective_seed(seed);
  const Interleave il = interleave == "random" ? Interleave::kRandom
                                               : Interleave::kRoundRobin;
  if (interleave != "random" && interleave != "rr")
    throw ConfigError("interleave must be rr or random");

  if (!mix_path.empty()) {
    Trace other = Trace::load_csv(mix_path);
    if (!other.empty() && spec.file <= other.max_file())
      spec.file = other.max_file() + 1;  // keep mixed file ids distinct
    Trace fresh = Trace::generate(spec, il);
    Trace mixed = Trace::mix({other, fresh}, spec.seed);
    atomic_write(out, [&](const fs::path& p) { mixed.save_csv(p); });
  } else {
    Trace fresh = Trace::generate(spec, il);
    atomic_write(out, [&](const fs::path& p) { fresh.save_csv(p); });
  }
  return 0;
}

int cmd_analyze(const fs::path& trace_path, uint32_t window,
                const fs::path& out) {
  const Trace trace = Trace::load_csv(trace_path);
  if (trace.empty())
    std::cerr << "warning: empty trace, no streams to score\n";
  double sum = 0;
  size_t scored = 0;
  atomic_write(out, [&](const fs::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw ParseError("cannot write " + p.string());
    os << "stream_idx,N,S,percentage\n";
    if (trace.empty()) return;
    uint32_t idx = 0;
    char buf[96];
    for (const auto& win : group(trace.requests(), window)) {
      if (win.size() >= 2) {
        const StreamStats st = stream_stats(win, trace.req_bytes());
        std::snprintf(buf, sizeof buf, "%u,%u,%u,%.6f\n", idx, st.n, st.s,
                      st.percentage);
        os << buf;
        sum += st.percentage;
        ++scored;
      }
      ++idx;
    }
  });
  std::printf("mean percentage: %.6f\n", scored ? sum / scored : 0.0);
  return 0;
}

SimConfig config_for(const std::string& cfg_path) {
  if (cfg_path.empty()) return SimConfig{};
  return load_config(cfg_path);
}

std::vector<Phase> phases_for(const std::vector<std::string>& trace_paths,
                              double gap) {
  std::vector<Phase> phases;
  for (size_t i = 0; i < trace_paths.size(); ++i)
    phases.push_back({Trace::load_csv(trace_paths[i]), i == 0 ? 0.0 : gap});
  return phases;
}

int cmd_simulate(const std::vector<std::string>& trace_paths,
                 const std::string& mode_str, const std::string& cfg_path,
                 double gap, const std::string& out,
                 const std::string& decisions_out) {
  const SimConfig cfg = config_for(cfg_path);
  const PolicyMode mode = parse_mode(mode_str);
  const SimResult res = simulate(phases_for(trace_paths, gap), mode, cfg);

  std::vector<std::pair<PolicyMode, Metrics>> rows{{mode, res.metrics}};
  if (!out.empty()) {
    atomic_write(out, [&](const fs::path& p) { write_metrics_csv(p, rows); });
  } else {
    const Metrics& m = res.metrics;
    std::printf(
        "mode,total_time_s,throughput_MBps,ssd_fraction,flush_pause_s,"
        "stall_s\n%s,%.6f,%.6f,%.6f,%.6f,%.6f\n",
        mode_name(mode).c_str(), m.total_time_s, m.throughput_mbps,
        m.ssd_fraction, m.flush_pause_s, m.stall_s);
  }
  if (!decisions_out.empty())
    atomic_write(decisions_out,
                 [&](const fs::path& p) { write_decisions_csv(p, res.decisions); });
  return 0;
}

int cmd_compare(const std::string& trace_path, const std::string& cfg_path,
                const std::string& out) {
  const SimConfig cfg = config_for(cfg_path);
  const Trace trace = Trace::load_csv(trace_path);
  std::vector<std::pair<PolicyMode, Metrics>> rows;
  for (PolicyMode mode : {PolicyMode::kHddOnly, PolicyMode::kFullBuffer,
                          PolicyMode::kStaticMarks, PolicyMode::kAdaptive})
    rows.emplace_back(mode, simulate(trace, mode, cfg).metrics);
  atomic_write(out, [&](const fs::path& p) { write_metrics_csv(p, rows); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tiered write-buffer simulator"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic trace");
  std::string pattern, total, req, interleave = "rr", mix_path;
  uint32_t procs = 1, file = 0;
  uint64_t seed = 42;
  std::string gen_out;
  gen->add_option("--pattern", pattern, "contig|random|strided")->required();
  gen->add_option("--procs", procs, "process count")->required();
  gen->add_option("--total", total, "total bytes, e.g. 16GiB")->required();
  gen->add_option("--req", req, "request bytes, e.g. 256KiB")->required();
  gen->add_option("--seed", seed, "rng seed (BURSTSIM_SEED overrides)");
  gen->add_option("--file", file, "file id for the generated trace");
  gen->add_option("--interleave", interleave, "rr|random arrival order");
  gen->add_option("--mix", mix_path, "mix the fresh trace into this one");
  gen->add_option("--out", gen_out, "output trace CSV")->required();

  // analyze
  auto* an = app.add_subcommand("analyze", "score randomness per stream");
  std::string an_trace, an_out;
  uint32_t window = 128;
  an->add_option("trace", an_trace, "trace CSV")->required();
  an->add_option("--window", window, "requests per stream")
      ->check(CLI::Range(2u, 1u << 20));
  an->add_option("--out", an_out, "stats CSV")->required();

  // simulate
  auto* sim = app.add_subcommand("simulate", "run one policy over traces");
  std::vector<std::string> sim_traces;
  std::string sim_mode = "ssdup-adaptive", sim_cfg, sim_out, sim_dec;
  double gap = 0.0;
  sim->add_option("traces", sim_traces, "trace CSVs, one phase each")
      ->required();
  sim->add_option("--mode", sim_mode,
                  "hdd-only|full-bb|ssdup-static|ssdup-adaptive");
  sim->add_option("--config", sim_cfg, "config JSON");
  sim->add_option("--gap", gap, "idle seconds between phases");
  sim->add_option("--out", sim_out, "metrics CSV (stdout when omitted)");
  sim->add_option("--log-decisions", sim_dec, "per-stream decision CSV");

  // compare
  auto* cmp = app.add_subcommand("compare", "run all four policies");
  std::string cmp_trace, cmp_cfg, cmp_out;
  cmp->add_option("trace", cmp_trace, "trace CSV")->required();
  cmp->add_option("--config", cmp_cfg, "config JSON");
  cmp->add_option("--out", cmp_out, "metrics CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (gen->parsed())
      return cmd_gen(pattern, procs, total, req, seed, file, interleave,
                     mix_path, gen_out);
    if (an->parsed()) return cmd_analyze(an_trace, window, an_out);
    if (sim->parsed())
      return cmd_simulate(sim_traces, sim_mode, sim_cfg, gap, sim_out, sim_dec);
    if (cmp->parsed()) return cmd_compare(cmp_trace, cmp_cfg, cmp_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

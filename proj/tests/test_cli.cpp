// End-to-end checks that drive the installed binary. The binary path arrives
// as the last command-line argument (wired up by the build).
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::string g_binary;

struct CmdResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

size_t line_count(const std::string& text) {
  size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("burstsim-cli-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

// runs `<env> binary <args>` with stdout/stderr captured in dir
CmdResult run(const TempDir& dir, const std::string& args,
              const std::string& env = "") {
  const fs::path out = dir.path / ".stdout";
  const fs::path err = dir.path / ".stderr";
  std::string cmd = env.empty() ? "" : env + " ";
  cmd += g_binary + " " + args + " >" + out.string() + " 2>" + err.string();
  const int rc = std::system(cmd.c_str());
  CmdResult r;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string q(const fs::path& p) { return p.string(); }

}  // namespace

TEST_CASE("generate a trace and read back its shape") {
  TempDir dir;
  const fs::path trace = dir.path / "t.csv";
  CmdResult r = run(dir, "gen --pattern random --procs 4 --total 4MiB "
                         "--req 256KiB --seed 7 --out " + q(trace));
  REQUIRE(r.code == 0);
  REQUIRE(fs::exists(trace));
  const std::string body = slurp(trace);
  CHECK(first_line(body) == "seq,proc,file,offset,size");
  CHECK(line_count(body) == 17);  // header + 4MiB/256KiB requests
  CHECK(body.find("\r") == std::string::npos);
}

TEST_CASE("four contiguous megabyte writes make four rows") {
  TempDir dir;
  const fs::path trace = dir.path / "t.csv";
  CmdResult r = run(dir, "gen --pattern contig --procs 4 --total 4MiB "
                         "--req 1MiB --seed 1 --out " + q(trace));
  REQUIRE(r.code == 0);
  CHECK(line_count(slurp(trace)) == 5);
}

TEST_CASE("a striped checkpoint of 16GiB in 256KiB pieces") {
  TempDir dir;
  const fs::path trace = dir.path / "t.csv";
  CmdResult r = run(dir, "gen --pattern strided --procs 16 --total 16GiB "
                         "--req 256KiB --seed 1 --out " + q(trace));
  REQUIRE(r.code == 0);
  CHECK(line_count(slurp(trace)) == 65537);  // 65536 requests + header
}

TEST_CASE("identical flags give byte-identical traces") {
  TempDir dir;
  const fs::path a = dir.path / "a.csv";
  const fs::path b = dir.path / "b.csv";
  const std::string flags =
      "gen --pattern random --procs 8 --total 8MiB --req 64KiB --seed 11 ";
  REQUIRE(run(dir, flags + "--out " + q(a)).code == 0);
  REQUIRE(run(dir, flags + "--out " + q(b)).code == 0);
  CHECK(slurp(a) == slurp(b));

  const fs::path c = dir.path / "c.csv";
  REQUIRE(run(dir, "gen --pattern random --procs 8 --total 8MiB --req 64KiB "
                   "--seed 12 --out " + q(c)).code == 0);
  CHECK(slurp(a) != slurp(c));
}

TEST_CASE("environment seed wins over the flag") {
  TempDir dir;
  const fs::path a = dir.path / "a.csv";
  const fs::path b = dir.path / "b.csv";
  REQUIRE(run(dir, "gen --pattern random --procs 4 --total 2MiB --req 64KiB "
                   "--seed 5 --out " + q(a), "BURSTSIM_SEED=99").code == 0);
  REQUIRE(run(dir, "gen --pattern random --procs 4 --total 2MiB --req 64KiB "
                   "--seed 99 --out " + q(b)).code == 0);
  CHECK(slurp(a) == slurp(b));

  CmdResult bad = run(dir, "gen --pattern random --procs 4 --total 2MiB "
                           "--req 64KiB --seed 5 --out " + q(a),
                      "BURSTSIM_SEED=banana");
  CHECK(bad.code != 0);
}

TEST_CASE("mixing drops a fresh pattern into an existing trace") {
  TempDir dir;
  const fs::path base = dir.path / "base.csv";
  REQUIRE(run(dir, "gen --pattern contig --procs 4 --total 4MiB --req 256KiB "
                   "--seed 3 --out " + q(base)).code == 0);
  const fs::path mixed = dir.path / "mixed.csv";
  CmdResult r = run(dir, "gen --pattern random --procs 4 --total 4MiB "
                         "--req 256KiB --seed 3 --mix " + q(base) +
                         " --out " + q(mixed));
  REQUIRE(r.code == 0);
  const std::string body = slurp(mixed);
  CHECK(line_count(body) == 33);  // 16 + 16 requests + header
  CHECK(body.find(",1,") != std::string::npos);  // fresh rows got file id 1

  CmdResult sized = run(dir, "gen --pattern random --procs 4 --total 4MiB "
                             "--req 128KiB --seed 3 --mix " + q(base) +
                             " --out " + q(mixed));
  CHECK(sized.code != 0);  // request size clashes with the base trace
}

TEST_CASE("analyze scores every full window and prints the mean") {
  TempDir dir;
  const fs::path trace = dir.path / "t.csv";
  REQUIRE(run(dir, "gen --pattern random --procs 16 --total 128MiB "
                   "--req 256KiB --seed 2 --out " + q(trace)).code == 0);
  const fs::path stats = dir.path / "stats.csv";
  CmdResult r = run(dir, "analyze " + q(trace) + " --window 128 --out " +
                         q(stats));
  REQUIRE(r.code == 0);
  const std::string body = slurp(stats);
  CHECK(first_line(body) == "stream_idx,N,S,percentage");
  CHECK(line_count(body) == 5);  // 512 requests -> 4 windows
  CHECK(r.out.find("mean percentage: ") != std::string::npos);
}

TEST_CASE("analyze refuses a window of one") {
  TempDir dir;
  const fs::path trace = dir.path / "t.csv";
  REQUIRE(run(dir, "gen --pattern random --procs 4 --total 2MiB --req 256KiB "
                   "--seed 2 --out " + q(trace)).code == 0);
  CmdResult r = run(dir, "analyze " + q(trace) + " --window 1 --out " +
                         q(dir.path / "s.csv"));
  CHECK(r.code != 0);
}

TEST_CASE("analyzing an empty trace warns and writes only the header") {
  TempDir dir;
  const fs::path trace = dir.path / "empty.csv";
  {
    std::ofstream out(trace, std::ios::binary);
    out << "seq,proc,file,offset,size\n";
  }
  const fs::path stats = dir.path / "stats.csv";
  CmdResult r = run(dir, "analyze " + q(trace) + " --out " + q(stats));
  CHECK(r.code == 0);
  CHECK(slurp(stats) == "stream_idx,N,S,percentage\n");
  CHECK(!r.err.empty());
}

TEST_CASE("parse errors carry the line number and leave no output") {
  TempDir dir;
  const fs::path trace = dir.path / "broken.csv";
  {
    std::ofstream out(trace, std::ios::binary);
    out << "seq,proc,file,offset,size\n0,0,0,zero,262144\n";
  }
  const fs::path stats = dir.path / "stats.csv";
  CmdResult r = run(dir, "analyze " + q(trace) + " --out " + q(stats));
  CHECK(r.code != 0);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(!fs::exists(stats));
}

TEST_CASE("simulate emits the metrics row") {
  TempDir dir;
  const fs::path trace = dir.path / "t.csv";
  REQUIRE(run(dir, "gen --pattern random --procs 8 --total 32MiB --req 256KiB "
                   "--seed 4 --out " + q(trace)).code == 0);
  const fs::path metrics = dir.path / "m.csv";
  const fs::path decisions = dir.path / "d.csv";
  CmdResult r = run(dir, "simulate " + q(trace) +
                         " --mode ssdup-adaptive --out " + q(metrics) +
                         " --log-decisions " + q(decisions));
  REQUIRE(r.code == 0);
  const std::string body = slurp(metrics);
  CHECK(first_line(body) ==
        "mode,total_time_s,throughput_MBps,ssd_fraction,flush_pause_s,stall_s");
  CHECK(line_count(body) == 2);
  CHECK(body.find("ssdup-adaptive,") != std::string::npos);
  const std::string dec = slurp(decisions);
  CHECK(first_line(dec) == "stream_idx,percentage,threshold,target");
  CHECK(line_count(dec) == 2);  // 128 requests scored as one stream

  SUBCASE("stdout fallback when --out is omitted") {
    CmdResult piped = run(dir, "simulate " + q(trace) + " --mode hdd-only");
    REQUIRE(piped.code == 0);
    CHECK(first_line(piped.out) ==
          "mode,total_time_s,throughput_MBps,ssd_fraction,flush_pause_s,"
          "stall_s");
    CHECK(piped.out.find("hdd-only,") != std::string::npos);
  }
}

TEST_CASE("simulate strings phases together with gaps") {
  TempDir dir;
  const fs::path a = dir.path / "a.csv";
  const fs::path b = dir.path / "b.csv";
  REQUIRE(run(dir, "gen --pattern random --procs 4 --total 8MiB --req 256KiB "
                   "--seed 5 --out " + q(a)).code == 0);
  REQUIRE(run(dir, "gen --pattern contig --procs 4 --total 8MiB --req 256KiB "
                   "--seed 6 --out " + q(b)).code == 0);
  const fs::path metrics = dir.path / "m.csv";
  CmdResult r = run(dir, "simulate " + q(a) + " " + q(b) +
                         " --gap 2.5 --mode full-bb --out " + q(metrics));
  REQUIRE(r.code == 0);
  CHECK(line_count(slurp(metrics)) == 2);
}

TEST_CASE("compare covers all four policies") {
  TempDir dir;
  const fs::path trace = dir.path / "t.csv";
  REQUIRE(run(dir, "gen --pattern random --procs 8 --total 32MiB --req 256KiB "
                   "--seed 8 --out " + q(trace)).code == 0);
  const fs::path metrics = dir.path / "cmp.csv";
  CmdResult r = run(dir, "compare " + q(trace) + " --out " + q(metrics));
  REQUIRE(r.code == 0);
  const std::string body = slurp(metrics);
  CHECK(line_count(body) == 5);
  CHECK(body.find("hdd-only,") != std::string::npos);
  CHECK(body.find("full-bb,") != std::string::npos);
  CHECK(body.find("ssdup-static,") != std::string::npos);
  CHECK(body.find("ssdup-adaptive,") != std::string::npos);

  // hdd-only stages nothing; full-bb stages everything
  std::istringstream lines(body);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    std::vector<std::string> cols;
    std::istringstream ls(line);
    std::string col;
    while (std::getline(ls, col, ',')) cols.push_back(col);
    REQUIRE(cols.size() == 6);
    if (cols[0] == "hdd-only") CHECK(cols[3] == "0.000000");
    if (cols[0] == "full-bb") CHECK(cols[3] == "1.000000");
  }
}

TEST_CASE("config file feeds the simulation") {
  TempDir dir;
  const fs::path trace = dir.path / "t.csv";
  REQUIRE(run(dir, "gen --pattern random --procs 4 --total 8MiB --req 256KiB "
                   "--seed 4 --out " + q(trace)).code == 0);

  const fs::path cfg = dir.path / "cfg.json";
  {
    std::ofstream out(cfg, std::ios::binary);
    out << R"({
      "devices": {
        "hdd": {"seq_bw": 272629760, "seek_base": 0.0016,
                "seek_per_byte": 1e-13, "per_req_overhead": 1e-4},
        "ssd": {"seq_bw": 230686720, "seek_base": 0, "seek_per_byte": 0,
                "per_req_overhead": 2e-5}
      },
      "window_W": 64, "percent_list_capacity": 10, "default_threshold": 0.5,
      "region_bytes": 16777216, "gate_check_interval_s": 0.1, "cfq_Q": 128,
      "static_high": 0.45, "static_low": 0.3, "seed": 42
    })";
  }
  const fs::path metrics = dir.path / "m.csv";
  const fs::path decisions = dir.path / "d.csv";
  CmdResult r = run(dir, "simulate " + q(trace) + " --config " + q(cfg) +
                         " --out " + q(metrics) + " --log-decisions " +
                         q(decisions));
  REQUIRE(r.code == 0);
  // window 64 over 32 requests -> one partial stream scored
  CHECK(line_count(slurp(decisions)) == 2);

  SUBCASE("unknown config keys are rejected by name") {
    const fs::path bad = dir.path / "bad.json";
    {
      std::ofstream out(bad, std::ios::binary);
      out << R"({"elevator": "noop"})";
    }
    CmdResult e = run(dir, "simulate " + q(trace) + " --config " + q(bad) +
                           " --out " + q(metrics));
    CHECK(e.code != 0);
    CHECK(e.err.find("elevator") != std::string::npos);
  }
}

TEST_CASE("bad invocations exit nonzero") {
  TempDir dir;
  CHECK(run(dir, "").code != 0);
  CHECK(run(dir, "frobnicate").code != 0);
  CHECK(run(dir, "gen --pattern random --procs 4 --total 4MiB --req 256KiB "
                 "--seed 1").code != 0);  // no --out
  CHECK(run(dir, "gen --pattern mosaic --procs 4 --total 4MiB --req 256KiB "
                 "--seed 1 --out " + q(dir.path / "t.csv")).code != 0);
  CHECK(run(dir, "gen --pattern random --procs 5 --total 4MiB --req 256KiB "
                 "--seed 1 --out " + q(dir.path / "t.csv")).code != 0);
  CHECK(run(dir, "analyze " + q(dir.path / "absent.csv") + " --out " +
                 q(dir.path / "s.csv")).code != 0);
  CHECK(run(dir, "simulate " + q(dir.path / "absent.csv") + " --mode turbo")
            .code != 0);
}

int main(int argc, char** argv) {
  if (argc > 1 && argv[argc - 1][0] != '-') g_binary = argv[argc - 1];
  if (g_binary.empty()) {
    std::fprintf(stderr, "usage: test_cli [doctest flags] <burstsim binary>\n");
    return 2;
  }
  doctest::Context ctx(argc - 1, argv);
  return ctx.run();
}

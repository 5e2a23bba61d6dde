#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "burstsim/config.hpp"
#include "burstsim/errors.hpp"

using namespace burstsim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("burstsim-cfg-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write_text(const TempDir& dir, const std::string& name,
                    const std::string& body) {
  const fs::path p = dir.path / name;
  std::ofstream out(p, std::ios::binary);
  out << body;
  return p;
}

}  // namespace

TEST_CASE("defaults are self-consistent") {
  SimConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.hdd.seq_bw == doctest::Approx(272629760.0));
  CHECK(cfg.hdd.seek_base == doctest::Approx(0.0016));
  CHECK(cfg.ssd.seek_base == 0.0);
  CHECK(cfg.ssd.seek_per_byte == 0.0);
  CHECK(cfg.window_w == 128);
  CHECK(cfg.percent_list_capacity == 10);
  CHECK(cfg.default_threshold == 0.5);
  CHECK(cfg.region_bytes == (4ull << 30));
  CHECK(cfg.cfq_q == 128);
  CHECK(cfg.static_high == 0.45);
  CHECK(cfg.static_low == 0.30);
  CHECK(cfg.seed == 42);
}

TEST_CASE("save and load round-trip") {
  TempDir dir;
  SimConfig cfg;
  cfg.window_w = 64;
  cfg.region_bytes = 256ull << 20;
  cfg.hdd.seek_per_byte = 2.5e-13;
  cfg.seed = 7;
  const fs::path p = dir.path / "sim.json";
  save_config(cfg, p);

  const SimConfig back = load_config(p);
  CHECK(back.window_w == 64);
  CHECK(back.region_bytes == (256ull << 20));
  CHECK(back.hdd.seek_per_byte == doctest::Approx(2.5e-13));
  CHECK(back.hdd.seq_bw == cfg.hdd.seq_bw);
  CHECK(back.ssd.per_req_overhead == cfg.ssd.per_req_overhead);
  CHECK(back.default_threshold == cfg.default_threshold);
  CHECK(back.gate_check_interval_s == cfg.gate_check_interval_s);
  CHECK(back.cfq_q == cfg.cfq_q);
  CHECK(back.static_high == cfg.static_high);
  CHECK(back.static_low == cfg.static_low);
  CHECK(back.seed == 7);
}

TEST_CASE("schema is closed in both directions") {
  TempDir dir;
  SimConfig cfg;
  const fs::path good = dir.path / "good.json";
  save_config(cfg, good);
  CHECK_NOTHROW(load_config(good));

  SUBCASE("unknown top-level key is named") {
    std::ifstream in(good);
    std::string body((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    body.insert(body.find('{') + 1, "\"idle_reset\": true,");
    const fs::path p = write_text(dir, "extra.json", body);
    CHECK_THROWS_WITH_AS(load_config(p),
                         doctest::Contains("idle_reset"), ConfigError);
  }
  SUBCASE("missing top-level key is named") {
    const fs::path p = write_text(dir, "missing.json", R"({
      "devices": {
        "hdd": {"seq_bw": 1e8, "seek_base": 0, "seek_per_byte": 0, "per_req_overhead": 0},
        "ssd": {"seq_bw": 1e8, "seek_base": 0, "seek_per_byte": 0, "per_req_overhead": 0}
      },
      "window_W": 128, "percent_list_capacity": 10, "default_threshold": 0.5,
      "region_bytes": 1048576, "gate_check_interval_s": 0.1, "cfq_Q": 128,
      "static_high": 0.45, "static_low": 0.3
    })");
    CHECK_THROWS_WITH_AS(load_config(p), doctest::Contains("seed"),
                         ConfigError);
  }
  SUBCASE("unknown device field is named") {
    const fs::path p = write_text(dir, "dev.json", R"({
      "devices": {
        "hdd": {"seq_bw": 1e8, "seek_base": 0, "seek_per_byte": 0,
                "per_req_overhead": 0, "rpm": 7200},
        "ssd": {"seq_bw": 1e8, "seek_base": 0, "seek_per_byte": 0, "per_req_overhead": 0}
      },
      "window_W": 128, "percent_list_capacity": 10, "default_threshold": 0.5,
      "region_bytes": 1048576, "gate_check_interval_s": 0.1, "cfq_Q": 128,
      "static_high": 0.45, "static_low": 0.3, "seed": 42
    })");
    CHECK_THROWS_WITH_AS(load_config(p), doctest::Contains("rpm"),
                         ConfigError);
  }
  SUBCASE("missing device field is named") {
    const fs::path p = write_text(dir, "dev2.json", R"({
      "devices": {
        "hdd": {"seq_bw": 1e8, "seek_base": 0, "seek_per_byte": 0, "per_req_overhead": 0},
        "ssd": {"seq_bw": 1e8, "seek_base": 0, "per_req_overhead": 0}
      },
      "window_W": 128, "percent_list_capacity": 10, "default_threshold": 0.5,
      "region_bytes": 1048576, "gate_check_interval_s": 0.1, "cfq_Q": 128,
      "static_high": 0.45, "static_low": 0.3, "seed": 42
    })");
    CHECK_THROWS_WITH_AS(load_config(p),
                         doctest::Contains("ssd.seek_per_byte"), ConfigError);
  }
  SUBCASE("malformed json reports a parse failure") {
    const fs::path p = write_text(dir, "broken.json", "{ \"devices\": ");
    CHECK_THROWS_WITH_AS(load_config(p), doctest::Contains("parse"),
                         ConfigError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_config(dir.path / "absent.json"), ConfigError);
  }
}

TEST_CASE("out-of-range values are rejected") {
  SimConfig cfg;

  SUBCASE("window of one cannot score pairs") {
    cfg.window_w = 1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("flash profile may not charge seeks") {
    cfg.ssd.seek_base = 0.001;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("water marks ordered") {
    cfg.static_low = 0.8;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("threshold bounded") {
    cfg.default_threshold = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("region must hold at least one byte") {
    cfg.region_bytes = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("queue depth positive") {
    cfg.cfq_q = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("bandwidth positive") {
    cfg.hdd.seq_bw = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("empty history list") {
    cfg.percent_list_capacity = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("negative overhead") {
    cfg.hdd.per_req_overhead = -1e-5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("gate interval positive") {
    cfg.gate_check_interval_s = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
}

TEST_CASE("size strings") {
  CHECK(parse_size("4096") == 4096);
  CHECK(parse_size("256KiB") == 262144);
  CHECK(parse_size("64MiB") == (64ull << 20));
  CHECK(parse_size("4GiB") == (4ull << 30));
  CHECK(parse_size("16 GiB") == (16ull << 30));
  CHECK(parse_size("0") == 0);

  CHECK_THROWS_AS(parse_size(""), ConfigError);
  CHECK_THROWS_AS(parse_size("KiB"), ConfigError);
  CHECK_THROWS_AS(parse_size("-5"), ConfigError);
  CHECK_THROWS_AS(parse_size("256KB"), ConfigError);
  CHECK_THROWS_AS(parse_size("256kib"), ConfigError);
  CHECK_THROWS_AS(parse_size("12.5MiB"), ConfigError);
  CHECK_THROWS_AS(parse_size("64MiB extra"), ConfigError);
}

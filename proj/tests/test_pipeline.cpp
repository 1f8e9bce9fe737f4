#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace periods;

namespace {

std::filesystem::path write(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

RunConfig small_config(const std::filesystem::path& out, int max_len = 4) {
  RunConfig c;
  c.max_len = max_len;
  c.out = out.string();
  return c;
}

std::size_t data_rows(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') ++rows;
  }
  return rows - 1;  // header
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("config parsing") {
    const auto dir = testutil::scratch_dir("config");
    const RunConfig c = load_config(write(dir / "a.ini",
                                          "[representation]\nangle = pi/4\nmultiplier = 3\n"
                                          "[functionals]\nlen = length\n[run]\nseed = 7\n"));
    CHECK(c.angle == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
    CHECK(c.multiplier == 3.0);
    CHECK(c.seed == 7);
    REQUIRE(c.functionals.size() == 1);  // an explicit entry replaces the defaults
    CHECK(c.functionals[0].first == "len");

    CHECK(testutil::error_code_of([&] { load_config(write(dir / "b.ini", "[run]\nsede = 1\n")); }) ==
          ErrorCode::invalid_config);
    CHECK(testutil::error_code_of([&] { load_config(write(dir / "c.ini", "[nope]\nx = 1\n")); }) ==
          ErrorCode::invalid_config);
    CHECK(testutil::error_code_of([&] { load_config(write(dir / "d.ini", "[enumeration]\nmax_len = ten\n")); }) ==
          ErrorCode::invalid_config);
    CHECK(testutil::error_code_of([&] { load_config(dir / "missing.ini"); }) == ErrorCode::io);

    RunConfig g;
    apply_setting(g, "representation", "angle", "pi/3");
    CHECK(g.angle == doctest::Approx(std::numbers::pi / 3).epsilon(1e-15));
    apply_setting(g, "representation", "angle", "0.25");
    CHECK(g.angle == 0.25);
  }

  TEST_CASE("config hash ignores workers and output directory") {
    RunConfig a;
    RunConfig b = a;
    b.workers = 8;
    b.out = "elsewhere";
    CHECK(config_hash(a) == config_hash(b));
    CHECK(dataset_hash(a) == dataset_hash(b));
    CHECK(config_hash(a).size() == 64);
    b.max_len = 11;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(dataset_hash(a) != dataset_hash(b));
    // Grid settings change the report but not the dataset.
    RunConfig c = a;
    c.grid_points = 5;
    CHECK(config_hash(a) != config_hash(c));
    CHECK(dataset_hash(a) == dataset_hash(c));
  }

  TEST_CASE("enumerate writes one row per class") {
    const auto dir = testutil::scratch_dir("enumerate");
    RunConfig c = small_config(dir, 2);
    cmd_enumerate(c);
    const std::string csv = read_file(dir / "classes.csv");
    CHECK(data_rows(csv) == 12);
    CHECK(csv.rfind("# schema_version=1 config_hash=" + config_hash(c), 0) == 0);
    CHECK(csv.find("letter_order=a<A<b<B") != std::string::npos);
  }

  TEST_CASE("spectra is byte-identical across reruns and worker counts, and round-trips") {
    const auto dir = testutil::scratch_dir("spectra");
    RunConfig c = small_config(dir, 6);
    cmd_spectra(c);
    const std::string first = read_file(dir / "dataset.csv");
    const std::string meta = read_file(dir / "dataset.meta.json");
    c.workers = 3;
    cmd_spectra(c);
    CHECK(read_file(dir / "dataset.csv") == first);
    CHECK(read_file(dir / "dataset.meta.json") == meta);

    const auto back = read_dataset(dir, dataset_hash(c));
    REQUIRE(back.has_value());
    const Dataset fresh = collect(build_representation(c), build_functionals(c, 2), collect_options(c));
    REQUIRE(back->records.size() == fresh.records.size());
    for (std::size_t i = 0; i < fresh.records.size(); ++i) {
      CHECK(back->records[i].word == fresh.records[i].word);
      CHECK(back->records[i].jordan_period == fresh.records[i].jordan_period);
      CHECK(back->records[i].cert.is_proximal == fresh.records[i].cert.is_proximal);
    }
    CHECK_FALSE(read_dataset(dir, std::string(64, '0')).has_value());
  }

  TEST_CASE("file representations: missing and corrupted inputs fail before any output") {
    const auto dir = testutil::scratch_dir("rep_errors");
    RunConfig c = small_config(dir / "out");
    c.family = "file";
    c.path = (dir / "missing.json").string();
    CHECK(testutil::error_code_of([&] { cmd_verify(c); }) == ErrorCode::io);

    c.path = write(dir / "det.json", R"({"dim": 2, "generators": [{"matrix": [1.1, 0, 0, 1]}]})").string();
    CHECK(testutil::error_code_of([&] { cmd_verify(c); }) == ErrorCode::invalid_config);
    CHECK_FALSE(std::filesystem::exists(dir / "out" / "verify.json"));

    c.path = write(dir / "ok.json", R"({"dim": 2, "generators": [{"matrix": [4, 0, 0, 0.25]},
                                                                {"matrix": [2.125, 1.875, 1.875, 2.125]}]})")
                 .string();
    cmd_enumerate(c);
    CHECK(data_rows(read_file(dir / "out" / "classes.csv")) == enumerate_classes(Alphabet(2), 4, ClassMode::all).size());
  }

  TEST_CASE("clt rejects a bad grid before doing work") {
    const auto dir = testutil::scratch_dir("clt_grid");
    RunConfig c = small_config(dir);
    c.grid_values = {5.0};
    CHECK(testutil::error_code_of([&] { cmd_clt(c); }) == ErrorCode::invalid_config);
    CHECK_FALSE(std::filesystem::exists(dir / "dataset.csv"));
    CHECK(testutil::error_code_of([&] { run_command(c, "nope"); }) == ErrorCode::invalid_config);
  }

  TEST_CASE("synthetic clt writes a report and histogram") {
    const auto dir = testutil::scratch_dir("clt_synth");
    RunConfig c = small_config(dir);
    c.family = "synthetic";
    c.synthetic.classes = 100'000;
    const Json summary = cmd_clt(c);
    CHECK(summary.is_object());
    const Json report = Json::parse(read_file(dir / "clt_report.json"));
    CHECK(report["schema_version"] == 1);
    CHECK(report["config_hash"] == config_hash(c));
    const std::string hist = read_file(dir / "clt_histogram.csv");
    CHECK(hist.find("bin_lo,bin_hi,count,fraction,gaussian_mass") != std::string::npos);
    CHECK(data_rows(hist) == 34);  // 32 bins of width 0.25 plus two tails
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "east/experiments.hpp"

using namespace eastsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::path("tmp_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("backend parsing") {
  CHECK(backend_from_string("mps") == Backend::Mps);
  CHECK(backend_from_string("exact") == Backend::Exact);
  CHECK_THROWS(backend_from_string("dense"));
}

TEST_CASE("preset resolution fills only unset fields") {
  ExperimentConfig cfg;
  cfg.figure = "fig2";
  auto r = cfg.resolved();
  CHECK(r.length == 16);
  CHECK(r.total_time == doctest::Approx(200.0));
  CHECK(r.dt == doctest::Approx(0.05));
  CHECK(r.drive_sizes == std::vector<int>{3});

  cfg.preset = "paper";
  cfg.length = 12;
  cfg.total_time = 25.0;
  r = cfg.resolved();
  CHECK(r.length == 12);
  CHECK(r.total_time == doctest::Approx(25.0));

  cfg.preset = "bench";
  CHECK_THROWS(cfg.resolved());
  cfg.preset = "desk";
  cfg.figure = "fig9";
  CHECK_THROWS(cfg.resolved());
  cfg.figure = "fig2";
  cfg.drive_sizes = {7};  // exceeds L/2 at L=12
  CHECK_THROWS(cfg.resolved());
  cfg.drive_sizes.clear();
  cfg.rho_step = -1.0;
  CHECK_THROWS(cfg.resolved());
}

TEST_CASE("config files load with overrides applied") {
  TempDir dir("config");
  const auto path = dir.path / "cfg.json";
  std::ofstream(path) << R"({
    "figure": "fig3a",
    "preset": "desk",
    "length": 12,
    "dt": 0.02,
    "backend": "exact",
    "rho_min": 1.0, "rho_max": 2.0, "rho_step": 0.5,
    "out_dir": "somewhere"
  })";
  auto cfg = load_experiment_config(path.string());
  CHECK(cfg.figure == "fig3a");
  CHECK(cfg.length == 12);
  CHECK(cfg.dt == doctest::Approx(0.02));
  CHECK(cfg.backend == Backend::Exact);
  CHECK(cfg.out_dir == "somewhere");
  auto r = cfg.resolved();
  CHECK(r.total_time == doctest::Approx(400.0));  // from the desk preset
  CHECK_THROWS(load_experiment_config("missing.json"));
}

TEST_CASE("both backends record the same trajectory") {
  auto spec = make_model(ChainKind::Heterojunction, 10, 3, 0.99, 2.0);
  ProductStateSpec init;
  init.pattern = "1110000000";
  TrotterSchedule sched;
  sched.dt = 0.01;
  sched.total_time = 10.0;
  sched.record_interval = 2.0;
  sched.chi_max = 64;
  sched.cutoff = 1e-12;
  auto mps = run_evolution(spec, init, sched, Backend::Mps);
  auto exact = run_evolution(spec, init, sched, Backend::Exact);
  REQUIRE(mps.rows() == exact.rows());
  for (int row = 0; row < mps.rows(); ++row) {
    CHECK(mps.times[row] == doctest::Approx(exact.times[row]));
    for (int i = 0; i < 10; ++i)
      CHECK(std::abs(mps.occupation[row][i] - exact.occupation[row][i]) < 1e-4);
    for (int r = 0; r < 9; ++r)
      CHECK(std::abs(mps.entropy[row][r] - exact.entropy[row][r]) < 1e-4);
  }
  CHECK(exact.metadata.at("backend") == "exact");
}

TEST_CASE("superposition residual: exact additivity gives zero") {
  std::vector<double> a{0.0, 1.0, 2.0, 3.0};
  std::vector<double> b{0.0, 0.5, 1.0, 0.5};
  std::vector<double> sum{9.0, 1.5, 3.0, 3.5};  // t=0 entry ignored
  CHECK(superposition_residual(sum, a, b) == doctest::Approx(0.0));
  std::vector<double> off{9.0, 1.5, 3.0, 7.0};
  CHECK(superposition_residual(off, a, b) > 0.0);
  CHECK_THROWS(superposition_residual({1.0}, {1.0, 2.0}, {1.0, 2.0}));
}

TEST_CASE("pearson correlation on exact linear relations") {
  std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> up{2, 4, 6, 8, 10};
  std::vector<double> down{5, 4, 3, 2, 1};
  CHECK(pearson_correlation(x, up) == doctest::Approx(1.0));
  CHECK(pearson_correlation(x, down) == doctest::Approx(-1.0));
}

TEST_CASE("local maxima are strict interior peaks") {
  CHECK(local_maxima({0, 1, 0, 2, 0}) == std::vector<int>{1, 3});
  CHECK(local_maxima({0, 1, 2, 3}).empty());
  CHECK(local_maxima({0, 1, 1, 0}).empty());  // plateau is not strict
  CHECK(local_maxima({5.0}).empty());
}

TEST_CASE("fig3a scan covers the full grid") {
  TempDir dir("fig3a");
  ExperimentConfig cfg;
  cfg.figure = "fig3a";
  cfg.length = 8;
  cfg.drive_sizes = {2};
  cfg.total_time = 5.0;
  cfg.dt = 0.1;
  cfg.backend = Backend::Exact;
  cfg.rho_min = 0.5;
  cfg.rho_max = 2.0;
  cfg.rho_step = 0.5;
  cfg.out_dir = dir.path.string();
  auto res = run_fig3a(cfg);
  REQUIRE(res.rows.size() == 4);
  for (std::size_t k = 0; k < res.rows.size(); ++k) {
    CHECK(res.rows[k].status == "ok");
    CHECK(res.rows[k].rho0 == doctest::Approx(0.5 + 0.5 * k));
    CHECK(res.rows[k].mid_entropy >= 0.0);
  }
  CHECK(fs::exists(dir.path / "fig3a_scan.csv"));
}

TEST_CASE("fig4 pipeline writes all component runs") {
  TempDir dir("fig4");
  ExperimentConfig cfg;
  cfg.figure = "fig4";
  cfg.length = 8;
  cfg.drive_sizes = {3};
  cfg.total_time = 5.0;
  cfg.dt = 0.1;
  cfg.record_interval = 1.0;
  cfg.backend = Backend::Exact;
  cfg.out_dir = dir.path.string();
  auto res = run_fig4(cfg);
  CHECK(res.bipolar.rows() == 6);
  CHECK(res.east.rows() == 6);
  CHECK(res.west.rows() == 6);
  CHECK(res.residual >= 0.0);
  for (const char* f : {"fig4_bipolar.csv", "fig4_east.csv", "fig4_west.csv",
                        "fig4_summary.csv"})
    CHECK(fs::exists(dir.path / f));
}

TEST_CASE("fig2 outputs are deterministic across runs") {
  auto run = [](const std::string& name) {
    TempDir dir(name);
    ExperimentConfig cfg;
    cfg.figure = "fig2";
    cfg.length = 8;
    cfg.drive_sizes = {2};
    cfg.total_time = 5.0;
    cfg.dt = 0.05;
    cfg.backend = Backend::Exact;
    cfg.out_dir = dir.path.string();
    run_fig2(cfg);
    return slurp(dir.path / "fig2_timeseries.csv");
  };
  const auto a = run("det_a");
  const auto b = run("det_b");
  CHECK(a == b);
  CHECK(a.substr(0, 2) == "t,");
}

TEST_CASE("plot scripts are emitted next to the results") {
  TempDir dir("plots");
  emit_plots(dir.path.string());
  for (const char* f : {"plot_fig1.py", "plot_fig2.py", "plot_fig3a.py",
                        "plot_fig3b.py", "plot_fig4.py"}) {
    CHECK(fs::exists(dir.path / f));
    CHECK(slurp(dir.path / f).find("matplotlib") != std::string::npos);
  }
}

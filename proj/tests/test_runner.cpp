#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "wavesrc/io.hpp"
#include "wavesrc/runner.hpp"

using wavesrc::cdouble;
using wavesrc::Grid;
using wavesrc::kPi;
using wavesrc::Point;
namespace gm = wavesrc::gmig;
namespace rn = wavesrc::runner;
namespace wv = wavesrc::waves;
namespace fs = std::filesystem;

namespace {

std::string acoustic_config(const std::string& outdir, int n = 64,
                            double q = 8.0) {
  std::ostringstream s;
  s << R"({
  "kind": "acoustic",
  "d": 2,
  "grid": {"n": )"
    << n << R"(, "length": 1.0},
  "order_m": 2.0,
  "strengths": {
    "covariance": [{"center": [0.5, 0.5], "width": 0.05, "amplitude": 1.0}],
    "relation": [{"center": [0.5, 0.5], "width": 0.05, "amplitude": 0.5,
                  "phase": 1.0471975511965976}]
  },
  "band": {"q_values": [)"
    << q << R"(], "step": 0.5, "shifts": [0.0, 4.0, 8.0]},
  "directions": 8,
  "seed": 11,
  "output": ")"
    << outdir << R"("
})";
  return s.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

} // namespace

TEST_CASE("field container round-trips exactly") {
  const Grid grid(2, 16, 1.0);
  gm::FieldRealization f;
  f.grid = grid;
  f.ncomp = 2;
  f.order_m = 1.5;
  f.delta = 0.25;
  f.seed = 99;
  f.values.resize(grid.node_count() * 2);
  for (std::size_t i = 0; i < f.values.size(); ++i)
    f.values[i] = cdouble(std::sin(0.1 * i), std::cos(0.2 * i));

  const std::string path = "/tmp/wavesrc_test_field.bin";
  wavesrc::io::save_field(path, f);
  const auto g = wavesrc::io::load_field(path);
  CHECK(g.grid == f.grid);
  CHECK(g.ncomp == f.ncomp);
  CHECK(g.order_m == f.order_m);
  CHECK(g.delta == f.delta);
  CHECK(g.seed == f.seed);
  CHECK(g.values == f.values);
  std::remove(path.c_str());
}

TEST_CASE("config parsing and defaults") {
  const auto c = rn::parse_config(acoustic_config("/tmp/wavesrc_run"));
  CHECK(c.kind.model == wv::Model::Acoustic);
  CHECK(c.d == 2);
  CHECK(c.grid.n == 64);
  CHECK(c.order_m == 2.0);
  CHECK(c.delta == 0.0); // default: filled in later as 2 pi / L
  CHECK(rn::effective_delta(c) == doctest::Approx(2.0 * kPi));
  CHECK(c.q_values == std::vector<double>{8.0});
  CHECK(c.shifts.size() == 3);
  CHECK(!c.ensemble);
  CHECK(c.seed == 11);

  CHECK_THROWS_AS(rn::parse_config("{not json"), wavesrc::ConfigError);
  CHECK_THROWS_AS(rn::parse_config("{}"), wavesrc::ConfigError);
}

TEST_CASE("order interval per wave kind") {
  CHECK(rn::order_interval(wv::Model::Acoustic, 2) ==
        std::pair<double, double>(-2.0, 2.0));
  CHECK(rn::order_interval(wv::Model::Acoustic, 3) ==
        std::pair<double, double>(-1.0, 3.0));
  CHECK(rn::order_interval(wv::Model::Biharmonic, 2) ==
        std::pair<double, double>(-4.0, 2.0));
  CHECK(rn::order_interval(wv::Model::Biharmonic, 3) ==
        std::pair<double, double>(-3.0, 3.0));
  CHECK(rn::order_interval(wv::Model::Electromagnetic, 3) ==
        std::pair<double, double>(-1.0, 3.0));
  CHECK(rn::order_interval(wv::Model::Elastic, 2) ==
        std::pair<double, double>(-2.0, 2.0));
}

TEST_CASE("validation rejects out-of-interval order, citing the interval") {
  auto c = rn::parse_config(acoustic_config("/tmp/wavesrc_run"));
  c.order_m = 2.5; // acoustic d=2 admits (-2, 2]
  try {
    rn::validate_config(c);
    FAIL("expected a config error");
  } catch (const wavesrc::ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("-2") != std::string::npos);
    CHECK(msg.find("2]") != std::string::npos);
  }
}

TEST_CASE("validation rejects support touching the boundary margin") {
  auto c = rn::parse_config(acoustic_config("/tmp/wavesrc_run"));
  c.strengths.covariance[0].center = Point{0.05, 0.5, 0.0};
  CHECK_THROWS_AS(rn::validate_config(c), wavesrc::ConfigError);
}

TEST_CASE("validation rejects bands beyond the frequency budget") {
  auto c = rn::parse_config(acoustic_config("/tmp/wavesrc_run", 64, 128.0));
  // n = 64: budget 0.5 * pi * 64 ~ 100.5 < 2 * 128.
  CHECK_THROWS_AS(rn::validate_config(c), wavesrc::ConfigError);
}

TEST_CASE("validation rejects odd direction counts and bad shifts") {
  auto c = rn::parse_config(acoustic_config("/tmp/wavesrc_run"));
  c.direction_count = 7;
  CHECK_THROWS_AS(rn::validate_config(c), wavesrc::ConfigError);
  c.direction_count = 8;
  c.shifts = {1.0, 2.0};
  CHECK_THROWS_AS(rn::validate_config(c), wavesrc::ConfigError);
}

TEST_CASE("analytic shape transform matches lattice quadrature") {
  rn::ShapeSpec shape;
  shape.center = Point{0.45, 0.55, 0.0};
  shape.width = 0.05;
  shape.amplitude = 0.8;
  shape.phase = 0.6;
  const Grid grid(2, 128, 1.0);
  const Point xi{14.0, -9.0, 0.0};
  cdouble lattice(0.0, 0.0);
  const double h2 = grid.spacing() * grid.spacing();
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    const auto p = grid.node(i);
    lattice += h2 * rn::shape_value(shape, p, 2) *
               std::polar(shape.phase == 0.0 ? 1.0 : 1.0,
                          -(xi[0] * p[0] + xi[1] * p[1]));
  }
  lattice *= std::polar(1.0, shape.phase);
  const cdouble analytic = rn::shape_fourier(shape, xi, 2);
  CHECK(std::abs(lattice - analytic) < 1e-6 * std::abs(analytic));
}

TEST_CASE("pipeline is deterministic across reruns") {
  const std::string out1 = "/tmp/wavesrc_det_a", out2 = "/tmp/wavesrc_det_b";
  fs::remove_all(out1);
  fs::remove_all(out2);
  auto c = rn::parse_config(acoustic_config(out1, 64, 8.0));
  c.shifts = {0.0, 4.0};
  const auto m1 = rn::run(c);
  CHECK(m1.error.empty());
  c.output_dir = out2;
  const auto m2 = rn::run(c);
  CHECK(m2.error.empty());
  CHECK(m1.config_key == m2.config_key);
  CHECK(slurp(out1 + "/band_results.csv") == slurp(out2 + "/band_results.csv"));
  CHECK(slurp(out1 + "/field.bin") == slurp(out2 + "/field.bin"));
  CHECK(fs::exists(out1 + "/manifest.json"));
  CHECK(fs::exists(out1 + "/recovery_report.txt"));

  // Resume from the estimate stage reuses the stored field and reproduces
  // the same results.
  c.output_dir = out1;
  fs::remove(fs::path(out1) / "band_results.csv");
  const auto m3 = rn::run(c, "estimate");
  CHECK(m3.error.empty());
  CHECK(slurp(out1 + "/band_results.csv") == slurp(out2 + "/band_results.csv"));
  fs::remove_all(out1);
  fs::remove_all(out2);
}

TEST_CASE("sweep preconditions") {
  auto c = rn::parse_config(acoustic_config("/tmp/wavesrc_sweep"));
  CHECK_THROWS_AS(rn::convergence_sweep(c, "q", {8.0, 16.0}),
                  wavesrc::ConfigError);
  CHECK_THROWS_AS(rn::convergence_sweep(c, "bogus", {8.0, 16.0, 32.0}),
                  wavesrc::ConfigError);
}

TEST_CASE("manifest serializes") {
  rn::RunManifest m;
  m.config_key = "abc";
  m.version = "wavesrc 0.1.0";
  m.seed = 7;
  m.stages.push_back({"sample", 0.5, {"field.bin"}});
  const auto j = m.to_json();
  CHECK(j.find("\"sample\"") != std::string::npos);
  CHECK(j.find("abc") != std::string::npos);
}

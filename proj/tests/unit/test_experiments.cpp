#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pdlab/experiments.hpp"

using namespace pdlab;
using nlohmann::json;

namespace {

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("constant density sweep gives identical spectra and zero slope") {
    const ExperimentConfig cfg = parse_config(json::parse(R"({"domain": {"dim": 1}, "m": 1, "k": 4,
        "density": {"kind": "constant", "value": 2.0}, "discretization": {"elements": 32},
        "sweep": {"eps": [0.1, 0.05, 0.02, 0.01, 0.005]}})"));
    const SweepResult s = run_sweep(cfg);
    REQUIRE(s.error.empty());
    REQUIRE(s.points.size() == 5);
    for (const auto& p : s.points) {
      CHECK(p.mu == s.points[0].mu);
      CHECK(p.kernel_ok);
    }
    const RateFit f = fit_rate(s, 2);
    CHECK(std::abs(f.slope) < 1e-6);
    CHECK(fit_table({f}).header == std::vector<std::string>{"j", "slope", "intercept", "r2"});
    CHECK(sweep_table(s).header == std::vector<std::string>{"eps", "j", "mu_j", "mass", "lp", "sup"});
    CHECK_THROWS_AS(fit_rate(s, 5), Error);
  }

  TEST_CASE("log-log fit on an exact power law") {
    std::vector<double> x, y;
    for (int i = 0; i < 6; ++i) {
      x.push_back(std::pow(0.5, i));
      y.push_back(3.0 * std::pow(x.back(), -0.9));
    }
    const RateFit f = fit_loglog(x, y, 2);
    CHECK(f.slope == doctest::Approx(-0.9).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("fewer than five accepted points is an error") {
    SweepResult s;
    for (int i = 0; i < 4; ++i) {
      SweepPoint p;
      p.eps = std::pow(0.5, i);
      p.mu = {0.0, 1.0 + i};
      p.flagged = {false, false};
      p.kernel_ok = true;
      s.points.push_back(p);
    }
    CHECK_THROWS_AS(fit_rate(s, 2), Error);
  }

  TEST_CASE("point concentration in 1D drives mu_2 up") {
    const ExperimentConfig cfg = parse_config(json::parse(R"({"domain": {"dim": 1}, "m": 1, "k": 3,
        "density": {"kind": "point_concentration", "delta": 0.1, "center": [0.5]},
        "discretization": {"elements": 64, "cells_across": 8},
        "sweep": {"eps": {"first": 0.1, "last": 0.001, "count": 4}}})"));
    const SweepResult s = run_sweep(cfg);
    REQUIRE(s.error.empty());
    for (std::size_t i = 1; i < s.points.size(); ++i) CHECK(s.points[i].mu[1] > s.points[i - 1].mu[1]);
    for (const auto& p : s.points) CHECK(p.parent.size() == 3);
  }

  TEST_CASE("graded meshes resolve the thinnest feature") {
    const Domain sq = Domain::unit(2);
    const Density rho = Density::point_concentration(sq, 1, 1e-3, 0.1, {0.5, 0.5, 0});
    Discretization disc;
    disc.elements = 16;
    disc.cells_across = 8;
    const DiscreteSpace fine = make_space(sq, 1, disc, &rho);
    const DiscreteSpace parent = make_space(sq, 1, disc, &rho, true);
    CHECK(cells_across_features(fine, rho) >= 7.9);
    CHECK(cells_across_features(parent, rho) >= 3.9);
    CHECK(fine.axis(0).elements() == 2 * parent.axis(0).elements());
  }

  TEST_CASE("deterministic CSV output") {
    const ExperimentConfig cfg = parse_config(json::parse(R"({"domain": {"dim": 2}, "m": 1, "k": 5,
        "density": {"kind": "multi_point", "centers": [[0.3, 0.3], [0.7, 0.6]]},
        "discretization": {"elements": 12, "cells_across": 4},
        "sweep": {"eps": [0.05, 0.03]}})"));
    const auto dir = (std::filesystem::temp_directory_path() / "pdlab_det").string();
    const std::string a = slurp(emit(sweep_table(run_sweep(cfg)), dir, "a", "csv"));
    const std::string b = slurp(emit(sweep_table(run_sweep(cfg)), dir, "b", "csv"));
    CHECK(a == b);
    CHECK(a.rfind("eps,j,mu_j,mass,lp,sup\n", 0) == 0);
    const std::string j = slurp(emit(sweep_table(run_sweep(cfg)), dir, "c", "json"));
    CHECK(json::parse(j).size() == 10);
    CHECK_THROWS_AS(emit(sweep_table(run_sweep(cfg)), dir, "d", "xml"), Error);
  }

  TEST_CASE("Steklov comparison in 1D") {
    Discretization disc;
    disc.elements = 64;
    SolverConfig solver;
    const SteklovResult s = steklov_compare(Domain::unit(1), 1, {0.1, 0.01, 0.001}, 2, disc, solver);
    CHECK(s.boundary == 2.0);
    CHECK(std::abs(s.sigma[0]) < 1e-9);
    CHECK(s.sigma[1] == doctest::Approx(2.0).epsilon(1e-9));
    for (const auto& r : s.rows)
      if (r.j == 1) {
        CHECK(std::abs(r.mu) < 1e-9);
        CHECK(r.gap_target < 1e-9);
      }
    CHECK(s.rows.back().gap_sigma < 0.01 * 2.0);
    CHECK_THROWS_AS(steklov_compare(Domain::unit(1), 1, {0.1}, 3, disc, solver), Error);
  }

  TEST_CASE("bound reports and checks") {
    SweepResult s;
    s.N = 2;
    s.m = 1;
    for (int i = 0; i < 4; ++i) {
      SweepPoint p;
      p.eps = std::pow(0.5, i);
      p.mu = {0.0, 10.0, 12.0};
      p.flagged = {false, false, false};
      p.mass = 1.0;
      p.lp = 1.0;
      p.sup = 1.0 / p.eps;
      p.vol = 1.0;
      p.kernel_ok = true;
      s.points.push_back(p);
    }
    const auto reps = bound_reports(s, {BoundKind::UpperMass_Nge2m}, {2, 3}, false);
    CHECK(reps.size() == 8);
    const auto checks = check_bounds(reps, 0.1);
    CHECK(checks.size() == 2);
    for (const auto& c : checks) {
      CHECK(c.ok);
      CHECK(c.growth_last3 == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(bound_reports(s, {BoundKind::UpperMass_Nlt2m}, {2}, false), Error);
  }
}

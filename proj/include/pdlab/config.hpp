#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pdlab/bounds.hpp"
#include "pdlab/density.hpp"
#include "pdlab/discretization.hpp"
#include "pdlab/geometry.hpp"
#include "pdlab/spectrum.hpp"

namespace pdlab {

// {"dim": N, "bounds": [[lo, hi], ...]}; "bounds" may be omitted for the unit box
Domain parse_domain(const nlohmann::json& j);
nlohmann::json to_json(const Domain& d);

// {"kind": "point_concentration", "eps": 0.01, "delta": 0.1, "center": [0.5]} and the other kinds:
// constant{value}, tilde_concentration{eps, delta, center}, boundary_strip_weyl{eps}, steklov_family{eps},
// multi_point{eps, centers}, piecewise_constant{background, pieces: [{ball|box|strip, value}]}, smooth{base,
// amplitude}. `eps` overrides the description's own eps (sweeps).
Density parse_density(const nlohmann::json& desc, const Domain& domain, int m, std::optional<double> eps = {});
DensityKind density_kind_from_string(const std::string& s);

struct Discretization {
  int elements = 64;  // base elements per axis of the solve mesh
  int degree = 0;     // 0: max(m, 2)
  BoundaryCondition bc = BoundaryCondition::Natural;
  bool graded = true;      // grade toward density features
  int cells_across = 8;    // solve-mesh cells across each ball / strip
  double growth = 2.0;
  int degree_for(int m) const { return degree > 0 ? degree : std::max(m, 2); }
};

struct SweepSettings {
  std::vector<double> eps;  // strictly decreasing
  std::vector<int> fit_j;   // empty: j = d_{N,m} + 1
  std::optional<double> expected_slope;
  double slope_tol = 0.15;
  double min_r2 = 0.98;
  double flag_threshold = 0.02;  // parent/solve mesh relative change
  bool compare_parent = true;
};

struct GnySettings {
  int j = 4;
  int base_cells = 24;
  int cells_across = 17;
  double theta = 0.5;
  bool volume_filter = false;
  double c_threshold = 0.01;
};

struct SteklovSettings {
  std::vector<double> eps;
  int j_max = 2;
  double tol = 0.02;  // relative distance to the limit at the last eps
};

struct TaylorSettings {
  int N = 1;
  int k = 0;
  std::vector<double> eps;
  double spread_limit = 10.0;
};

struct VerifySettings {
  std::vector<BoundKind> kinds;
  std::vector<int> j;  // empty: 1..k
  bool explore = false;
  double max_growth = 0.10;  // upper kinds: sup ratio over the last three eps vs the earlier ones
};

struct ExperimentConfig {
  Domain domain = Domain::unit(1);
  int m = 1;
  nlohmann::json density = {{"kind", "constant"}, {"value", 1.0}};
  Discretization disc;
  int k = 10;
  SolverConfig solver;  // shift 0 in the file means 1/|Omega|
  std::uint64_t seed = 1234567;
  SweepSettings sweep;
  GnySettings gny;
  SteklovSettings steklov;
  TaylorSettings taylor;
  VerifySettings verify;
  nlohmann::json raw;
};

// Validates the ladder ordering and the four-cells resolution rule.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Smallest number of solve-mesh cells across any ball or strip of rho.
double cells_across_features(const DiscreteSpace& space, const Density& rho);

}  // namespace pdlab

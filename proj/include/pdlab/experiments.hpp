#pragma once

#include <string>
#include <vector>

#include "pdlab/bounds.hpp"
#include "pdlab/config.hpp"
#include "pdlab/density.hpp"
#include "pdlab/discretization.hpp"
#include "pdlab/emit.hpp"
#include "pdlab/spectrum.hpp"

namespace pdlab {

// Solve mesh = dyadic bisection of the parent mesh (elements/2, cells_across/2), graded toward the features of
// `rho`. The parent is the coarser of the two finest solutions.
DiscreteSpace make_space(const Domain& domain, int m, const Discretization& disc, const Density* rho,
                         bool parent = false);

struct SolveResult {
  Spectrum spectrum;
  std::vector<double> parent;  // eigenvalues on the parent mesh (empty when not compared)
  std::vector<bool> flagged;   // |mu_j - mu_j^parent| > threshold * mu_j (kernel entries never flagged)
  int dim = 0;
  double cells_across = 0.0;
  int kernel_expected = 0;
  bool kernel_ok = false;
};

SolveResult solve_density(const Density& rho, int m, const Discretization& disc, int k, const SolverConfig& solver,
                          bool compare_parent = false, double flag_threshold = 0.02);

struct SweepPoint {
  double eps = 0.0;
  std::vector<double> mu;
  std::vector<double> parent;
  std::vector<bool> flagged;
  double mass = 0.0;
  double lp = 0.0;  // int rho^{N/2m}
  double sup = 0.0;
  double vol = 0.0;
  int kernel_count = 0;
  bool kernel_ok = false;
  int dim = 0;
};

struct SweepResult {
  int N = 1;
  int m = 1;
  std::vector<SweepPoint> points;
  std::string error;  // non-empty: the sweep stopped early, points hold the partial result
};

SweepResult run_sweep(const ExperimentConfig& cfg);

struct RateFit {
  int j = 1;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
  std::vector<double> excluded;  // eps values dropped (flagged or failed kernel check)
};

// Least squares of log mu_j against log eps over accepted points; needs >= 5 of them.
RateFit fit_rate(const SweepResult& s, int j, bool exclude_flagged = true);
RateFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y, int j = 0);

struct SteklovRow {
  double eps = 0.0;
  int j = 1;
  double mu = 0.0;
  double sigma = 0.0;
  double target = 0.0;        // |dOmega| sigma_j
  double gap_target = 0.0;    // |mu - target|
  double gap_sigma = 0.0;     // |mu - sigma_j|
};

struct SteklovResult {
  std::vector<double> sigma;
  double boundary = 0.0;
  std::vector<SteklovRow> rows;  // eps-major
  Table table() const;           // eps,j,mu_j,sigma_j,target,gap_target,gap_sigma
};

// Fixed mesh graded toward the thinnest strip; sigma from K v = sigma B v on the same mesh.
SteklovResult steklov_compare(const Domain& domain, int m, const std::vector<double>& eps, int j_max,
                              const Discretization& disc, const SolverConfig& solver);

std::vector<BoundReport> bound_reports(const SweepResult& s, const std::vector<BoundKind>& kinds,
                                       const std::vector<int>& js, bool explore);

struct BoundCheck {
  Verdict verdict;
  int j = 1;
  double growth_last3 = 0.0;  // max of the last two ratios over the third-last one
  bool ok = true;
};
std::vector<BoundCheck> check_bounds(const std::vector<BoundReport>& reports, double max_growth);

Table sweep_table(const SweepResult& s);
Table fit_table(const std::vector<RateFit>& fits);
Table spectrum_table(const Spectrum& s);

// Writes <dir>/<name>.csv or <dir>/<name>.json.
std::string emit(const Table& t, const std::string& dir, const std::string& name, const std::string& format);
std::string emit_json(const nlohmann::json& j, const std::string& dir, const std::string& name);

}  // namespace pdlab

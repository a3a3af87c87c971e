#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "pdlab/emit.hpp"
#include "pdlab/geometry.hpp"

namespace pdlab {

enum class TaylorCase { Odd, Even };  // N = 2m-2k-1 / N = 2m-2k-2

// Throws unless (N, m, k) is one of the two admissible cases.
TaylorCase taylor_case(int N, int m, int k);

// Sample function on Omega = B(0, 1) with exact partial derivatives.
struct PanelFunction {
  std::string name;
  std::function<double(const std::array<int, 3>&, const Point&)> partial;
  double radial_power = -1.0;  // >= 0: u = |x|^s, norms in closed form, derivatives at 0 treated as 0
  bool polynomial_degree_le_k = false;
};

// polynomials x bump, sinusoids, x_1^{k+1}, a degree-k polynomial and the critical |x|^{m-N/2+0.05}
std::vector<PanelFunction> default_panel(int N, int m, int k);

double hm_norm_squared(const PanelFunction& u, int N, int m);  // sum_{|alpha|<=m} int_Omega |d^alpha u|^2
double remainder_integral(const PanelFunction& u, int N, int k, double eps);  // int_{B(0,eps)} |u - T_k u|^2

struct TaylorPanelResult {
  std::string function;
  std::vector<double> remainder;
  std::vector<double> ratio;  // remainder / (rhs(eps) ||u||^2_{H^m})
  double spread = 0.0;        // max/min ratio over the ladder; 0 for an exact polynomial
  double growth = 0.0;        // ratio(eps_last) / ratio(eps_first)
  bool exact = false;         // degree <= k member: remainder vanishes
  bool bounded = false;       // spread <= limit
};

struct TaylorReport {
  int N = 1, m = 1, k = 0;
  TaylorCase tcase = TaylorCase::Odd;
  std::vector<double> eps;
  std::vector<TaylorPanelResult> panel;
  double spread_limit = 10.0;
  double worst_spread = 0.0;
  bool exactness_ok = false;
  bool pass() const;
  Table table() const;  // function,eps,remainder,rhs,ratio
};

TaylorReport taylor_remainder_check(int m, int N, int k, const std::vector<double>& eps, double spread_limit = 10.0);

std::vector<double> geometric_ladder(double first, double last, int count);

}  // namespace pdlab

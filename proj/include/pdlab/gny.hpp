#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "pdlab/density.hpp"
#include "pdlab/geometry.hpp"

namespace pdlab {

// Cells of a (graded) tensor grid with weight = exact integral of rho over the cell.
struct MeasureSpace {
  int dim = 0;
  std::vector<Point> lo, hi;  // cell boxes
  std::vector<Point> points;  // cell centers
  std::vector<double> weights;
  double total = 0.0;
  double max_cell_diameter = 0.0;
  Domain domain;

  // base_cells per axis away from density features; features get cells_across cells (odd keeps a cell
  // center on each ball center).
  static MeasureSpace build(const Density& rho, int base_cells, int cells_across = 17);
  std::size_t size() const { return points.size(); }
};

// Exact integral of rho over an axis aligned box inside the domain.
double cell_integral(const Density& rho, const double* lo, const double* hi);

// Regions are annuli; inner == 0 means a ball.
struct Decomposition {
  std::vector<Annulus> regions;
  std::vector<double> measures;  // nu(A_i) from cells fully inside A_i
  double c_emp = 0.0;
  double theta = 0.0;           // target fraction that succeeded
  bool disjoint = false;        // doubled regions certified pairwise disjoint
  bool complete = false;        // j regions placed
  bool volume_filter = false;   // |2A_i ∩ Ω| <= |Ω|/j held for every kept region (when requested)
};

struct DecomposeOptions {
  double theta = 0.5;
  int max_halvings = 10;
  bool volume_filter = false;  // build 2j regions and keep j of small doubled volume
};

Decomposition decompose(const MeasureSpace& ms, int j, const DecomposeOptions& opt = {});

// Measure of the cells contained in the region.
double region_measure(const MeasureSpace& ms, const Annulus& a);
bool doubled_disjoint(const Annulus& a, const Annulus& b, int N);
double doubled_volume_in_domain(const Annulus& a, const Domain& domain);

// 1/2 inf{r : V(r) >= c nu(X) / j}, V maximized over sample points.
double inner_radius_bound(const MeasureSpace& ms, int j, double c);

struct GnyReport {
  bool count = false;
  bool disjoint = false;
  bool measures = false;  // nu(A_i) >= c_emp nu(X)/j and > 0
  bool constant = false;  // c_emp >= threshold
  bool radius = false;    // r_i^N >= c_emp int rho / (2^{N+1} j omega_N ||rho||_inf)
  double c_emp = 0.0;
  std::vector<std::string> failures;
  bool ok() const { return count && disjoint && measures && constant && radius; }
};

GnyReport verify(const Decomposition& d, const MeasureSpace& ms, int j, double sup_norm, double c_threshold = 0.01);

nlohmann::json to_json(const Decomposition& d, int N);

}  // namespace pdlab

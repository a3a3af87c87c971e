#pragma once

#include <string>
#include <vector>

#include "pdlab/bspline.hpp"
#include "pdlab/geometry.hpp"

namespace pdlab {

enum class DensityKind {
  Constant,
  PointConcentration,
  TildeConcentration,
  BoundaryStripWeyl,
  SteklovFamily,
  MultiPoint,
  PiecewiseConstant,
  Smooth
};

std::string to_string(DensityKind k);

// Piecewise constant part of a density: rho = background + sum_i add_i * chi_{region_i}, regions pairwise
// disjoint. Regions are balls, sub-boxes or the boundary strip.
struct DensityLayer {
  Region region;
  double add = 0.0;
};

struct LpIntegral {
  double norm = 0.0;      // (int rho^p)^{1/p}
  double integral = 0.0;  // int rho^p
};

class Density {
 public:
  static Density constant(const Domain& domain, double c);
  // eps^{2m-N-delta} + eps^{-N} chi_{B(center, eps)}
  static Density point_concentration(const Domain& domain, int m, double eps, double delta, const Point& center);
  // 1 + eps^{-2m+delta} chi_{B(center, eps)}
  static Density tilde_concentration(const Domain& domain, int m, double eps, double delta, const Point& center);
  // eps^{-2m/N} on the eps-strip, eps^{2-2m/N} elsewhere
  static Density boundary_strip_weyl(const Domain& domain, int m, double eps);
  // eps + eps^{-1} chi_{strip}
  static Density steklov_family(const Domain& domain, double eps);
  // eps + eps^{-N} sum_i chi_{B(a_i, eps)}
  static Density multi_point(const Domain& domain, double eps, const std::vector<Point>& centers);
  struct Piece {
    Region region;
    double value;
  };
  static Density piecewise_constant(const Domain& domain, double background, const std::vector<Piece>& pieces);
  // base + amplitude * prod_d sin^2(pi (x_d - lo_d) / edge_d)
  static Density smooth(const Domain& domain, double base, double amplitude);

  Density scaled(double c) const;   // c * rho
  Density dilated(double t) const;  // x -> rho(x / t) on t * Omega

  DensityKind kind() const { return kind_; }
  const Domain& domain() const { return domain_; }
  double eps() const { return eps_; }
  double background() const { return background_; }
  const std::vector<DensityLayer>& layers() const { return layers_; }
  bool has_smooth_part() const { return amplitude_ != 0.0; }
  double smooth_amplitude() const { return amplitude_; }
  std::string name() const { return to_string(kind_); }

  double evaluate(const Point& x) const;
  double smooth_part(const Point& x) const;  // amplitude * prod sin^2, without background
  double mass() const;
  LpIntegral lp_norm(double p) const;
  double sup_norm() const;
  double inf_value() const;

  // Intervals per axis that a mesh must resolve (balls and strips).
  std::vector<std::vector<AxisFeature>> axis_features() const;
  // Smallest feature width (ball diameter or strip width); +inf when there is none.
  double smallest_feature() const;

 private:
  Density(const Domain& d, DensityKind k) : domain_(d), kind_(k) {}
  void validate() const;
  double region_volume(const Region& r) const;

  Domain domain_;
  DensityKind kind_ = DensityKind::Constant;
  double eps_ = 0.0;
  double background_ = 1.0;
  double amplitude_ = 0.0;
  std::vector<DensityLayer> layers_;
};

}  // namespace pdlab

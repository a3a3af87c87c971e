#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace pdlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Points live in R^N with N <= 3; unused trailing coordinates are ignored.
using Point = std::array<double, 3>;

double unit_ball_volume(int N);   // omega_N
double unit_sphere_area(int N);   // |S^{N-1}|, with |S^0| = 2

class Domain {
 public:
  Domain() = default;
  Domain(int dim, std::vector<std::array<double, 2>> bounds);

  static Domain unit(int dim);

  int dim() const { return dim_; }
  double lo(int d) const { return bounds_[d][0]; }
  double hi(int d) const { return bounds_[d][1]; }
  double edge(int d) const { return hi(d) - lo(d); }
  double min_edge() const;
  const std::vector<std::array<double, 2>>& bounds() const { return bounds_; }

  bool contains(const Point& x) const;          // closed box
  double distance_to_boundary(const Point& x) const;  // for x inside
  Domain scaled(double t) const;                // tΩ

 private:
  int dim_ = 0;
  std::vector<std::array<double, 2>> bounds_;
};

struct Ball {
  Point center{};
  double radius = 0.0;
};

struct Annulus {
  Point center{};
  double inner = 0.0;  // r
  double outer = 0.0;  // R
  Annulus doubled() const { return {center, inner / 2.0, outer * 2.0}; }
};

struct BoundaryStrip {
  double width = 0.0;
};

// Axis aligned sub-box, used for piecewise constant densities.
struct Box {
  std::vector<std::array<double, 2>> bounds;
};

using Region = std::variant<Ball, Annulus, BoundaryStrip, Box>;

double volume(const Domain& domain);
double boundary_measure(const Domain& domain);
double strip_volume(const Domain& domain, double eps);
void check_strip(const Domain& domain, double eps);

double ball_volume(int N, double r);
double annulus_volume(int N, const Annulus& a);

bool region_membership(const Point& x, const Region& region, const Domain& domain);

double distance(const Point& a, const Point& b, int N);

// Ball/annulus fully inside the open box.
bool compactly_contained(const Ball& b, const Domain& domain);

}  // namespace pdlab

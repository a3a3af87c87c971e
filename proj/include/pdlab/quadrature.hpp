#pragma once

#include <vector>

#include "pdlab/geometry.hpp"

namespace pdlab {

struct Rule1D {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// Gauss-Legendre rule with n points, cached.
const Rule1D& gauss_legendre(int n);

struct PointSet {
  std::vector<Point> x;
  std::vector<double> w;
  void clear() {
    x.clear();
    w.clear();
  }
  std::size_t size() const { return x.size(); }
  double weight_sum() const;
};

// Tensor Gauss rule on the box [lo, hi] with n points per axis; weights are multiplied by factor.
void append_box_rule(int N, const double* lo, const double* hi, int n, double factor, PointSet& out);

enum class BallCellRelation { Outside, Inside, Cut };
BallCellRelation classify_box_ball(int N, const double* lo, const double* hi, const Point& c, double R);

// Quadrature for box ∩ ball by iterated one-dimensional cuts. The innermost axis uses n_poly Gauss points
// (exact for polynomials of degree 2 n_poly - 1 in that variable); the outer axes are split at every
// radius where the cross-section changes topology and use a cosine-graded Gauss rule with n_curved points,
// which absorbs the square-root behaviour at the break points.
void append_box_ball_rule(int N, const double* lo, const double* hi, const Point& c, double R, int n_poly,
                          int n_curved, double factor, PointSet& out);

// Recursive bisection to `depth` levels; unresolved leaves are kept or dropped by the midpoint test.
void append_box_ball_subdivision(int N, const double* lo, const double* hi, const Point& c, double R, int n,
                                 int depth, double factor, PointSet& out);

}  // namespace pdlab

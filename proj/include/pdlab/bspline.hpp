#pragma once

#include <Eigen/SparseCore>
#include <array>
#include <vector>

namespace pdlab {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Open-knot B-spline basis of maximal smoothness C^{p-1} over a strictly increasing list of break points.
// Element e = [breaks[e], breaks[e+1]] carries the p+1 nonzero functions e, ..., e+p.
class SplineBasis1D {
 public:
  SplineBasis1D() = default;
  SplineBasis1D(std::vector<double> breaks, int degree);

  int degree() const { return p_; }
  int elements() const { return static_cast<int>(breaks_.size()) - 1; }
  int size() const { return elements() + p_; }
  double lo() const { return breaks_.front(); }
  double hi() const { return breaks_.back(); }
  const std::vector<double>& breaks() const { return breaks_; }
  double element_lo(int e) const { return breaks_[e]; }
  double element_hi(int e) const { return breaks_[e + 1]; }

  int find_element(double x) const;

  // out[k * (p+1) + a] = k-th derivative of function e+a at x, k = 0..nd
  void evaluate(int e, double x, int nd, double* out) const;

  // Gram matrix of k-th derivatives over [a, b] ∩ [lo, hi]; exact (Gauss with p+1 points per element piece).
  SparseMatrix derivative_gram(int k, double a, double b) const;
  SparseMatrix derivative_gram(int k) const { return derivative_gram(k, lo(), hi()); }

  // Coefficients c with sum_i c_i B_i(x) = x^q (q <= p), via the dual functional on knot averages (blossoms).
  std::vector<double> monomial_coefficients(int q) const;

  // Knot-insertion matrix from this basis to the basis on `fine` (fine.breaks() ⊇ breaks()).
  SparseMatrix prolongation_to(const SplineBasis1D& fine) const;

 private:
  std::vector<double> breaks_;
  std::vector<double> knots_;
  int p_ = 0;
};

std::vector<double> uniform_breaks(double lo, double hi, int n);
std::vector<double> bisect_breaks(const std::vector<double>& breaks);

// A feature is an interval that must be resolved with `cells_across` cells; away from it the cell size grows
// geometrically by `growth` until it reaches (hi-lo)/base_elements.
struct AxisFeature {
  double a;
  double b;
};
std::vector<double> graded_breaks(double lo, double hi, int base_elements, const std::vector<AxisFeature>& features,
                                  int cells_across, double growth);

}  // namespace pdlab

#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "pdlab/bspline.hpp"
#include "pdlab/density.hpp"
#include "pdlab/geometry.hpp"

namespace pdlab {

enum class BoundaryCondition { Natural, Clamped };

using DofVector = Eigen::VectorXd;

// Tensor-product spline space on a box. Global tensor index runs x fastest.
class DiscreteSpace {
 public:
  DiscreteSpace(const Domain& domain, int m, int degree, std::vector<std::vector<double>> breaks, BoundaryCondition bc);

  const Domain& domain() const { return domain_; }
  int order() const { return m_; }
  int degree() const { return p_; }
  BoundaryCondition bc() const { return bc_; }
  int dim() const { return reduced_size_; }       // basis dimension after clamping
  int full_size() const { return full_size_; }    // tensor dimension
  const SplineBasis1D& axis(int d) const { return axes_[d]; }
  std::vector<int> elements_per_axis() const;
  int cell_count() const;
  double min_cell_width() const;

  DiscreteSpace refined() const;  // dyadic bisection on every axis
  SparseMatrix prolongation_to(const DiscreteSpace& fine) const;

  // Restrict a full tensor matrix / vector to the kept (unclamped) functions.
  SparseMatrix reduce(const SparseMatrix& full) const;
  DofVector reduce(const DofVector& full) const;
  DofVector expand(const DofVector& reduced) const;

  DofVector monomial(const std::array<int, 3>& alpha) const;  // coefficients of x^alpha
  double evaluate(const DofVector& c, const Point& x, const std::array<int, 3>& deriv = {0, 0, 0}) const;

 private:
  Domain domain_;
  int m_;
  int p_;
  BoundaryCondition bc_;
  std::vector<SplineBasis1D> axes_;
  int full_size_ = 0;
  int reduced_size_ = 0;
  int first_kept_ = 0;  // clamped: contiguous kept range in 1D
};

DiscreteSpace build_space(const Domain& domain, int m, int elements, BoundaryCondition bc, int degree);
DiscreteSpace build_space(const Domain& domain, int m, std::vector<std::vector<double>> breaks, BoundaryCondition bc,
                          int degree);

SparseMatrix kron(const SparseMatrix& A, const SparseMatrix& B);

SparseMatrix assemble_stiffness(const DiscreteSpace& space);

struct QuadratureOptions {
  enum class Interface { CutCell, Subdivision };
  Interface interface = Interface::CutCell;
  int subdivision_depth = 4;
  int curved_points = 16;
};

struct MassAssembly {
  SparseMatrix M;
  int interface_cells = 0;            // cells cut by a ball boundary
  double interface_volume_error = 0;  // |quadrature ball volume - exact| summed over balls, relative
};

MassAssembly assemble_mass_report(const DiscreteSpace& space, const Density& rho, const QuadratureOptions& q = {});
SparseMatrix assemble_mass(const DiscreteSpace& space, const Density& rho, const QuadratureOptions& q = {});
SparseMatrix assemble_boundary_mass(const DiscreteSpace& space);

struct Projection {
  DofVector coefficients;
  double residual = 0.0;       // ||M c - b|| / ||b||
  double relative_error = 0.0; // ||f - Pf||_rho / ||f||_rho by quadrature
};
// rho-weighted L2 projection; with `support`, only functions supported inside the box are used.
Projection project(const std::function<double(const Point&)>& f, const DiscreteSpace& space, const Density& rho,
                   const Box* support = nullptr);

void export_matrix(const SparseMatrix& A, std::ostream& os);
void export_matrix(const SparseMatrix& A, const std::string& path);

}  // namespace pdlab

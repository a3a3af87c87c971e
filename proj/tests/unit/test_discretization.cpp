#include <algorithm>
#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "pdlab/bumps.hpp"
#include "pdlab/discretization.hpp"

using namespace pdlab;

namespace {

Eigen::MatrixXd dense(const SparseMatrix& A) { return Eigen::MatrixXd(A); }

double inf_norm(const Eigen::MatrixXd& A) { return A.cwiseAbs().rowwise().sum().maxCoeff(); }

}  // namespace

TEST_SUITE("discretization") {
  TEST_CASE("space dimensions") {
    CHECK(build_space(Domain::unit(1), 1, 4, BoundaryCondition::Natural, 1).dim() == 5);
    CHECK(build_space(Domain::unit(1), 2, 8, BoundaryCondition::Clamped, 3).dim() == 7);
    CHECK(build_space(Domain::unit(2), 1, 8, BoundaryCondition::Natural, 2).dim() == 100);
    CHECK(build_space(Domain::unit(3), 1, 4, BoundaryCondition::Natural, 2).dim() == 216);
  }

  TEST_CASE("space preconditions") {
    CHECK_THROWS_AS(build_space(Domain::unit(1), 2, 8, BoundaryCondition::Natural, 1), Error);
    CHECK_THROWS_AS(build_space(Domain::unit(2), 1, 8, BoundaryCondition::Clamped, 2), Error);
    CHECK_THROWS_AS(build_space(Domain::unit(1), 1, 1, BoundaryCondition::Natural, 1), Error);
  }

  TEST_CASE("hand-assembled linear stiffness and mass") {
    const DiscreteSpace s = build_space(Domain::unit(1), 1, 2, BoundaryCondition::Natural, 1);
    Eigen::Matrix3d K;
    K << 2, -2, 0, -2, 4, -2, 0, -2, 2;
    CHECK((dense(assemble_stiffness(s)) - K).cwiseAbs().maxCoeff() < 1e-13);
    Eigen::Matrix3d M;
    M << 1. / 6, 1. / 12, 0, 1. / 12, 1. / 3, 1. / 12, 0, 1. / 12, 1. / 6;
    const SparseMatrix Ms = assemble_mass(s, Density::constant(Domain::unit(1), 1.0));
    CHECK((dense(Ms) - M).cwiseAbs().maxCoeff() < 1e-14);
    const Eigen::MatrixXd B = dense(assemble_boundary_mass(s));
    CHECK(B(0, 0) == doctest::Approx(1.0));
    CHECK(B(2, 2) == doctest::Approx(1.0));
    CHECK(B.cwiseAbs().sum() == doctest::Approx(2.0));
  }

  TEST_CASE("stiffness symmetry and kernel reproduction") {
    struct Case {
      int N, m, el;
    };
    for (const Case c : {Case{1, 1, 8}, Case{1, 2, 8}, Case{1, 3, 8}, Case{2, 1, 6}, Case{2, 2, 6}, Case{2, 3, 5},
                         Case{3, 1, 4}, Case{3, 2, 4}}) {
      const DiscreteSpace s = build_space(Domain(c.N, std::vector<std::array<double, 2>>(c.N, {-0.3, 1.1})), c.m,
                                          c.el, BoundaryCondition::Natural, std::max(c.m, 2));
      const SparseMatrix K = assemble_stiffness(s);
      const Eigen::MatrixXd Kd = dense(K);
      CHECK((Kd - Kd.transpose()).cwiseAbs().maxCoeff() == 0.0);
      const double kn = inf_norm(Kd);
      for (int order = 0; order < c.m; ++order)
        for (const auto& a : multi_indices(c.N, order)) {
          const DofVector v = s.monomial(a);
          CHECK((K * v).cwiseAbs().maxCoeff() < 1e-10 * kn);
        }
      // a degree m monomial is not in the kernel
      std::array<int, 3> top{c.m, 0, 0};
      CHECK((K * s.monomial(top)).cwiseAbs().maxCoeff() > 1e-6 * kn);
    }
  }

  TEST_CASE("mass: partition of unity and linearity") {
    const Domain sq = Domain::unit(2);
    const DiscreteSpace s = build_space(sq, 1, 16, BoundaryCondition::Natural, 2);
    const Density rho = Density::point_concentration(sq, 1, 0.1, 0.1, {0.4, 0.55, 0});
    const SparseMatrix M = assemble_mass(s, rho);
    const DofVector one = DofVector::Ones(s.dim());
    CHECK(one.dot(M * one) == doctest::Approx(rho.mass()).epsilon(1e-9));
    const SparseMatrix M2 = assemble_mass(s, rho.scaled(2.0));
    CHECK((dense(M2) - 2.0 * dense(M)).cwiseAbs().maxCoeff() < 1e-12 * dense(M).cwiseAbs().maxCoeff());
    const MassAssembly rep = assemble_mass_report(s, rho);
    CHECK(rep.interface_cells > 0);
    CHECK(rep.interface_volume_error < 1e-9);
  }

  TEST_CASE("mass positivity over the catalog") {
    const Domain sq = Domain::unit(2);
    const DiscreteSpace s = build_space(sq, 1, 8, BoundaryCondition::Natural, 2);
    const std::vector<Density> cat = {
        Density::constant(sq, 0.3),
        Density::point_concentration(sq, 1, 0.1, 0.1, {0.5, 0.5, 0}),
        Density::tilde_concentration(sq, 1, 0.1, 0.2, {0.5, 0.5, 0}),
        Density::boundary_strip_weyl(sq, 1, 0.1),
        Density::steklov_family(sq, 0.1),
        Density::multi_point(sq, 0.05, {{0.25, 0.25, 0}, {0.75, 0.7, 0}}),
        Density::piecewise_constant(sq, 1.0, {{Box{{{0.0, 0.5}, {0.0, 1.0}}}, 3.0}}),
        Density::smooth(sq, 1.0, 2.0),
    };
    for (const auto& rho : cat) {
      const Eigen::MatrixXd M = dense(assemble_mass(s, rho));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
      CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
  }

  TEST_CASE("boundary mass") {
    const DiscreteSpace s = build_space(Domain::unit(2), 1, 6, BoundaryCondition::Natural, 2);
    const SparseMatrix B = assemble_boundary_mass(s);
    const DofVector one = DofVector::Ones(s.dim());
    CHECK(one.dot(B * one) == doctest::Approx(4.0).epsilon(1e-13));
    const Eigen::MatrixXd Bd = dense(B);
    CHECK((Bd - Bd.transpose()).cwiseAbs().maxCoeff() == 0.0);
    // tensor index (3, 3) is supported away from the boundary
    const int interior = 3 + 3 * 8;
    CHECK(Bd.row(interior).cwiseAbs().maxCoeff() == 0.0);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(dense(assemble_boundary_mass(build_space(Domain::unit(1), 2, 8,
                                                                                    BoundaryCondition::Natural, 3))));
    CHECK(lu.rank() == 2);
    CHECK_THROWS_AS(assemble_boundary_mass(build_space(Domain::unit(1), 1, 8, BoundaryCondition::Clamped, 2)), Error);
  }

  TEST_CASE("nested refinement reproduces the coarse forms") {
    for (int N = 1; N <= 2; ++N) {
      const Domain d = Domain::unit(N);
      const DiscreteSpace c = build_space(d, 2, 4, BoundaryCondition::Natural, 3);
      const DiscreteSpace f = c.refined();
      const SparseMatrix P = c.prolongation_to(f);
      const Eigen::MatrixXd Kc = dense(assemble_stiffness(c));
      const Eigen::MatrixXd PKP = dense(SparseMatrix(P.transpose() * assemble_stiffness(f) * P));
      CHECK(inf_norm(Kc - PKP) < 1e-9 * inf_norm(Kc));
      const Density rho = Density::smooth(d, 1.0, 0.7);
      const Eigen::MatrixXd Mc = dense(assemble_mass(c, rho));
      const Eigen::MatrixXd PMP = dense(SparseMatrix(P.transpose() * assemble_mass(f, rho) * P));
      CHECK(inf_norm(Mc - PMP) < 1e-9 * inf_norm(Mc));
    }
  }

  TEST_CASE("projection") {
    const Domain d = Domain::unit(1);
    const DiscreteSpace s = build_space(d, 1, 10, BoundaryCondition::Natural, 2);
    const Density rho = Density::constant(d, 1.0);
    const Projection one = project([](const Point&) { return 1.0; }, s, rho);
    CHECK((one.coefficients - DofVector::Ones(s.dim())).cwiseAbs().maxCoeff() < 1e-12);
    const Projection lin = project([](const Point& x) { return x[0]; }, s, rho);
    CHECK((lin.coefficients - s.monomial({1, 0, 0})).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(lin.relative_error < 1e-12);

    // bump with r, R resolved by >= 4 cells
    const Domain sq = Domain::unit(2);
    const DiscreteSpace s2 = build_space(sq, 1, 64, BoundaryCondition::Natural, 2);
    RadialTestFunction f{{0.5, 0.5, 0}, solve_profile(1, 0.1, 0.15)};
    const Projection pb = project([&](const Point& x) { return f(x, 2); }, s2, Density::constant(sq, 1.0));
    CHECK(pb.relative_error < 0.05);
  }

  TEST_CASE("matrix export") {
    const DiscreteSpace s = build_space(Domain::unit(1), 1, 2, BoundaryCondition::Natural, 1);
    std::ostringstream os;
    export_matrix(assemble_stiffness(s), os);
    const std::string txt = os.str();
    CHECK(std::count(txt.begin(), txt.end(), '\n') >= 7);
    CHECK(txt.find("-2") != std::string::npos);
  }

  TEST_CASE("evaluation reproduces monomials") {
    const DiscreteSpace s = build_space(Domain::unit(2), 2, 5, BoundaryCondition::Natural, 3);
    const DofVector c = s.monomial({1, 2, 0});
    const Point x{0.3, 0.7, 0};
    CHECK(s.evaluate(c, x) == doctest::Approx(0.3 * 0.49).epsilon(1e-12));
    CHECK(s.evaluate(c, x, {0, 1, 0}) == doctest::Approx(0.3 * 2 * 0.7).epsilon(1e-12));
  }
}

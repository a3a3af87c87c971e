#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "pdlab/bspline.hpp"
#include "pdlab/discretization.hpp"

namespace pdlab {

struct SolverConfig {
  double shift = 1.0;        // sigma > 0; experiments use 1/|Omega|
  double tol = 1e-10;        // relative residual ||K v - mu M v|| / ||(K + sigma M) v||
  int max_iterations = 400;  // expansion steps
  std::uint64_t seed = 1234567;
  int block_size = 0;        // 0: automatic
  int dense_threshold = 400; // use a dense solver up to this size
};

struct Spectrum {
  std::vector<double> eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;      // columns, M-normalized
  std::vector<double> residuals;
  int kernel_count = -1;
  bool converged = false;
  double shift = 0.0;
  int iterations = 0;
  int factorization_retries = 0;
};

// k smallest eigenpairs of K v = mu M v by block shift-invert Rayleigh-Ritz on (K + sigma M)^{-1} M, with the
// basis kept orthonormal in the (K + sigma M) inner product (M may be singular, e.g. a boundary mass).
Spectrum solve_generalized(const SparseMatrix& K, const SparseMatrix& M, int k, const SolverConfig& cfg = {});

int expected_kernel_dimension(int N, int m);  // binom(N+m-1, N)
int kernel_dimension(const Spectrum& s, int N, int m, double rel_tol = 1e-7);
// Throws with a diagnostic when the count differs from binom(N+m-1, N).
int require_kernel_dimension(const Spectrum& s, int N, int m, double rel_tol = 1e-7);

double rayleigh_quotient(const SparseMatrix& K, const SparseMatrix& M, const DofVector& v);
double minmax_upper_bound(const SparseMatrix& K, const SparseMatrix& M, const std::vector<DofVector>& vectors);

std::string to_json(const Spectrum& s);

}  // namespace pdlab

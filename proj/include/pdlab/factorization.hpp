#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>

#include "pdlab/bspline.hpp"

namespace pdlab {

// Sparse Cholesky of an SPD matrix; CHOLMOD supernodal when available, Eigen SimplicialLLT otherwise.
class SparseCholesky {
 public:
  SparseCholesky();
  ~SparseCholesky();
  SparseCholesky(const SparseCholesky&) = delete;
  SparseCholesky& operator=(const SparseCholesky&) = delete;

  bool factor(const SparseMatrix& A);
  Eigen::MatrixXd solve(const Eigen::MatrixXd& B) const;
  static std::string backend();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pdlab

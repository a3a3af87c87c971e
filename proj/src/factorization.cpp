#include "pdlab/factorization.hpp"

#include <Eigen/SparseCholesky>

#ifdef PDLAB_HAVE_CHOLMOD
#include <Eigen/CholmodSupport>
#endif

namespace pdlab {

struct SparseCholesky::Impl {
#ifdef PDLAB_HAVE_CHOLMOD
  Eigen::CholmodSupernodalLLT<SparseMatrix, Eigen::Lower> llt;
#else
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower> llt;
#endif
};

SparseCholesky::SparseCholesky() : impl_(std::make_unique<Impl>()) {}
SparseCholesky::~SparseCholesky() = default;

bool SparseCholesky::factor(const SparseMatrix& A) {
  impl_->llt.compute(A);
  return impl_->llt.info() == Eigen::Success;
}

Eigen::MatrixXd SparseCholesky::solve(const Eigen::MatrixXd& B) const { return impl_->llt.solve(B); }

std::string SparseCholesky::backend() {
#ifdef PDLAB_HAVE_CHOLMOD
  return "cholmod-supernodal";
#else
  return "eigen-simplicial";
#endif
}

}  // namespace pdlab

#include "pdlab/spectrum.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "pdlab/emit.hpp"
#include "pdlab/factorization.hpp"

namespace pdlab {

namespace {

constexpr double kFloorAccept = 1e-6;

Eigen::MatrixXd random_block(int n, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd X(n, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = nd(rng);
  return X;
}

SparseMatrix shifted(const SparseMatrix& K, const SparseMatrix& M, double sigma) {
  SparseMatrix G = K + sigma * M;
  G.makeCompressed();
  return G;
}

void finish(Spectrum& s, const SparseMatrix& K, const SparseMatrix& M) {
  // sort ascending and compute explicit residuals
  const int k = static_cast<int>(s.eigenvalues.size());
  std::vector<int> order(k);
  for (int i = 0; i < k; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return s.eigenvalues[a] < s.eigenvalues[b]; });
  Spectrum t = s;
  for (int i = 0; i < k; ++i) {
    t.eigenvalues[i] = s.eigenvalues[order[i]];
    t.eigenvectors.col(i) = s.eigenvectors.col(order[i]);
  }
  t.residuals.assign(k, 0.0);
  for (int i = 0; i < k; ++i) {
    const Eigen::VectorXd x = t.eigenvectors.col(i);
    const Eigen::VectorXd Kx = K * x, Mx = M * x;
    const double denom = (Kx + s.shift * Mx).norm();
    t.residuals[i] = (Kx - t.eigenvalues[i] * Mx).norm() / std::max(denom, 1e-300);
  }
  s = std::move(t);
}

Spectrum solve_dense(const SparseMatrix& K, const SparseMatrix& M, int k, const SolverConfig& cfg) {
  Spectrum s;
  double sigma = cfg.shift;
  Eigen::MatrixXd Kd(K), Md(M);
  Eigen::LLT<Eigen::MatrixXd> llt;
  for (int attempt = 0;; ++attempt) {
    llt.compute(Kd + sigma * Md);
    if (llt.info() == Eigen::Success) break;
    if (attempt >= 8) throw Error("solve_generalized: K + sigma M is not positive definite (sigma too small?)");
    sigma *= 2.0;
    ++s.factorization_retries;
  }
  s.shift = sigma;
  // C = L^{-1} M L^{-T}; eigenvalues theta = 1 / (mu + sigma)
  const Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd C = L.triangularView<Eigen::Lower>().solve(Md);
  C = L.triangularView<Eigen::Lower>().solve(C.transpose()).transpose();
  C = 0.5 * (C + C.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  const int n = static_cast<int>(Kd.rows());
  s.eigenvectors.resize(n, k);
  s.eigenvalues.resize(k);
  for (int i = 0; i < k; ++i) {
    const int c = n - 1 - i;
    const double theta = es.eigenvalues()[c];
    if (!(theta > 0.0)) throw Error("solve_generalized: requested more eigenvalues than the rank of M");
    Eigen::VectorXd x = L.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors().col(c));
    const double mn = x.dot(Md * x);
    x /= std::sqrt(mn);
    s.eigenvectors.col(i) = x;
    s.eigenvalues[i] = x.dot(Kd * x);
  }
  s.converged = true;
  finish(s, K, M);
  return s;
}

}  // namespace

Spectrum solve_generalized(const SparseMatrix& K, const SparseMatrix& M, int k, const SolverConfig& cfg) {
  const int n = static_cast<int>(K.rows());
  if (K.cols() != n || M.rows() != n || M.cols() != n) throw Error("solve_generalized: dimension mismatch");
  if (k < 1 || k > n) throw Error("solve_generalized: k out of range");
  if (!(cfg.shift > 0.0)) throw Error("solve_generalized: shift must be positive");
  if (n <= cfg.dense_threshold) return solve_dense(K, M, k, cfg);

  Spectrum s;
  double sigma = cfg.shift;
  SparseMatrix G;
  SparseCholesky chol;
  for (int attempt = 0;; ++attempt) {
    G = shifted(K, M, sigma);
    if (chol.factor(G)) break;
    if (attempt >= 8) throw Error("solve_generalized: factorization of K + sigma M failed (sigma too small?)");
    sigma *= 2.0;
    ++s.factorization_retries;
  }
  s.shift = sigma;

  const int bs = cfg.block_size > 0 ? cfg.block_size : std::min(n, 8);
  const int pmax = std::min(n, std::max(2 * (k + bs), k + 3 * bs));
  std::mt19937_64 rng(cfg.seed);

  Eigen::MatrixXd V(n, pmax), GV(n, pmax), MV(n, pmax);
  int p = 0;

  // Append the columns of Z after G-orthogonalization (two passes of classical Gram-Schmidt).
  auto add_block = [&](Eigen::MatrixXd Z) {
    for (int j = 0; j < Z.cols() && p < pmax; ++j) {
      Eigen::VectorXd z = Z.col(j);
      for (int tries = 0; tries < 4; ++tries) {
        Eigen::VectorXd Gz = G * z;
        const double before = std::sqrt(std::max(z.dot(Gz), 0.0));
        for (int pass = 0; pass < 2 && p > 0; ++pass) {
          const Eigen::VectorXd c = GV.leftCols(p).transpose() * z;
          z -= V.leftCols(p) * c;
        }
        Gz = G * z;
        const double after = std::sqrt(std::max(z.dot(Gz), 0.0));
        if (after > 1e-8 * before && after > 0.0) {
          V.col(p) = z / after;
          GV.col(p) = Gz / after;
          MV.col(p) = M * V.col(p);
          ++p;
          break;
        }
        z = random_block(n, 1, rng).col(0);
      }
    }
  };

  add_block(chol.solve(M * random_block(n, bs, rng)));
  int steps = 1;
  while (p < std::min(n, k + bs)) {
    add_block(chol.solve(M * V.middleCols(std::max(0, p - bs), std::min(bs, p))));
    if (++steps > cfg.max_iterations) throw Error("solve_generalized: basis could not be built");
  }
  Eigen::MatrixXd Y;
  std::vector<double> res(k, 0.0);
  double best = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (;;) {
    Eigen::MatrixXd H = V.leftCols(p).transpose() * MV.leftCols(p);
    H = 0.5 * (H + H.transpose());
    // explicit Gram matrix: G-orthogonality of V degrades at the roundoff level
    Eigen::MatrixXd Gp = V.leftCols(p).transpose() * GV.leftCols(p);
    Gp = 0.5 * (Gp + Gp.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Gp);
    // largest theta first
    Y = es.eigenvectors().rowwise().reverse();
    const Eigen::VectorXd theta = es.eigenvalues().reverse();
    if (p == n) {
      s.converged = true;
      break;
    }
    // residual of the shift-invert operator in the G-norm: r = Op x - theta x, G r = M x - theta G x
    const Eigen::MatrixXd Yk = Y.leftCols(k);
    const Eigen::MatrixXd X = V.leftCols(p) * Yk;
    const Eigen::MatrixXd MX = MV.leftCols(p) * Yk;
    const Eigen::MatrixXd GX = GV.leftCols(p) * Yk;
    const Eigen::MatrixXd Z = chol.solve(MX);
    std::vector<std::pair<double, int>> open;
    for (int i = 0; i < k; ++i) {
      const Eigen::VectorXd r = Z.col(i) - theta[i] * X.col(i);
      const Eigen::VectorXd Gr = MX.col(i) - theta[i] * GX.col(i);
      res[i] = std::sqrt(std::max(r.dot(Gr), 0.0)) / std::max(theta[i], 1e-300);
      if (res[i] > cfg.tol) open.emplace_back(-res[i], i);
    }
    if (open.empty()) {
      s.converged = true;
      break;
    }
    // roundoff floor ~ eps cond(G); eigenvalue error is O(res^2) so stagnation below 1e-6 is accepted
    const double worst = -std::min_element(open.begin(), open.end())->first;
    if (worst < 0.5 * best) {
      best = worst;
      stalled = 0;
    } else if (++stalled >= 6 && worst <= kFloorAccept) {
      s.converged = true;
      break;
    }
    if (++steps > cfg.max_iterations) break;
    std::sort(open.begin(), open.end());
    const int add = std::min<int>(bs, static_cast<int>(open.size()));
    if (p + add > pmax) {
      // thick restart on the leading Ritz vectors
      const int keep = std::min(pmax - add, std::min(p, k + bs));
      V.leftCols(keep) = V.leftCols(p) * Y.leftCols(keep);
      GV.leftCols(keep) = GV.leftCols(p) * Y.leftCols(keep);
      MV.leftCols(keep) = MV.leftCols(p) * Y.leftCols(keep);
      p = keep;
    }
    Eigen::MatrixXd W(n, add);
    // residual directions: Z itself is nearly in span(V) and would fail the dependency test
    for (int c = 0; c < add; ++c) {
      const int i = open[c].second;
      W.col(c) = Z.col(i) - theta[i] * X.col(i);
    }
    add_block(W);
  }
  s.iterations = steps;
  s.eigenvalues.resize(k);
  s.eigenvectors.resize(n, k);
  for (int i = 0; i < k; ++i) {
    const Eigen::VectorXd y = Y.col(i);
    Eigen::VectorXd x = V.leftCols(p) * y;
    const double mn = (MV.leftCols(p) * y).dot(x);
    x /= std::sqrt(std::max(mn, 1e-300));
    s.eigenvectors.col(i) = x;
    s.eigenvalues[i] = x.dot(K * x);
  }
  finish(s, K, M);
  return s;
}

int expected_kernel_dimension(int N, int m) {
  // binom(N + m - 1, N)
  double b = 1.0;
  for (int i = 1; i <= N; ++i) b = b * (m - 1 + i) / i;
  return static_cast<int>(std::lround(b));
}

int kernel_dimension(const Spectrum& s, int N, int m, double rel_tol) {
  const int d = expected_kernel_dimension(N, m);
  if (static_cast<int>(s.eigenvalues.size()) <= d) throw Error("kernel_dimension: need more than d_{N,m} eigenvalues");
  const double ref = s.eigenvalues[d];
  int count = 0;
  for (double v : s.eigenvalues)
    if (v < rel_tol * ref) ++count;
  return count;
}

int require_kernel_dimension(const Spectrum& s, int N, int m, double rel_tol) {
  const int d = expected_kernel_dimension(N, m);
  const int c = kernel_dimension(s, N, m, rel_tol);
  if (c != d || !(s.eigenvalues[d] > 0.0)) {
    std::ostringstream os;
    os << "kernel structure mismatch: found " << c << " near-zero eigenvalues, expected " << d << " for (N, m) = ("
       << N << ", " << m << ")";
    throw Error(os.str());
  }
  return c;
}

double rayleigh_quotient(const SparseMatrix& K, const SparseMatrix& M, const DofVector& v) {
  const double den = v.dot(M * v);
  if (!(den > 0.0)) throw Error("rayleigh_quotient: vector has zero M-norm");
  return v.dot(K * v) / den;
}

double minmax_upper_bound(const SparseMatrix& K, const SparseMatrix& M, const std::vector<DofVector>& vectors) {
  const int j = static_cast<int>(vectors.size());
  if (j < 1) throw Error("minmax_upper_bound: need at least one vector");
  const int n = static_cast<int>(K.rows());
  Eigen::MatrixXd V(n, j);
  for (int i = 0; i < j; ++i) {
    if (vectors[i].size() != n) throw Error("minmax_upper_bound: vector length mismatch");
    V.col(i) = vectors[i];
  }
  Eigen::MatrixXd A = V.transpose() * (K * V);
  Eigen::MatrixXd B = V.transpose() * (M * V);
  A = 0.5 * (A + A.transpose());
  B = 0.5 * (B + B.transpose());
  // rank test on the M-Gram matrix after diagonal scaling
  const Eigen::VectorXd dg = B.diagonal();
  if ((dg.array() <= 0.0).any()) throw Error("minmax_upper_bound: rank-deficient vector set");
  const Eigen::VectorXd sc = dg.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd Bs = sc.asDiagonal() * B * sc.asDiagonal();
  const Eigen::MatrixXd As = sc.asDiagonal() * A * sc.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(Bs);
  if (eb.eigenvalues().minCoeff() < 1e-12 * eb.eigenvalues().maxCoeff())
    throw Error("minmax_upper_bound: rank-deficient vector set");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(As, Bs);
  return es.eigenvalues().maxCoeff();
}

std::string to_json(const Spectrum& s) {
  nlohmann::json j;
  j["eigenvalues"] = s.eigenvalues;
  j["residuals"] = s.residuals;
  j["kernel_count"] = s.kernel_count;
  return dump_json(j);
}

}  // namespace pdlab

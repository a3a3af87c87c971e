#include "pdlab/discretization.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "pdlab/quadrature.hpp"

namespace pdlab {

DiscreteSpace::DiscreteSpace(const Domain& domain, int m, int degree, std::vector<std::vector<double>> breaks,
                             BoundaryCondition bc)
    : domain_(domain), m_(m), p_(degree), bc_(bc) {
  const int N = domain.dim();
  if (m < 1) throw Error("build_space: order m must be >= 1");
  if (degree < m) throw Error("build_space: degree must be >= m for H^m conformity");
  if (bc == BoundaryCondition::Clamped && N != 1) throw Error("build_space: clamped spaces are 1D only");
  if (static_cast<int>(breaks.size()) != N) throw Error("build_space: need break points for every axis");
  full_size_ = 1;
  for (int d = 0; d < N; ++d) {
    auto& b = breaks[d];
    if (static_cast<int>(b.size()) < 3) throw Error("build_space: need at least 2 elements per axis");
    if (std::abs(b.front() - domain.lo(d)) > 1e-12 * domain.edge(d) ||
        std::abs(b.back() - domain.hi(d)) > 1e-12 * domain.edge(d))
      throw Error("build_space: break points must span the domain");
    b.front() = domain.lo(d);
    b.back() = domain.hi(d);
    axes_.emplace_back(b, degree);
    full_size_ *= axes_.back().size();
  }
  reduced_size_ = full_size_;
  if (bc == BoundaryCondition::Clamped) {
    first_kept_ = m;
    reduced_size_ = full_size_ - 2 * m;
    if (reduced_size_ < 1) throw Error("build_space: too few functions left after clamping");
  }
}

std::vector<int> DiscreteSpace::elements_per_axis() const {
  std::vector<int> e;
  for (const auto& a : axes_) e.push_back(a.elements());
  return e;
}

int DiscreteSpace::cell_count() const {
  int c = 1;
  for (const auto& a : axes_) c *= a.elements();
  return c;
}

double DiscreteSpace::min_cell_width() const {
  double h = domain_.edge(0);
  for (const auto& a : axes_)
    for (int e = 0; e < a.elements(); ++e) h = std::min(h, a.element_hi(e) - a.element_lo(e));
  return h;
}

DiscreteSpace DiscreteSpace::refined() const {
  std::vector<std::vector<double>> b;
  for (const auto& a : axes_) b.push_back(bisect_breaks(a.breaks()));
  return DiscreteSpace(domain_, m_, p_, b, bc_);
}

SparseMatrix kron(const SparseMatrix& A, const SparseMatrix& B) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(A.nonZeros()) * B.nonZeros());
  for (int ka = 0; ka < A.outerSize(); ++ka)
    for (SparseMatrix::InnerIterator ia(A, ka); ia; ++ia)
      for (int kb = 0; kb < B.outerSize(); ++kb)
        for (SparseMatrix::InnerIterator ib(B, kb); ib; ++ib)
          t.emplace_back(ia.row() * B.rows() + ib.row(), ia.col() * B.cols() + ib.col(), ia.value() * ib.value());
  SparseMatrix K(A.rows() * B.rows(), A.cols() * B.cols());
  K.setFromTriplets(t.begin(), t.end());
  return K;
}

namespace {

// Tensor product of per-axis matrices with x fastest.
SparseMatrix kron_axes(const std::vector<SparseMatrix>& per_axis) {
  SparseMatrix K = per_axis[0];
  for (std::size_t d = 1; d < per_axis.size(); ++d) K = kron(per_axis[d], K);
  return K;
}

SparseMatrix kron_axes(const std::vector<Eigen::VectorXd>& per_axis) {
  std::vector<SparseMatrix> m;
  for (const auto& v : per_axis) m.push_back(v.sparseView());
  return kron_axes(m);
}

}  // namespace

SparseMatrix DiscreteSpace::prolongation_to(const DiscreteSpace& fine) const {
  if (fine.domain().dim() != domain_.dim() || fine.degree() != p_) throw Error("prolongation: incompatible spaces");
  std::vector<SparseMatrix> per;
  for (int d = 0; d < domain_.dim(); ++d) per.push_back(axes_[d].prolongation_to(fine.axis(d)));
  SparseMatrix P = kron_axes(per);
  if (bc_ == BoundaryCondition::Clamped) {
    SparseMatrix Pr = P.block(fine.first_kept_, first_kept_, fine.reduced_size_, reduced_size_);
    return Pr;
  }
  return P;
}

SparseMatrix DiscreteSpace::reduce(const SparseMatrix& full) const {
  if (bc_ == BoundaryCondition::Natural) return full;
  SparseMatrix r = full.block(first_kept_, first_kept_, reduced_size_, reduced_size_);
  return r;
}

DofVector DiscreteSpace::reduce(const DofVector& full) const {
  if (bc_ == BoundaryCondition::Natural) return full;
  return full.segment(first_kept_, reduced_size_);
}

DofVector DiscreteSpace::expand(const DofVector& reduced) const {
  if (bc_ == BoundaryCondition::Natural) return reduced;
  DofVector f = DofVector::Zero(full_size_);
  f.segment(first_kept_, reduced_size_) = reduced;
  return f;
}

DofVector DiscreteSpace::monomial(const std::array<int, 3>& alpha) const {
  std::vector<Eigen::VectorXd> per;
  for (int d = 0; d < domain_.dim(); ++d) {
    auto c = axes_[d].monomial_coefficients(alpha[d]);
    per.push_back(Eigen::Map<Eigen::VectorXd>(c.data(), c.size()));
  }
  SparseMatrix k = kron_axes(per);
  return reduce(DofVector(Eigen::MatrixXd(k).col(0)));
}

double DiscreteSpace::evaluate(const DofVector& c, const Point& x, const std::array<int, 3>& deriv) const {
  const DofVector full = expand(c);
  const int N = domain_.dim(), np = p_ + 1;
  std::array<std::vector<double>, 3> vals;
  int e[3] = {0, 0, 0};
  for (int d = 0; d < N; ++d) {
    e[d] = axes_[d].find_element(x[d]);
    vals[d].resize((deriv[d] + 1) * np);
    axes_[d].evaluate(e[d], x[d], deriv[d], vals[d].data());
  }
  const int n0 = axes_[0].size(), n1 = N > 1 ? axes_[1].size() : 1;
  double s = 0.0;
  const int nz = N > 2 ? np : 1, ny = N > 1 ? np : 1;
  for (int c2 = 0; c2 < nz; ++c2)
    for (int c1 = 0; c1 < ny; ++c1)
      for (int c0 = 0; c0 < np; ++c0) {
        double v = vals[0][deriv[0] * np + c0];
        if (N > 1) v *= vals[1][deriv[1] * np + c1];
        if (N > 2) v *= vals[2][deriv[2] * np + c2];
        const int idx = (e[0] + c0) + n0 * ((N > 1 ? e[1] + c1 : 0) + n1 * (N > 2 ? e[2] + c2 : 0));
        s += v * full[idx];
      }
  return s;
}

DiscreteSpace build_space(const Domain& domain, int m, int elements, BoundaryCondition bc, int degree) {
  if (elements < 2) throw Error("build_space: need at least 2 elements per axis");
  std::vector<std::vector<double>> b;
  for (int d = 0; d < domain.dim(); ++d) b.push_back(uniform_breaks(domain.lo(d), domain.hi(d), elements));
  return DiscreteSpace(domain, m, degree, b, bc);
}

DiscreteSpace build_space(const Domain& domain, int m, std::vector<std::vector<double>> breaks, BoundaryCondition bc,
                          int degree) {
  return DiscreteSpace(domain, m, degree, std::move(breaks), bc);
}

SparseMatrix assemble_stiffness(const DiscreteSpace& space) {
  const int N = space.domain().dim(), m = space.order();
  std::vector<std::vector<SparseMatrix>> grams(N);
  for (int d = 0; d < N; ++d)
    for (int k = 0; k <= m; ++k) grams[d].push_back(space.axis(d).derivative_gram(k));
  SparseMatrix K(space.full_size(), space.full_size());
  // sum over multi-indices |alpha| = m, no multinomial weights
  for (int a0 = 0; a0 <= m; ++a0)
    for (int a1 = 0; a1 <= (N > 1 ? m - a0 : 0); ++a1) {
      const int a2 = m - a0 - a1;
      if (N == 1 && a0 != m) continue;
      if (N == 2 && a0 + a1 != m) continue;
      if (N == 3 && a2 < 0) continue;
      const int alpha[3] = {a0, a1, a2};
      std::vector<SparseMatrix> per;
      for (int d = 0; d < N; ++d) per.push_back(grams[d][alpha[d]]);
      K += kron_axes(per);
    }
  SparseMatrix Kt = K.transpose();
  K = 0.5 * (K + Kt);
  K.prune(0.0);
  return space.reduce(K);
}

namespace {

struct CellBox {
  int e[3] = {0, 0, 0};
  double lo[3] = {0, 0, 0};
  double hi[3] = {0, 0, 0};
};

template <class F>
void for_each_cell(const DiscreteSpace& s, F&& f) {
  const int N = s.domain().dim();
  const auto ne = s.elements_per_axis();
  const int total = s.cell_count();
  CellBox c;
  for (int t = 0; t < total; ++t) {
    int rem = t;
    for (int d = 0; d < N; ++d) {
      c.e[d] = rem % ne[d];
      rem /= ne[d];
      c.lo[d] = s.axis(d).element_lo(c.e[d]);
      c.hi[d] = s.axis(d).element_hi(c.e[d]);
    }
    f(c);
  }
}

bool clip(const CellBox& c, const std::vector<std::array<double, 2>>& box, int N, double* lo, double* hi) {
  for (int d = 0; d < N; ++d) {
    lo[d] = std::max(c.lo[d], box[d][0]);
    hi[d] = std::min(c.hi[d], box[d][1]);
    if (!(hi[d] > lo[d])) return false;
  }
  return true;
}

struct PointOptions {
  bool piecewise = true;  // background, boxes, strips, 1D balls
  bool curved = true;     // smooth part, balls in N >= 2
  int nq = 3;
  QuadratureOptions quad;
};

struct PointStats {
  int cut_cells = 0;
  std::vector<double> ball_volume;
};

// Density-weighted quadrature points, cell by cell: sum_q w_q g(x_q) ≈ int_cell rho g.
template <class F>
void density_points(const DiscreteSpace& s, const Density& rho, const PointOptions& opt, PointStats& stats, F&& fn) {
  const int N = s.domain().dim();
  const Domain& dom = s.domain();
  PointSet ps, tmp;
  stats.ball_volume.assign(rho.layers().size(), 0.0);
  for_each_cell(s, [&](const CellBox& c) {
    ps.clear();
    if (opt.piecewise) append_box_rule(N, c.lo, c.hi, opt.nq, rho.background(), ps);
    if (opt.curved && rho.has_smooth_part()) {
      tmp.clear();
      append_box_rule(N, c.lo, c.hi, opt.nq, 1.0, tmp);
      for (std::size_t q = 0; q < tmp.size(); ++q) {
        ps.x.push_back(tmp.x[q]);
        ps.w.push_back(tmp.w[q] * rho.smooth_part(tmp.x[q]));
      }
    }
    double lo[3], hi[3];
    for (std::size_t li = 0; li < rho.layers().size(); ++li) {
      const auto& layer = rho.layers()[li];
      if (const Box* b = std::get_if<Box>(&layer.region)) {
        if (opt.piecewise && clip(c, b->bounds, N, lo, hi)) append_box_rule(N, lo, hi, opt.nq, layer.add, ps);
      } else if (const BoundaryStrip* st = std::get_if<BoundaryStrip>(&layer.region)) {
        if (!opt.piecewise) continue;
        append_box_rule(N, c.lo, c.hi, opt.nq, layer.add, ps);
        std::vector<std::array<double, 2>> inner;
        for (int d = 0; d < N; ++d) inner.push_back({dom.lo(d) + st->width, dom.hi(d) - st->width});
        if (clip(c, inner, N, lo, hi)) append_box_rule(N, lo, hi, opt.nq, -layer.add, ps);
      } else if (const Ball* b = std::get_if<Ball>(&layer.region)) {
        if (N == 1) {
          if (!opt.piecewise) continue;
          std::vector<std::array<double, 2>> iv{{b->center[0] - b->radius, b->center[0] + b->radius}};
          if (clip(c, iv, N, lo, hi)) append_box_rule(N, lo, hi, opt.nq, layer.add, ps);
          continue;
        }
        if (!opt.curved) continue;
        const auto rel = classify_box_ball(N, c.lo, c.hi, b->center, b->radius);
        if (rel == BallCellRelation::Outside) continue;
        if (rel == BallCellRelation::Cut) ++stats.cut_cells;
        const std::size_t before = ps.size();
        if (opt.quad.interface == QuadratureOptions::Interface::CutCell)
          append_box_ball_rule(N, c.lo, c.hi, b->center, b->radius, opt.nq, opt.quad.curved_points, layer.add, ps);
        else
          append_box_ball_subdivision(N, c.lo, c.hi, b->center, b->radius, opt.nq, opt.quad.subdivision_depth,
                                      layer.add, ps);
        for (std::size_t q = before; q < ps.size(); ++q) stats.ball_volume[li] += ps.w[q] / layer.add;
      }
    }
    if (ps.size() > 0) fn(c, ps);
  });
}

// Values of the (p+1)^N local tensor functions at the points of ps: Phi(q, a).
void tensor_values(const DiscreteSpace& s, const CellBox& c, const PointSet& ps, Eigen::MatrixXd& Phi,
                   std::vector<int>& global) {
  const int N = s.domain().dim(), np = s.degree() + 1;
  const int nloc = N == 1 ? np : (N == 2 ? np * np : np * np * np);
  Phi.resize(ps.size(), nloc);
  double v[3][8];
  for (std::size_t q = 0; q < ps.size(); ++q) {
    for (int d = 0; d < N; ++d) s.axis(d).evaluate(c.e[d], ps.x[q][d], 0, v[d]);
    for (int a = 0; a < nloc; ++a) {
      int rem = a;
      double val = 1.0;
      for (int d = 0; d < N; ++d) {
        val *= v[d][rem % np];
        rem /= np;
      }
      Phi(q, a) = val;
    }
  }
  global.resize(nloc);
  const int n0 = s.axis(0).size(), n1 = N > 1 ? s.axis(1).size() : 1;
  for (int a = 0; a < nloc; ++a) {
    int rem = a, idx[3] = {0, 0, 0};
    for (int d = 0; d < N; ++d) {
      idx[d] = c.e[d] + rem % np;
      rem /= np;
    }
    global[a] = idx[0] + n0 * (idx[1] + n1 * idx[2]);
  }
}

}  // namespace

MassAssembly assemble_mass_report(const DiscreteSpace& space, const Density& rho, const QuadratureOptions& q) {
  if (!(rho.inf_value() > 0.0)) throw Error("assemble_mass: density must be positive");
  const int N = space.domain().dim();
  const Domain& dom = space.domain();
  std::vector<SparseMatrix> full;
  for (int d = 0; d < N; ++d) full.push_back(space.axis(d).derivative_gram(0));
  SparseMatrix M = rho.background() * kron_axes(full);
  for (const auto& layer : rho.layers()) {
    std::vector<SparseMatrix> part;
    if (const Box* b = std::get_if<Box>(&layer.region)) {
      for (int d = 0; d < N; ++d) part.push_back(space.axis(d).derivative_gram(0, b->bounds[d][0], b->bounds[d][1]));
      M += layer.add * kron_axes(part);
    } else if (const BoundaryStrip* st = std::get_if<BoundaryStrip>(&layer.region)) {
      for (int d = 0; d < N; ++d)
        part.push_back(space.axis(d).derivative_gram(0, dom.lo(d) + st->width, dom.hi(d) - st->width));
      M += layer.add * (kron_axes(full) - kron_axes(part));
    } else if (const Ball* b = std::get_if<Ball>(&layer.region); b && N == 1) {
      part.push_back(space.axis(0).derivative_gram(0, b->center[0] - b->radius, b->center[0] + b->radius));
      M += layer.add * part[0];
    }
  }
  MassAssembly out;
  PointOptions opt;
  opt.piecewise = false;
  opt.curved = true;
  opt.nq = space.degree() + 1;
  opt.quad = q;
  if (rho.has_smooth_part()) opt.nq = space.degree() + 4;
  bool any_curved = rho.has_smooth_part();
  for (const auto& layer : rho.layers())
    if (std::holds_alternative<Ball>(layer.region) && N > 1) any_curved = true;
  if (any_curved) {
    PointStats stats;
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::MatrixXd Phi;
    std::vector<int> global;
    density_points(space, rho, opt, stats, [&](const CellBox& c, const PointSet& ps) {
      tensor_values(space, c, ps, Phi, global);
      Eigen::Map<const Eigen::VectorXd> w(ps.w.data(), ps.w.size());
      const Eigen::MatrixXd loc = Phi.transpose() * (w.asDiagonal() * Phi);
      for (int a = 0; a < loc.rows(); ++a)
        for (int b = 0; b < loc.cols(); ++b) trip.emplace_back(global[a], global[b], loc(a, b));
    });
    SparseMatrix C(space.full_size(), space.full_size());
    C.setFromTriplets(trip.begin(), trip.end());
    M += C;
    out.interface_cells = stats.cut_cells;
    for (std::size_t li = 0; li < rho.layers().size(); ++li)
      if (const Ball* b = std::get_if<Ball>(&rho.layers()[li].region)) {
        const double exact = ball_volume(N, b->radius);
        out.interface_volume_error += std::abs(stats.ball_volume[li] - exact) / exact;
      }
  }
  // symmetrize exactly
  SparseMatrix Mt = M.transpose();
  M = 0.5 * (M + Mt);
  M.prune(0.0);
  out.M = space.reduce(M);
  return out;
}

SparseMatrix assemble_mass(const DiscreteSpace& space, const Density& rho, const QuadratureOptions& q) {
  return assemble_mass_report(space, rho, q).M;
}

SparseMatrix assemble_boundary_mass(const DiscreteSpace& space) {
  if (space.bc() != BoundaryCondition::Natural) throw Error("assemble_boundary_mass: needs a natural space");
  const int N = space.domain().dim();
  std::vector<SparseMatrix> grams;
  for (int d = 0; d < N; ++d) grams.push_back(space.axis(d).derivative_gram(0));
  SparseMatrix B(space.full_size(), space.full_size());
  for (int d = 0; d < N; ++d)
    for (int side = 0; side < 2; ++side) {
      const int n = space.axis(d).size();
      SparseMatrix E(n, n);
      E.insert(side == 0 ? 0 : n - 1, side == 0 ? 0 : n - 1) = 1.0;
      auto per = grams;
      per[d] = E;
      B += kron_axes(per);
    }
  B.prune(0.0);
  return B;
}

Projection project(const std::function<double(const Point&)>& f, const DiscreteSpace& space, const Density& rho,
                   const Box* support) {
  const SparseMatrix M = assemble_mass(space, rho);
  PointOptions opt;
  opt.nq = space.degree() + 3;
  PointStats stats;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(space.full_size());
  Eigen::MatrixXd Phi;
  std::vector<int> global;
  double fnorm = 0.0;
  density_points(space, rho, opt, stats, [&](const CellBox& c, const PointSet& ps) {
    tensor_values(space, c, ps, Phi, global);
    for (std::size_t q = 0; q < ps.size(); ++q) {
      const double fv = f(ps.x[q]);
      fnorm += ps.w[q] * fv * fv;
      for (int a = 0; a < Phi.cols(); ++a) b[global[a]] += ps.w[q] * fv * Phi(q, a);
    }
  });
  const Eigen::VectorXd br = space.reduce(DofVector(b));
  const int n = static_cast<int>(br.size());

  std::vector<int> keep;
  if (support) {
    // functions whose support lies inside the box
    const int N = space.domain().dim();
    std::vector<std::vector<char>> ok(N);
    for (int d = 0; d < N; ++d) {
      const SplineBasis1D& ax = space.axis(d);
      const int p = ax.degree();
      ok[d].assign(ax.size(), 0);
      for (int i = 0; i < ax.size(); ++i) {
        const double a = ax.element_lo(std::max(0, i - p));
        const double bb = ax.element_hi(std::min(ax.elements() - 1, i));
        ok[d][i] = a >= support->bounds[d][0] - 1e-14 && bb <= support->bounds[d][1] + 1e-14;
      }
    }
    DofVector sel = DofVector::Zero(space.full_size());
    std::vector<int> idx(N, 0);
    for (int g = 0; g < space.full_size(); ++g) {
      int rest = g;
      bool in = true;
      for (int d = 0; d < N; ++d) {
        const int sz = space.axis(d).size();
        in = in && ok[d][rest % sz];
        rest /= sz;
      }
      sel[g] = in ? 1.0 : 0.0;
    }
    const DofVector selr = space.reduce(sel);
    for (int i = 0; i < n; ++i)
      if (selr[i] > 0.5) keep.push_back(i);
    if (keep.empty()) throw Error("project: support box contains no basis function");
  } else {
    keep.resize(n);
    for (int i = 0; i < n; ++i) keep[i] = i;
  }

  const int nk = static_cast<int>(keep.size());
  std::vector<int> pos(n, -1);
  for (int i = 0; i < nk; ++i) pos[keep[i]] = i;
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < M.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(M, k); it; ++it)
      if (pos[it.row()] >= 0 && pos[it.col()] >= 0) trip.emplace_back(pos[it.row()], pos[it.col()], it.value());
  SparseMatrix Ml(nk, nk);
  Ml.setFromTriplets(trip.begin(), trip.end());
  Eigen::VectorXd bl(nk);
  for (int i = 0; i < nk; ++i) bl[i] = br[keep[i]];

  Eigen::SimplicialLDLT<SparseMatrix> solver(Ml);
  if (solver.info() != Eigen::Success) throw Error("project: mass matrix factorization failed");
  const Eigen::VectorXd cl = solver.solve(bl);
  Projection out;
  out.coefficients = DofVector::Zero(n);
  for (int i = 0; i < nk; ++i) out.coefficients[keep[i]] = cl[i];
  out.residual = (Ml * cl - bl).norm() / std::max(bl.norm(), 1e-300);
  // ||f - Pf||^2 = ||f||^2 - c.b at the solution
  const double err2 = std::max(0.0, fnorm - cl.dot(bl));
  out.relative_error = fnorm > 0.0 ? std::sqrt(err2 / fnorm) : 0.0;
  return out;
}

void export_matrix(const SparseMatrix& A, std::ostream& os) {
  char buf[96];
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", static_cast<int>(it.row()), static_cast<int>(it.col()),
                    it.value());
      os << buf;
    }
}

void export_matrix(const SparseMatrix& A, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("export_matrix: cannot open " + path);
  export_matrix(A, os);
  if (!os) throw Error("export_matrix: write failed for " + path);
}

}  // namespace pdlab

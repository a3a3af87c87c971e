#include "pdlab/bspline.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>

#include "pdlab/geometry.hpp"
#include "pdlab/quadrature.hpp"

namespace pdlab {

namespace {
constexpr int kMaxDegree = 7;
}

SplineBasis1D::SplineBasis1D(std::vector<double> breaks, int degree) : breaks_(std::move(breaks)), p_(degree) {
  if (p_ < 1 || p_ > kMaxDegree) throw Error("SplineBasis1D: degree must be in [1, 7]");
  if (breaks_.size() < 2) throw Error("SplineBasis1D: need at least one element");
  for (std::size_t i = 1; i < breaks_.size(); ++i)
    if (!(breaks_[i] > breaks_[i - 1])) throw Error("SplineBasis1D: break points must increase strictly");
  knots_.assign(p_ + 1, breaks_.front());
  knots_.insert(knots_.end(), breaks_.begin() + 1, breaks_.end() - 1);
  knots_.insert(knots_.end(), p_ + 1, breaks_.back());
}

int SplineBasis1D::find_element(double x) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  int e = static_cast<int>(it - breaks_.begin()) - 1;
  return std::clamp(e, 0, elements() - 1);
}

void SplineBasis1D::evaluate(int e, double x, int nd, double* out) const {
  const int p = p_;
  const int span = e + p;
  const auto& U = knots_;
  double ndu[kMaxDegree + 1][kMaxDegree + 1];
  double left[kMaxDegree + 1], right[kMaxDegree + 1];
  ndu[0][0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - U[span + 1 - j];
    right[j] = U[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      const double temp = ndu[r][j - 1] / ndu[j][r];
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }
  const int np = p + 1;
  for (int k = 0; k <= nd; ++k)
    for (int j = 0; j <= p; ++j) out[k * np + j] = 0.0;
  for (int j = 0; j <= p; ++j) out[j] = ndu[j][p];
  const int top = std::min(nd, p);
  double a[2][kMaxDegree + 1];
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a[0][0] = 1.0;
    for (int k = 1; k <= top; ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
        d = a[s2][0] * ndu[rk][pk];
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
        d += a[s2][j] * ndu[rk + j][pk];
      }
      if (r <= pk) {
        a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
        d += a[s2][k] * ndu[r][pk];
      }
      out[k * np + r] = d;
      std::swap(s1, s2);
    }
  }
  double f = p;
  for (int k = 1; k <= top; ++k) {
    for (int j = 0; j <= p; ++j) out[k * np + j] *= f;
    f *= (p - k);
  }
}

SparseMatrix SplineBasis1D::derivative_gram(int k, double a, double b) const {
  const int n = size(), np = p_ + 1;
  std::vector<Eigen::Triplet<double>> trip;
  const Rule1D& g = gauss_legendre(p_ + 1);
  std::vector<double> vals((k + 1) * np);
  for (int e = 0; e < elements(); ++e) {
    const double l = std::max(a, breaks_[e]), u = std::min(b, breaks_[e + 1]);
    if (!(u > l)) continue;
    double loc[kMaxDegree + 1][kMaxDegree + 1] = {};
    for (std::size_t q = 0; q < g.x.size(); ++q) {
      const double x = l + 0.5 * (u - l) * (g.x[q] + 1.0);
      const double w = 0.5 * (u - l) * g.w[q];
      evaluate(e, x, k, vals.data());
      const double* d = vals.data() + k * np;
      for (int i = 0; i < np; ++i)
        for (int j = 0; j < np; ++j) loc[i][j] += w * d[i] * d[j];
    }
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < np; ++j) trip.emplace_back(e + i, e + j, loc[i][j]);
  }
  SparseMatrix G(n, n);
  G.setFromTriplets(trip.begin(), trip.end());
  return G;
}

std::vector<double> SplineBasis1D::monomial_coefficients(int q) const {
  if (q < 0 || q > p_) throw Error("monomial_coefficients: degree exceeds spline degree");
  std::vector<double> c(size());
  double binom = 1.0;
  for (int i = 1; i <= q; ++i) binom = binom * (p_ - q + i) / i;
  for (int i = 0; i < size(); ++i) {
    // elementary symmetric polynomial e_q of knots t_{i+1}..t_{i+p}
    std::vector<double> e(q + 1, 0.0);
    e[0] = 1.0;
    for (int s = 1; s <= p_; ++s) {
      const double t = knots_[i + s];
      for (int r = std::min(q, s); r >= 1; --r) e[r] += t * e[r - 1];
    }
    c[i] = e[q] / binom;
  }
  return c;
}

SparseMatrix SplineBasis1D::prolongation_to(const SplineBasis1D& fine) const {
  if (fine.degree() != p_) throw Error("prolongation_to: degrees differ");
  const int nc = size(), nf = fine.size(), np = p_ + 1;
  const Rule1D& g = gauss_legendre(p_ + 1);
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<double> vf(np), vc(np);
  for (int e = 0; e < fine.elements(); ++e) {
    const double l = fine.element_lo(e), u = fine.element_hi(e);
    const int ec = find_element(0.5 * (l + u));
    for (std::size_t q = 0; q < g.x.size(); ++q) {
      const double x = l + 0.5 * (u - l) * (g.x[q] + 1.0);
      const double w = 0.5 * (u - l) * g.w[q];
      fine.evaluate(e, x, 0, vf.data());
      evaluate(ec, x, 0, vc.data());
      for (int i = 0; i < np; ++i)
        for (int j = 0; j < np; ++j) trip.emplace_back(e + i, ec + j, w * vf[i] * vc[j]);
    }
  }
  SparseMatrix mixed(nf, nc);
  mixed.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<SparseMatrix> mass(fine.derivative_gram(0));
  Eigen::MatrixXd P = mass.solve(Eigen::MatrixXd(mixed));
  SparseMatrix S = P.sparseView(1.0, 1e-13);
  return S;
}

std::vector<double> uniform_breaks(double lo, double hi, int n) {
  if (n < 1) throw Error("uniform_breaks: need n >= 1");
  std::vector<double> b(n + 1);
  for (int i = 0; i <= n; ++i) b[i] = lo + (hi - lo) * i / n;
  b[n] = hi;
  return b;
}

std::vector<double> bisect_breaks(const std::vector<double>& breaks) {
  std::vector<double> out;
  out.reserve(2 * breaks.size());
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    out.push_back(breaks[i]);
    out.push_back(0.5 * (breaks[i] + breaks[i + 1]));
  }
  out.push_back(breaks.back());
  return out;
}

std::vector<double> graded_breaks(double lo, double hi, int base_elements, const std::vector<AxisFeature>& features,
                                  int cells_across, double growth) {
  if (base_elements < 1 || cells_across < 1 || !(growth > 1.0)) throw Error("graded_breaks: bad parameters");
  const double hb = (hi - lo) / base_elements;
  std::vector<AxisFeature> fs;
  for (auto f : features) {
    f.a = std::max(f.a, lo);
    f.b = std::min(f.b, hi);
    if (f.b > f.a) fs.push_back(f);
  }
  auto size_at = [&](double x) {
    double h = hb;
    for (const auto& f : fs) {
      const double s = (f.b - f.a) / cells_across;
      const double dist = x < f.a ? f.a - x : (x > f.b ? x - f.b : 0.0);
      h = std::min(h, s + (growth - 1.0) * dist);
    }
    return h;
  };
  std::vector<double> anchors{lo, hi};
  for (const auto& f : fs) {
    if (f.a > lo && f.a < hi) anchors.push_back(f.a);
    if (f.b > lo && f.b < hi) anchors.push_back(f.b);
  }
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end(),
                            [&](double u, double v) { return std::abs(u - v) < 1e-14 * (hi - lo); }),
                anchors.end());
  std::vector<double> out{lo};
  constexpr int kSamples = 4096;
  for (std::size_t k = 0; k + 1 < anchors.size(); ++k) {
    const double a = anchors[k], b = anchors[k + 1];
    // cumulative cell count Phi(x) = int_a^x dt / h(t), trapezoid on a fine sample
    std::vector<double> xs(kSamples + 1), phi(kSamples + 1, 0.0);
    for (int i = 0; i <= kSamples; ++i) xs[i] = a + (b - a) * i / kSamples;
    for (int i = 1; i <= kSamples; ++i)
      phi[i] = phi[i - 1] + 0.5 * (xs[i] - xs[i - 1]) * (1.0 / size_at(xs[i - 1]) + 1.0 / size_at(xs[i]));
    const int cells = std::max(1, static_cast<int>(std::ceil(phi.back() - 1e-6)));
    for (int c = 1; c < cells; ++c) {
      const double target = phi.back() * c / cells;
      const auto it = std::lower_bound(phi.begin(), phi.end(), target);
      const int i = std::max(1, static_cast<int>(it - phi.begin()));
      const double t = (target - phi[i - 1]) / (phi[i] - phi[i - 1]);
      out.push_back(xs[i - 1] + t * (xs[i] - xs[i - 1]));
    }
    out.push_back(b);
  }
  return out;
}

}  // namespace pdlab

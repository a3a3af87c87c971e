#include "pdlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace pdlab {

namespace {

Rule1D make_gauss_legendre(int n) {
  Rule1D r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

struct Frame {
  int N;
  const double* lo;
  const double* hi;
  const Point& c;
  int n_poly;
  int n_curved;
  PointSet& out;
};

// Integrate over {x : x_d in [lo_d, hi_d] for d >= axis, |x_{axis..} - c_{axis..}| < R} with the leading
// coordinates already fixed in p.
void cut_recursive(const Frame& f, int axis, double R, Point& p, double factor) {
  const double a = std::max(f.lo[axis], f.c[axis] - R);
  const double b = std::min(f.hi[axis], f.c[axis] + R);
  if (!(b > a)) return;
  if (axis == f.N - 1) {
    const Rule1D& g = gauss_legendre(f.n_poly);
    const double h = 0.5 * (b - a);
    for (std::size_t q = 0; q < g.x.size(); ++q) {
      p[axis] = a + h * (g.x[q] + 1.0);
      f.out.x.push_back(p);
      f.out.w.push_back(factor * h * g.w[q]);
    }
    return;
  }
  // cross-section radius rho(x) = sqrt(R^2 - (x - c)^2); break wherever rho equals a distance from the
  // sub-centre to a face or corner of the remaining box
  std::vector<double> dist;
  const int rest = f.N - axis - 1;
  std::vector<std::array<double, 2>> dd(rest);
  for (int k = 0; k < rest; ++k) {
    const int d = axis + 1 + k;
    dd[k] = {std::abs(f.lo[d] - f.c[d]), std::abs(f.hi[d] - f.c[d])};
    dist.push_back(dd[k][0]);
    dist.push_back(dd[k][1]);
  }
  if (rest == 2)
    for (double u : dd[0])
      for (double v : dd[1]) dist.push_back(std::hypot(u, v));
  std::vector<double> cuts{a, b};
  for (double d : dist)
    if (d < R) {
      const double s = std::sqrt(R * R - d * d);
      for (double x : {f.c[axis] - s, f.c[axis] + s})
        if (x > a && x < b) cuts.push_back(x);
    }
  std::sort(cuts.begin(), cuts.end());
  const Rule1D& g = gauss_legendre(f.n_curved);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double l = cuts[k], u = cuts[k + 1];
    if (!(u - l > 1e-15 * R)) continue;
    for (std::size_t q = 0; q < g.x.size(); ++q) {
      const double s = 0.5 * (g.x[q] + 1.0);  // s in (0, 1)
      const double x = l + 0.5 * (u - l) * (1.0 - std::cos(std::numbers::pi * s));
      const double jac = 0.25 * (u - l) * std::numbers::pi * std::sin(std::numbers::pi * s) * g.w[q];
      const double t = x - f.c[axis];
      const double r2 = R * R - t * t;
      if (r2 <= 0.0) continue;
      p[axis] = x;
      cut_recursive(f, axis + 1, std::sqrt(r2), p, factor * jac);
    }
  }
}

}  // namespace

const Rule1D& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Rule1D>> cache;
  if (n < 1) throw Error("gauss_legendre: need at least one point");
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Rule1D>(make_gauss_legendre(n));
  return *slot;
}

double PointSet::weight_sum() const {
  double s = 0.0;
  for (double v : w) s += v;
  return s;
}

void append_box_rule(int N, const double* lo, const double* hi, int n, double factor, PointSet& out) {
  const Rule1D& g = gauss_legendre(n);
  double jac = factor;
  for (int d = 0; d < N; ++d) jac *= 0.5 * (hi[d] - lo[d]);
  int idx[3] = {0, 0, 0};
  const int total = N == 1 ? n : (N == 2 ? n * n : n * n * n);
  for (int t = 0; t < total; ++t) {
    int rem = t;
    for (int d = 0; d < N; ++d) {
      idx[d] = rem % n;
      rem /= n;
    }
    Point p{};
    double w = jac;
    for (int d = 0; d < N; ++d) {
      p[d] = lo[d] + 0.5 * (hi[d] - lo[d]) * (g.x[idx[d]] + 1.0);
      w *= g.w[idx[d]];
    }
    out.x.push_back(p);
    out.w.push_back(w);
  }
}

BallCellRelation classify_box_ball(int N, const double* lo, const double* hi, const Point& c, double R) {
  double near = 0.0, far = 0.0;
  for (int d = 0; d < N; ++d) {
    const double q = std::clamp(c[d], lo[d], hi[d]) - c[d];
    near += q * q;
    const double u = std::max(std::abs(lo[d] - c[d]), std::abs(hi[d] - c[d]));
    far += u * u;
  }
  if (near >= R * R) return BallCellRelation::Outside;
  if (far <= R * R) return BallCellRelation::Inside;
  return BallCellRelation::Cut;
}

void append_box_ball_rule(int N, const double* lo, const double* hi, const Point& c, double R, int n_poly,
                          int n_curved, double factor, PointSet& out) {
  switch (classify_box_ball(N, lo, hi, c, R)) {
    case BallCellRelation::Outside: return;
    case BallCellRelation::Inside: append_box_rule(N, lo, hi, n_poly, factor, out); return;
    case BallCellRelation::Cut: break;
  }
  Frame f{N, lo, hi, c, n_poly, n_curved, out};
  Point p{};
  cut_recursive(f, 0, R, p, factor);
}

void append_box_ball_subdivision(int N, const double* lo, const double* hi, const Point& c, double R, int n,
                                 int depth, double factor, PointSet& out) {
  switch (classify_box_ball(N, lo, hi, c, R)) {
    case BallCellRelation::Outside: return;
    case BallCellRelation::Inside: append_box_rule(N, lo, hi, n, factor, out); return;
    case BallCellRelation::Cut: break;
  }
  if (depth == 0) {
    Point mid{};
    for (int d = 0; d < N; ++d) mid[d] = 0.5 * (lo[d] + hi[d]);
    if (distance(mid, c, N) < R) append_box_rule(N, lo, hi, n, factor, out);
    return;
  }
  const int children = 1 << N;
  for (int k = 0; k < children; ++k) {
    double l[3], h[3];
    for (int d = 0; d < N; ++d) {
      const double m = 0.5 * (lo[d] + hi[d]);
      const bool upper = (k >> d) & 1;
      l[d] = upper ? m : lo[d];
      h[d] = upper ? hi[d] : m;
    }
    append_box_ball_subdivision(N, l, h, c, R, n, depth - 1, factor, out);
  }
}

}  // namespace pdlab

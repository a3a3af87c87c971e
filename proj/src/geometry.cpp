#include "pdlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pdlab {

double unit_ball_volume(int N) {
  switch (N) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi / 3.0;
  }
  throw Error("unit_ball_volume: dimension must be 1, 2 or 3");
}

double unit_sphere_area(int N) { return N * unit_ball_volume(N); }

Domain::Domain(int dim, std::vector<std::array<double, 2>> bounds) : dim_(dim), bounds_(std::move(bounds)) {
  if (dim_ < 1 || dim_ > 3) throw Error("Domain: dimension must be 1, 2 or 3");
  if (static_cast<int>(bounds_.size()) != dim_) throw Error("Domain: need one [lo, hi] pair per axis");
  for (const auto& b : bounds_)
    if (!(b[0] < b[1])) throw Error("Domain: each axis needs lo < hi");
}

Domain Domain::unit(int dim) { return Domain(dim, std::vector<std::array<double, 2>>(dim, {0.0, 1.0})); }

double Domain::min_edge() const {
  double e = edge(0);
  for (int d = 1; d < dim_; ++d) e = std::min(e, edge(d));
  return e;
}

bool Domain::contains(const Point& x) const {
  for (int d = 0; d < dim_; ++d)
    if (x[d] < lo(d) || x[d] > hi(d)) return false;
  return true;
}

double Domain::distance_to_boundary(const Point& x) const {
  double r = std::min(x[0] - lo(0), hi(0) - x[0]);
  for (int d = 1; d < dim_; ++d) r = std::min({r, x[d] - lo(d), hi(d) - x[d]});
  return r;
}

Domain Domain::scaled(double t) const {
  auto b = bounds_;
  for (auto& p : b) {
    p[0] *= t;
    p[1] *= t;
  }
  return Domain(dim_, b);
}

double volume(const Domain& domain) {
  double v = 1.0;
  for (int d = 0; d < domain.dim(); ++d) v *= domain.edge(d);
  return v;
}

double boundary_measure(const Domain& domain) {
  const int N = domain.dim();
  if (N == 1) return 2.0;
  double s = 0.0;
  // each pair of opposite faces has measure prod of the other edges
  for (int d = 0; d < N; ++d) {
    double face = 1.0;
    for (int e = 0; e < N; ++e)
      if (e != d) face *= domain.edge(e);
    s += 2.0 * face;
  }
  return s;
}

void check_strip(const Domain& domain, double eps) {
  if (!(eps > 0.0) || !(eps < 0.5 * domain.min_edge()))
    throw Error("strip width must lie in (0, min_edge/2)");
}

double strip_volume(const Domain& domain, double eps) {
  check_strip(domain, eps);
  double inner = 1.0;
  for (int d = 0; d < domain.dim(); ++d) inner *= domain.edge(d) - 2.0 * eps;
  return volume(domain) - inner;
}

double ball_volume(int N, double r) { return unit_ball_volume(N) * std::pow(r, N); }

double annulus_volume(int N, const Annulus& a) {
  return unit_ball_volume(N) * (std::pow(a.outer, N) - std::pow(a.inner, N));
}

double distance(const Point& a, const Point& b, int N) {
  double s = 0.0;
  for (int d = 0; d < N; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
  return std::sqrt(s);
}

bool region_membership(const Point& x, const Region& region, const Domain& domain) {
  const int N = domain.dim();
  return std::visit(
      [&](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return distance(x, r.center, N) < r.radius;
        } else if constexpr (std::is_same_v<T, Annulus>) {
          const double t = distance(x, r.center, N);
          return t > r.inner && t < r.outer;
        } else if constexpr (std::is_same_v<T, BoundaryStrip>) {
          return domain.distance_to_boundary(x) < r.width;
        } else {
          for (int d = 0; d < N; ++d)
            if (x[d] < r.bounds[d][0] || x[d] >= r.bounds[d][1]) return false;
          return true;
        }
      },
      region);
}

bool compactly_contained(const Ball& b, const Domain& domain) {
  for (int d = 0; d < domain.dim(); ++d)
    if (b.center[d] - b.radius <= domain.lo(d) || b.center[d] + b.radius >= domain.hi(d)) return false;
  return b.radius > 0.0;
}

}  // namespace pdlab

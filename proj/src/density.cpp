#include "pdlab/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pdlab/quadrature.hpp"

namespace pdlab {

std::string to_string(DensityKind k) {
  switch (k) {
    case DensityKind::Constant: return "constant";
    case DensityKind::PointConcentration: return "point_concentration";
    case DensityKind::TildeConcentration: return "tilde_concentration";
    case DensityKind::BoundaryStripWeyl: return "boundary_strip";
    case DensityKind::SteklovFamily: return "steklov";
    case DensityKind::MultiPoint: return "multi_point";
    case DensityKind::PiecewiseConstant: return "piecewise_constant";
    case DensityKind::Smooth: return "smooth";
  }
  return "unknown";
}

namespace {

bool box_inside_domain(const Box& b, const Domain& d) {
  if (static_cast<int>(b.bounds.size()) != d.dim()) return false;
  for (int k = 0; k < d.dim(); ++k)
    if (b.bounds[k][0] < d.lo(k) || b.bounds[k][1] > d.hi(k) || !(b.bounds[k][1] > b.bounds[k][0])) return false;
  return true;
}

// Inner box of a strip: points at distance >= eps from the boundary.
Box inner_box(const Domain& d, double eps) {
  Box b;
  for (int k = 0; k < d.dim(); ++k) b.bounds.push_back({d.lo(k) + eps, d.hi(k) - eps});
  return b;
}

bool box_in_box(const Box& a, const Box& outer) {
  for (std::size_t k = 0; k < a.bounds.size(); ++k)
    if (a.bounds[k][0] < outer.bounds[k][0] || a.bounds[k][1] > outer.bounds[k][1]) return false;
  return true;
}

bool ball_in_box(const Ball& b, const Box& box, int N) {
  for (int k = 0; k < N; ++k)
    if (b.center[k] - b.radius < box.bounds[k][0] || b.center[k] + b.radius > box.bounds[k][1]) return false;
  return true;
}

bool disjoint(const Region& r1, const Region& r2, const Domain& d) {
  const int N = d.dim();
  const Ball* b1 = std::get_if<Ball>(&r1);
  const Ball* b2 = std::get_if<Ball>(&r2);
  const Box* x1 = std::get_if<Box>(&r1);
  const Box* x2 = std::get_if<Box>(&r2);
  const BoundaryStrip* s1 = std::get_if<BoundaryStrip>(&r1);
  const BoundaryStrip* s2 = std::get_if<BoundaryStrip>(&r2);
  if (b1 && b2) return distance(b1->center, b2->center, N) >= b1->radius + b2->radius;
  if ((b1 && x2) || (x1 && b2)) {
    const Ball& b = b1 ? *b1 : *b2;
    const Box& x = x1 ? *x1 : *x2;
    double lo[3], hi[3];
    for (int k = 0; k < N; ++k) {
      lo[k] = x.bounds[k][0];
      hi[k] = x.bounds[k][1];
    }
    return classify_box_ball(N, lo, hi, b.center, b.radius) == BallCellRelation::Outside;
  }
  if (x1 && x2) {
    for (int k = 0; k < N; ++k)
      if (x1->bounds[k][1] <= x2->bounds[k][0] || x2->bounds[k][1] <= x1->bounds[k][0]) return true;
    return false;
  }
  if (s1 || s2) {
    const BoundaryStrip& s = s1 ? *s1 : *s2;
    const Region& other = s1 ? r2 : r1;
    const Box inner = inner_box(d, s.width);
    if (const Ball* b = std::get_if<Ball>(&other)) return ball_in_box(*b, inner, N);
    if (const Box* x = std::get_if<Box>(&other)) return box_in_box(*x, inner);
    return false;
  }
  return false;
}

}  // namespace

Density Density::constant(const Domain& domain, double c) {
  Density r(domain, DensityKind::Constant);
  r.background_ = c;
  r.validate();
  return r;
}

Density Density::point_concentration(const Domain& domain, int m, double eps, double delta, const Point& center) {
  if (!(delta > 0.0 && delta < 0.5)) throw Error("point_concentration: delta must lie in (0, 1/2)");
  const int N = domain.dim();
  Density r(domain, DensityKind::PointConcentration);
  r.eps_ = eps;
  r.background_ = std::pow(eps, 2.0 * m - N - delta);
  r.layers_.push_back({Ball{center, eps}, std::pow(eps, -N)});
  r.validate();
  return r;
}

Density Density::tilde_concentration(const Domain& domain, int m, double eps, double delta, const Point& center) {
  if (!(delta > 0.0 && delta < 0.5)) throw Error("tilde_concentration: delta must lie in (0, 1/2)");
  Density r(domain, DensityKind::TildeConcentration);
  r.eps_ = eps;
  r.background_ = 1.0;
  r.layers_.push_back({Ball{center, eps}, std::pow(eps, -2.0 * m + delta)});
  r.validate();
  return r;
}

Density Density::boundary_strip_weyl(const Domain& domain, int m, double eps) {
  check_strip(domain, eps);
  const double N = domain.dim();
  Density r(domain, DensityKind::BoundaryStripWeyl);
  r.eps_ = eps;
  r.background_ = std::pow(eps, 2.0 - 2.0 * m / N);
  r.layers_.push_back({BoundaryStrip{eps}, std::pow(eps, -2.0 * m / N) - r.background_});
  r.validate();
  return r;
}

Density Density::steklov_family(const Domain& domain, double eps) {
  check_strip(domain, eps);
  Density r(domain, DensityKind::SteklovFamily);
  r.eps_ = eps;
  r.background_ = eps;
  r.layers_.push_back({BoundaryStrip{eps}, 1.0 / eps});
  r.validate();
  return r;
}

Density Density::multi_point(const Domain& domain, double eps, const std::vector<Point>& centers) {
  if (centers.empty()) throw Error("multi_point: need at least one centre");
  Density r(domain, DensityKind::MultiPoint);
  r.eps_ = eps;
  r.background_ = eps;
  for (const auto& c : centers) r.layers_.push_back({Ball{c, eps}, std::pow(eps, -domain.dim())});
  r.validate();
  return r;
}

Density Density::piecewise_constant(const Domain& domain, double background, const std::vector<Piece>& pieces) {
  Density r(domain, DensityKind::PiecewiseConstant);
  r.background_ = background;
  for (const auto& p : pieces) {
    if (std::holds_alternative<Annulus>(p.region)) throw Error("piecewise_constant: annuli are not supported");
    r.layers_.push_back({p.region, p.value - background});
  }
  r.validate();
  return r;
}

Density Density::smooth(const Domain& domain, double base, double amplitude) {
  Density r(domain, DensityKind::Smooth);
  r.background_ = base;
  r.amplitude_ = amplitude;
  r.validate();
  return r;
}

void Density::validate() const {
  if (!(eps_ >= 0.0)) throw Error("density: eps must be positive");
  if (kind_ != DensityKind::Constant && kind_ != DensityKind::PiecewiseConstant && kind_ != DensityKind::Smooth &&
      !(eps_ > 0.0))
    throw Error("density: eps must be positive");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Region& r = layers_[i].region;
    if (const Ball* b = std::get_if<Ball>(&r)) {
      if (!compactly_contained(*b, domain_)) throw Error("density: ball is not compactly contained in the domain");
    } else if (const Box* x = std::get_if<Box>(&r)) {
      if (!box_inside_domain(*x, domain_)) throw Error("density: box region must lie inside the domain");
    } else if (const BoundaryStrip* s = std::get_if<BoundaryStrip>(&r)) {
      check_strip(domain_, s->width);
    }
    for (std::size_t j = 0; j < i; ++j)
      if (!disjoint(r, layers_[j].region, domain_)) throw Error("density: regions overlap");
  }
  if (amplitude_ < 0.0) throw Error("density: smooth amplitude must be nonnegative");
  if (!(inf_value() > 0.0)) throw Error("density: essential infimum must be positive");
}

Density Density::scaled(double c) const {
  if (!(c > 0.0)) throw Error("density: scale factor must be positive");
  Density r = *this;
  r.background_ *= c;
  r.amplitude_ *= c;
  for (auto& l : r.layers_) l.add *= c;
  return r;
}

Density Density::dilated(double t) const {
  if (!(t > 0.0)) throw Error("density: dilation must be positive");
  Density r = *this;
  r.domain_ = domain_.scaled(t);
  r.eps_ *= t;
  const int N = domain_.dim();
  for (auto& l : r.layers_) {
    std::visit(
        [&](auto& g) {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, Ball>) {
            for (int d = 0; d < N; ++d) g.center[d] *= t;
            g.radius *= t;
          } else if constexpr (std::is_same_v<T, Box>) {
            for (auto& b : g.bounds) {
              b[0] *= t;
              b[1] *= t;
            }
          } else if constexpr (std::is_same_v<T, BoundaryStrip>) {
            g.width *= t;
          }
        },
        l.region);
  }
  return r;
}

double Density::smooth_part(const Point& x) const {
  if (amplitude_ == 0.0) return 0.0;
  double v = amplitude_;
  for (int d = 0; d < domain_.dim(); ++d) {
    const double s = std::sin(std::numbers::pi * (x[d] - domain_.lo(d)) / domain_.edge(d));
    v *= s * s;
  }
  return v;
}

double Density::evaluate(const Point& x) const {
  if (!domain_.contains(x)) throw Error("density: point outside the domain");
  double v = background_ + smooth_part(x);
  for (const auto& l : layers_)
    if (region_membership(x, l.region, domain_)) v += l.add;
  return v;
}

double Density::region_volume(const Region& r) const {
  const int N = domain_.dim();
  if (const Ball* b = std::get_if<Ball>(&r)) return ball_volume(N, b->radius);
  if (const Box* x = std::get_if<Box>(&r)) {
    double v = 1.0;
    for (const auto& e : x->bounds) v *= e[1] - e[0];
    return v;
  }
  if (const BoundaryStrip* s = std::get_if<BoundaryStrip>(&r)) return strip_volume(domain_, s->width);
  throw Error("density: unsupported region");
}

double Density::mass() const {
  double m = background_ * volume(domain_);
  if (amplitude_ != 0.0) m += amplitude_ * volume(domain_) * std::pow(0.5, domain_.dim());
  for (const auto& l : layers_) m += l.add * region_volume(l.region);
  return m;
}

LpIntegral Density::lp_norm(double p) const {
  if (!(p > 0.0)) throw Error("lp_norm: p must be positive");
  double integral = 0.0;
  if (amplitude_ != 0.0) {
    // smooth variant carries no layers
    const int N = domain_.dim();
    const int n = N == 3 ? 24 : 64;
    std::vector<double> lo(N), hi(N);
    PointSet ps;
    const int cells = N == 3 ? 4 : 8;
    for (int c = 0; c < static_cast<int>(std::pow(cells, N)); ++c) {
      int rem = c;
      for (int d = 0; d < N; ++d) {
        const int i = rem % cells;
        rem /= cells;
        lo[d] = domain_.lo(d) + domain_.edge(d) * i / cells;
        hi[d] = domain_.lo(d) + domain_.edge(d) * (i + 1) / cells;
      }
      append_box_rule(N, lo.data(), hi.data(), n, 1.0, ps);
    }
    for (std::size_t q = 0; q < ps.size(); ++q) integral += ps.w[q] * std::pow(background_ + smooth_part(ps.x[q]), p);
  } else {
    double rest = volume(domain_);
    for (const auto& l : layers_) {
      const double v = region_volume(l.region);
      rest -= v;
      integral += std::pow(background_ + l.add, p) * v;
    }
    integral += std::pow(background_, p) * rest;
  }
  return {std::pow(integral, 1.0 / p), integral};
}

double Density::sup_norm() const {
  double s = background_ + amplitude_;
  for (const auto& l : layers_) s = std::max(s, background_ + l.add);
  return s;
}

double Density::inf_value() const {
  double s = background_;
  for (const auto& l : layers_) s = std::min(s, background_ + l.add);
  return s;
}

std::vector<std::vector<AxisFeature>> Density::axis_features() const {
  const int N = domain_.dim();
  std::vector<std::vector<AxisFeature>> out(N);
  for (const auto& l : layers_) {
    if (const Ball* b = std::get_if<Ball>(&l.region)) {
      for (int d = 0; d < N; ++d) out[d].push_back({b->center[d] - b->radius, b->center[d] + b->radius});
    } else if (const BoundaryStrip* s = std::get_if<BoundaryStrip>(&l.region)) {
      for (int d = 0; d < N; ++d) {
        out[d].push_back({domain_.lo(d), domain_.lo(d) + s->width});
        out[d].push_back({domain_.hi(d) - s->width, domain_.hi(d)});
      }
    }
  }
  return out;
}

double Density::smallest_feature() const {
  double s = std::numeric_limits<double>::infinity();
  for (const auto& l : layers_) {
    if (const Ball* b = std::get_if<Ball>(&l.region)) s = std::min(s, 2.0 * b->radius);
    if (const BoundaryStrip* st = std::get_if<BoundaryStrip>(&l.region)) s = std::min(s, st->width);
  }
  return s;
}

}  // namespace pdlab

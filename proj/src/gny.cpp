#include "pdlab/gny.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pdlab/quadrature.hpp"

namespace pdlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ball_box_volume(int N, const double* lo, const double* hi, const Point& c, double R) {
  switch (classify_box_ball(N, lo, hi, c, R)) {
    case BallCellRelation::Outside: return 0.0;
    case BallCellRelation::Inside: {
      double v = 1.0;
      for (int d = 0; d < N; ++d) v *= hi[d] - lo[d];
      return v;
    }
    case BallCellRelation::Cut: break;
  }
  PointSet ps;
  append_box_ball_rule(N, lo, hi, c, R, 2, 16, 1.0, ps);
  return ps.weight_sum();
}

double box_overlap(int N, const double* lo, const double* hi, const std::vector<std::array<double, 2>>& b) {
  double v = 1.0;
  for (int d = 0; d < N; ++d) v *= std::max(0.0, std::min(hi[d], b[d][1]) - std::max(lo[d], b[d][0]));
  return v;
}

double far_distance(const Point& c, const Point& lo, const Point& hi, int N) {
  double s = 0.0;
  for (int d = 0; d < N; ++d) {
    const double t = std::max(std::abs(c[d] - lo[d]), std::abs(c[d] - hi[d]));
    s += t * t;
  }
  return std::sqrt(s);
}

double near_distance(const Point& c, const Point& lo, const Point& hi, int N) {
  double s = 0.0;
  for (int d = 0; d < N; ++d) {
    const double t = std::max({lo[d] - c[d], 0.0, c[d] - hi[d]});
    s += t * t;
  }
  return std::sqrt(s);
}

bool lex_less(const Point& a, const Point& b, int N) {
  for (int d = 0; d < N; ++d)
    if (a[d] != b[d]) return a[d] < b[d];
  return false;
}

// Smallest r with sum of w over items r_i <= r at least `need` (weighted quickselect); +inf when impossible.
double weighted_select(std::vector<std::pair<double, double>>& v, double need) {
  auto first = v.begin(), last = v.end();
  need *= 1 - 1e-12;
  while (first != last) {
    const double a = first->first, b = (first + (last - first) / 2)->first, c = (last - 1)->first;
    const double pivot = std::max(std::min(a, b), std::min(std::max(a, b), c));
    auto mid = std::partition(first, last, [&](const auto& e) { return e.first < pivot; });
    double s = 0.0;
    for (auto it = first; it != mid; ++it) s += it->second;
    if (s >= need) {
      last = mid;
      continue;
    }
    need -= s;
    auto mid2 = std::partition(mid, last, [&](const auto& e) { return e.first <= pivot; });
    double s2 = 0.0;
    for (auto it = mid; it != mid2; ++it) s2 += it->second;
    if (s2 >= need) return pivot;
    need -= s2;
    first = mid2;
  }
  return kInf;
}

// Smallest outer radius R such that the cells with near distance >= inner and far distance <= R carry
// at least `target`; +inf when impossible.
double smallest_radius(const MeasureSpace& ms, const Point& c, double inner, double target,
                       std::vector<std::pair<double, double>>& buf) {
  buf.clear();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (inner > 0.0 && near_distance(c, ms.lo[i], ms.hi[i], ms.dim) < inner) continue;
    buf.emplace_back(far_distance(c, ms.lo[i], ms.hi[i], ms.dim), ms.weights[i]);
  }
  const double r = weighted_select(buf, target);
  return std::isfinite(r) ? std::max(r, inner * (1.0 + 1e-12)) : r;
}

struct Candidate {
  double outer = kInf;
  double inner = 0.0;
  Point center{};
};

// Largest outer radius of a region at c with hole radius `inner` whose double avoids the regions not
// listed in `nested`.
double allowed_outer(const std::vector<Annulus>& regs, const Point& c, const std::vector<char>& nested, int N) {
  double rmax = kInf;
  for (std::size_t k = 0; k < regs.size(); ++k) {
    if (nested[k]) continue;
    const double d = distance(c, regs[k].center, N);
    const double apart = (d - 2 * regs[k].outer) / 2;
    const double in_hole = (regs[k].inner / 2 - d) / 2;
    rmax = std::min(rmax, std::max(apart, in_hole));
  }
  return rmax;
}

std::vector<Annulus> greedy(const MeasureSpace& ms, int J, double theta) {
  const int N = ms.dim;
  const double target = theta * ms.total / J;
  std::vector<Annulus> regs;
  std::vector<std::pair<double, double>> buf;
  auto better = [&](const Candidate& a, const Candidate& b) {
    if (a.outer < b.outer * (1 - 1e-12)) return true;
    if (a.outer > b.outer * (1 + 1e-12)) return false;
    return lex_less(a.center, b.center, N);
  };
  while (static_cast<int>(regs.size()) < J) {
    Candidate best;
    const std::vector<char> none(regs.size(), 0);
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const Point& c = ms.points[i];
      const double rmax = allowed_outer(regs, c, none, N);
      if (!(rmax > 0.0)) continue;
      const double R = smallest_radius(ms, c, 0.0, target, buf);
      if (R > rmax) continue;
      Candidate cand{R, 0.0, c};
      if (better(cand, best)) best = cand;
    }
    // annuli around claimed regions
    for (std::size_t i = 0; i < regs.size(); ++i) {
      const Point& a = regs[i].center;
      std::vector<std::pair<double, std::size_t>> reach;
      for (std::size_t k = 0; k < regs.size(); ++k)
        reach.emplace_back(distance(a, regs[k].center, N) + 2 * regs[k].outer, k);
      std::sort(reach.begin(), reach.end());
      std::vector<char> nested(regs.size(), 0);
      for (const auto& [e, k] : reach) {
        nested[k] = 1;
        const double r = 2 * e;
        const double rmax = allowed_outer(regs, a, nested, N);
        if (!(rmax > r)) continue;
        const double R = smallest_radius(ms, a, r, target, buf);
        if (R > rmax) continue;
        Candidate cand{R, r, a};
        if (better(cand, best)) best = cand;
      }
    }
    if (!std::isfinite(best.outer)) break;
    regs.push_back({best.center, best.inner, best.outer});
  }
  return regs;
}

}  // namespace

double cell_integral(const Density& rho, const double* lo, const double* hi) {
  const Domain& dom = rho.domain();
  const int N = dom.dim();
  double vol = 1.0;
  for (int d = 0; d < N; ++d) vol *= hi[d] - lo[d];
  double v = rho.background() * vol;
  if (rho.has_smooth_part()) {
    double s = rho.smooth_amplitude();
    for (int d = 0; d < N; ++d) {
      const double E = dom.edge(d), k = 2 * std::numbers::pi / E;
      s *= 0.5 * (hi[d] - lo[d]) - (std::sin(k * (hi[d] - dom.lo(d))) - std::sin(k * (lo[d] - dom.lo(d)))) / (2 * k);
    }
    v += s;
  }
  for (const auto& l : rho.layers()) {
    double part = 0.0;
    if (const Ball* b = std::get_if<Ball>(&l.region)) {
      part = ball_box_volume(N, lo, hi, b->center, b->radius);
    } else if (const Box* x = std::get_if<Box>(&l.region)) {
      part = box_overlap(N, lo, hi, x->bounds);
    } else if (const BoundaryStrip* s = std::get_if<BoundaryStrip>(&l.region)) {
      std::vector<std::array<double, 2>> core(N);
      for (int d = 0; d < N; ++d) core[d] = {dom.lo(d) + s->width, dom.hi(d) - s->width};
      part = vol - box_overlap(N, lo, hi, core);
    } else {
      throw Error("cell_integral: unsupported region");
    }
    v += l.add * part;
  }
  return v;
}

MeasureSpace MeasureSpace::build(const Density& rho, int base_cells, int cells_across) {
  const Domain& dom = rho.domain();
  const int N = dom.dim();
  if (base_cells < 1) throw Error("MeasureSpace: base_cells must be positive");
  const auto feats = rho.axis_features();
  std::vector<std::vector<double>> br(N);
  for (int d = 0; d < N; ++d) br[d] = graded_breaks(dom.lo(d), dom.hi(d), base_cells, feats[d], cells_across, 2.0);
  MeasureSpace ms;
  ms.dim = N;
  ms.domain = dom;
  std::size_t total = 1;
  for (int d = 0; d < N; ++d) total *= br[d].size() - 1;
  ms.lo.reserve(total);
  ms.hi.reserve(total);
  for (std::size_t g = 0; g < total; ++g) {
    Point lo{}, hi{}, c{};
    std::size_t rest = g;
    double diam = 0.0;
    for (int d = 0; d < N; ++d) {
      const std::size_t n = br[d].size() - 1;
      const std::size_t i = rest % n;
      rest /= n;
      lo[d] = br[d][i];
      hi[d] = br[d][i + 1];
      c[d] = 0.5 * (lo[d] + hi[d]);
      diam += (hi[d] - lo[d]) * (hi[d] - lo[d]);
    }
    const double w = cell_integral(rho, lo.data(), hi.data());
    if (!(w > 0.0)) throw Error("MeasureSpace: nonpositive cell weight");
    ms.lo.push_back(lo);
    ms.hi.push_back(hi);
    ms.points.push_back(c);
    ms.weights.push_back(w);
    ms.total += w;
    ms.max_cell_diameter = std::max(ms.max_cell_diameter, std::sqrt(diam));
  }
  return ms;
}

double region_measure(const MeasureSpace& ms, const Annulus& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (far_distance(a.center, ms.lo[i], ms.hi[i], ms.dim) > a.outer) continue;
    if (a.inner > 0.0 && near_distance(a.center, ms.lo[i], ms.hi[i], ms.dim) < a.inner) continue;
    s += ms.weights[i];
  }
  return s;
}

bool doubled_disjoint(const Annulus& a, const Annulus& b, int N) {
  const double d = distance(a.center, b.center, N);
  const double tol = 1e-12 * std::max({1.0, a.outer, b.outer});
  if (d + tol >= 2 * a.outer + 2 * b.outer) return true;
  if (d + 2 * b.outer <= a.inner / 2 + tol) return true;
  if (d + 2 * a.outer <= b.inner / 2 + tol) return true;
  return false;
}

double doubled_volume_in_domain(const Annulus& a, const Domain& domain) {
  const int N = domain.dim();
  double lo[3], hi[3];
  for (int d = 0; d < N; ++d) {
    lo[d] = domain.lo(d);
    hi[d] = domain.hi(d);
  }
  double v = ball_box_volume(N, lo, hi, a.center, 2 * a.outer);
  if (a.inner > 0.0) v -= ball_box_volume(N, lo, hi, a.center, a.inner / 2);
  return v;
}

Decomposition decompose(const MeasureSpace& ms, int j, const DecomposeOptions& opt) {
  if (j < 1) throw Error("decompose: j must be positive");
  const int N = ms.dim;
  const int J = opt.volume_filter ? 2 * j : j;
  Decomposition out;
  std::vector<Annulus> regs;
  // a single region has nothing to avoid
  double theta = J == 1 ? 1.0 : opt.theta;
  for (int h = 0; h <= opt.max_halvings; ++h, theta /= 2) {
    std::vector<Annulus> r = greedy(ms, J, theta);
    if (r.size() >= regs.size()) {
      regs = std::move(r);
      out.theta = theta;
    }
    if (static_cast<int>(regs.size()) == J) break;
  }
  out.complete = static_cast<int>(regs.size()) == J;
  if (opt.volume_filter) {
    std::vector<std::pair<double, std::size_t>> vol;
    for (std::size_t i = 0; i < regs.size(); ++i) vol.emplace_back(doubled_volume_in_domain(regs[i], ms.domain), i);
    std::stable_sort(vol.begin(), vol.end());
    std::vector<Annulus> kept;
    out.volume_filter = true;
    for (std::size_t q = 0; q < vol.size() && static_cast<int>(kept.size()) < j; ++q) {
      kept.push_back(regs[vol[q].second]);
      if (vol[q].first > volume(ms.domain) / j * (1 + 1e-12)) out.volume_filter = false;
    }
    regs = std::move(kept);
    out.complete = static_cast<int>(regs.size()) == j;
  }
  out.regions = regs;
  out.disjoint = true;
  for (std::size_t a = 0; a < regs.size(); ++a)
    for (std::size_t b = a + 1; b < regs.size(); ++b)
      if (!doubled_disjoint(regs[a], regs[b], N)) out.disjoint = false;
  double mn = regs.empty() ? 0.0 : kInf;
  for (const auto& a : regs) {
    out.measures.push_back(region_measure(ms, a));
    mn = std::min(mn, out.measures.back());
  }
  out.c_emp = mn * j / ms.total;
  return out;
}

double inner_radius_bound(const MeasureSpace& ms, int j, double c) {
  if (j < 1) throw Error("inner_radius_bound: j must be positive");
  const double v = c * ms.total / j;
  std::vector<std::pair<double, double>> buf;
  double best = kInf;
  for (std::size_t i = 0; i < ms.size(); ++i) best = std::min(best, smallest_radius(ms, ms.points[i], 0.0, v, buf));
  return 0.5 * best;
}

GnyReport verify(const Decomposition& d, const MeasureSpace& ms, int j, double sup_norm, double c_threshold) {
  GnyReport rep;
  const int N = ms.dim;
  const auto& regs = d.regions;
  rep.count = static_cast<int>(regs.size()) == j;
  if (!rep.count) rep.failures.push_back("expected " + std::to_string(j) + " regions, got " + std::to_string(regs.size()));
  rep.disjoint = true;
  for (std::size_t a = 0; a < regs.size(); ++a)
    for (std::size_t b = a + 1; b < regs.size(); ++b)
      if (!doubled_disjoint(regs[a], regs[b], N)) {
        rep.disjoint = false;
        rep.failures.push_back("doubled regions " + std::to_string(a) + " and " + std::to_string(b) + " overlap");
      }
  std::vector<double> nu;
  double mn = regs.empty() ? 0.0 : kInf;
  for (const auto& a : regs) {
    nu.push_back(region_measure(ms, a));
    mn = std::min(mn, nu.back());
  }
  rep.c_emp = mn * j / ms.total;
  rep.measures = !regs.empty();
  for (std::size_t i = 0; i < nu.size(); ++i)
    if (!(nu[i] > 0.0) || nu[i] < rep.c_emp * ms.total / j * (1 - 1e-12)) {
      rep.measures = false;
      rep.failures.push_back("region " + std::to_string(i) + " has measure " + std::to_string(nu[i]));
    }
  rep.constant = rep.c_emp >= c_threshold;
  if (!rep.constant) rep.failures.push_back("c_emp = " + std::to_string(rep.c_emp) + " below threshold");
  const double rhs = rep.c_emp * ms.total / (std::pow(2.0, N + 1) * j * unit_ball_volume(N) * sup_norm);
  rep.radius = !regs.empty();
  for (std::size_t i = 0; i < regs.size(); ++i) {
    const double r = regs[i].inner > 0.0 ? regs[i].inner : regs[i].outer;
    if (std::pow(r, N) < rhs * (1 - 1e-12)) {
      rep.radius = false;
      rep.failures.push_back("region " + std::to_string(i) + " violates the radius estimate");
    }
  }
  return rep;
}

nlohmann::json to_json(const Decomposition& d, int N) {
  nlohmann::json regs = nlohmann::json::array();
  for (std::size_t i = 0; i < d.regions.size(); ++i) {
    const Annulus& a = d.regions[i];
    regs.push_back({{"center", std::vector<double>(a.center.begin(), a.center.begin() + N)},
                    {"inner", a.inner},
                    {"outer", a.outer},
                    {"measure", i < d.measures.size() ? d.measures[i] : 0.0}});
  }
  return {{"regions", regs},  {"c_emp", d.c_emp},       {"theta", d.theta},
          {"disjoint", d.disjoint}, {"complete", d.complete}, {"volume_filter", d.volume_filter}};
}

}  // namespace pdlab

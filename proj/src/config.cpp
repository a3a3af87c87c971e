#include "pdlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace pdlab {

using nlohmann::json;

namespace {

Point parse_point(const json& j, int N) {
  if (!j.is_array() || static_cast<int>(j.size()) != N) throw Error("config: point must have " + std::to_string(N) + " coordinates");
  Point p{};
  for (int d = 0; d < N; ++d) p[d] = j[d].get<double>();
  return p;
}

std::vector<double> parse_ladder(const json& j) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(v.get<double>());
  } else if (j.is_object()) {
    const double first = j.at("first").get<double>(), last = j.at("last").get<double>();
    const int count = j.at("count").get<int>();
    if (count < 2 || !(first > 0 && last > 0)) throw Error("config: bad eps ladder");
    for (int i = 0; i < count; ++i) out.push_back(first * std::pow(last / first, double(i) / (count - 1)));
    out.back() = last;
  } else {
    throw Error("config: eps ladder must be an array or {first, last, count}");
  }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (!(out[i] < out[i - 1])) throw Error("config: eps ladder must be strictly decreasing");
  for (double e : out)
    if (!(e > 0.0)) throw Error("config: eps must be positive");
  return out;
}

template <class T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

Domain parse_domain(const json& j) {
  const int N = j.at("dim").get<int>();
  if (N < 1 || N > 3) throw Error("config: dim must be 1, 2 or 3");
  if (!j.contains("bounds")) return Domain::unit(N);
  std::vector<std::array<double, 2>> b;
  for (const auto& e : j.at("bounds")) b.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
  return Domain(N, b);
}

json to_json(const Domain& d) {
  json b = json::array();
  for (const auto& e : d.bounds()) b.push_back({e[0], e[1]});
  return {{"dim", d.dim()}, {"bounds", b}};
}

DensityKind density_kind_from_string(const std::string& s) {
  static const std::pair<const char*, DensityKind> names[] = {
      {"constant", DensityKind::Constant},
      {"point_concentration", DensityKind::PointConcentration},
      {"tilde_concentration", DensityKind::TildeConcentration},
      {"boundary_strip_weyl", DensityKind::BoundaryStripWeyl},
      {"steklov_family", DensityKind::SteklovFamily},
      {"multi_point", DensityKind::MultiPoint},
      {"piecewise_constant", DensityKind::PiecewiseConstant},
      {"smooth", DensityKind::Smooth},
  };
  for (const auto& [n, k] : names)
    if (s == n) return k;
  throw Error("config: unknown density kind '" + s + "'");
}

Density parse_density(const json& desc, const Domain& domain, int m, std::optional<double> eps) {
  const int N = domain.dim();
  const DensityKind kind = density_kind_from_string(desc.at("kind").get<std::string>());
  auto get_eps = [&] {
    if (eps) return *eps;
    if (!desc.contains("eps")) throw Error("config: density needs eps");
    return desc.at("eps").get<double>();
  };
  auto center = [&] {
    if (desc.contains("center")) return parse_point(desc.at("center"), N);
    Point c{};
    for (int d = 0; d < N; ++d) c[d] = 0.5 * (domain.lo(d) + domain.hi(d));
    return c;
  };
  const double delta = desc.value("delta", 0.1);
  switch (kind) {
    case DensityKind::Constant: return Density::constant(domain, desc.value("value", 1.0));
    case DensityKind::PointConcentration: return Density::point_concentration(domain, m, get_eps(), delta, center());
    case DensityKind::TildeConcentration: return Density::tilde_concentration(domain, m, get_eps(), delta, center());
    case DensityKind::BoundaryStripWeyl: return Density::boundary_strip_weyl(domain, m, get_eps());
    case DensityKind::SteklovFamily: return Density::steklov_family(domain, get_eps());
    case DensityKind::MultiPoint: {
      std::vector<Point> cs;
      for (const auto& c : desc.at("centers")) cs.push_back(parse_point(c, N));
      return Density::multi_point(domain, get_eps(), cs);
    }
    case DensityKind::PiecewiseConstant: {
      std::vector<Density::Piece> pieces;
      for (const auto& p : desc.value("pieces", json::array())) {
        const double v = p.at("value").get<double>();
        if (p.contains("ball")) {
          pieces.push_back({Ball{parse_point(p["ball"].at("center"), N), p["ball"].at("radius").get<double>()}, v});
        } else if (p.contains("box")) {
          Box b;
          for (const auto& e : p["box"]) b.bounds.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
          if (static_cast<int>(b.bounds.size()) != N) throw Error("config: box dimension mismatch");
          pieces.push_back({b, v});
        } else if (p.contains("strip")) {
          pieces.push_back({BoundaryStrip{p["strip"].get<double>()}, v});
        } else {
          throw Error("config: piece needs ball, box or strip");
        }
      }
      return Density::piecewise_constant(domain, desc.value("background", 1.0), pieces);
    }
    case DensityKind::Smooth: return Density::smooth(domain, desc.value("base", 1.0), desc.value("amplitude", 1.0));
  }
  throw Error("config: unhandled density kind");
}

double cells_across_features(const DiscreteSpace& space, const Density& rho) {
  const auto feats = rho.axis_features();
  double worst = std::numeric_limits<double>::infinity();
  for (int d = 0; d < space.domain().dim(); ++d) {
    const auto& br = space.axis(d).breaks();
    for (const auto& f : feats[d]) {
      // cells overlapping [a, b], measured by the largest cell width there
      double hmax = 0.0;
      for (std::size_t e = 0; e + 1 < br.size(); ++e)
        if (br[e + 1] > f.a && br[e] < f.b) hmax = std::max(hmax, br[e + 1] - br[e]);
      if (hmax > 0.0) worst = std::min(worst, (f.b - f.a) / hmax);
    }
  }
  return worst;
}

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  c.raw = j;
  if (j.contains("domain")) c.domain = parse_domain(j.at("domain"));
  get_if(j, "m", c.m);
  if (c.m < 1 || c.m > 3) throw Error("config: m must be 1, 2 or 3");
  if (j.contains("density")) c.density = j.at("density");
  get_if(j, "k", c.k);
  get_if(j, "seed", c.seed);
  if (j.contains("discretization")) {
    const json& d = j.at("discretization");
    get_if(d, "elements", c.disc.elements);
    get_if(d, "degree", c.disc.degree);
    get_if(d, "graded", c.disc.graded);
    get_if(d, "cells_across", c.disc.cells_across);
    get_if(d, "growth", c.disc.growth);
    const std::string bc = d.value("bc", "natural");
    if (bc == "natural") c.disc.bc = BoundaryCondition::Natural;
    else if (bc == "clamped") c.disc.bc = BoundaryCondition::Clamped;
    else throw Error("config: bc must be natural or clamped");
  }
  if (c.disc.degree != 0 && c.disc.degree < c.m) throw Error("config: degree must be >= m");
  if (c.disc.elements < 2) throw Error("config: elements must be >= 2");
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    c.solver.shift = 0.0;
    get_if(s, "shift", c.solver.shift);
    get_if(s, "tol", c.solver.tol);
    get_if(s, "max_iterations", c.solver.max_iterations);
  } else {
    c.solver.shift = 0.0;
  }
  if (c.solver.shift == 0.0) c.solver.shift = 1.0 / volume(c.domain);
  c.solver.seed = c.seed;

  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    if (s.contains("eps")) c.sweep.eps = parse_ladder(s.at("eps"));
    get_if(s, "fit_j", c.sweep.fit_j);
    if (s.contains("expected_slope")) c.sweep.expected_slope = s.at("expected_slope").get<double>();
    get_if(s, "slope_tol", c.sweep.slope_tol);
    get_if(s, "min_r2", c.sweep.min_r2);
    get_if(s, "flag_threshold", c.sweep.flag_threshold);
    get_if(s, "compare_parent", c.sweep.compare_parent);
  }
  if (j.contains("gny")) {
    const json& g = j.at("gny");
    get_if(g, "j", c.gny.j);
    get_if(g, "base_cells", c.gny.base_cells);
    get_if(g, "cells_across", c.gny.cells_across);
    get_if(g, "theta", c.gny.theta);
    get_if(g, "volume_filter", c.gny.volume_filter);
    get_if(g, "c_threshold", c.gny.c_threshold);
  }
  if (j.contains("steklov")) {
    const json& s = j.at("steklov");
    if (s.contains("eps")) c.steklov.eps = parse_ladder(s.at("eps"));
    get_if(s, "j_max", c.steklov.j_max);
    get_if(s, "tol", c.steklov.tol);
  }
  if (j.contains("taylor")) {
    const json& t = j.at("taylor");
    c.taylor.N = c.domain.dim();
    get_if(t, "N", c.taylor.N);
    get_if(t, "k", c.taylor.k);
    if (t.contains("eps")) c.taylor.eps = parse_ladder(t.at("eps"));
    get_if(t, "spread_limit", c.taylor.spread_limit);
  }
  if (j.contains("verify")) {
    const json& v = j.at("verify");
    for (const auto& k : v.value("kinds", json::array())) c.verify.kinds.push_back(bound_kind_from_string(k.get<std::string>()));
    get_if(v, "j", c.verify.j);
    get_if(v, "explore", c.verify.explore);
    get_if(v, "max_growth", c.verify.max_growth);
  }

  // resolution rule: >= 4 cells across each ball / strip on the solve mesh
  if (c.disc.graded) {
    if (c.disc.cells_across < 4) throw Error("config: cells_across must be >= 4");
  } else {
    double h = 0.0;
    for (int d = 0; d < c.domain.dim(); ++d) h = std::max(h, c.domain.edge(d) / c.disc.elements);
    std::vector<Density> check;
    if (c.sweep.eps.empty()) check.push_back(parse_density(c.density, c.domain, c.m));
    for (double e : c.sweep.eps) check.push_back(parse_density(c.density, c.domain, c.m, e));
    for (double e : c.steklov.eps) check.push_back(Density::steklov_family(c.domain, e));
    for (const auto& rho : check)
      if (rho.smallest_feature() / h < 4.0 - 1e-9)
        throw Error("config: uniform mesh has fewer than 4 cells across a density feature");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("config " + path + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace pdlab

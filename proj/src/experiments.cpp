#include "pdlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>

namespace pdlab {

DiscreteSpace make_space(const Domain& domain, int m, const Discretization& disc, const Density* rho, bool parent) {
  const int N = domain.dim();
  const int p = disc.degree_for(m);
  const int base = std::max(1, disc.elements / 2);
  std::vector<std::vector<double>> breaks(N);
  std::vector<std::vector<AxisFeature>> feats(N);
  if (disc.graded && rho) feats = rho->axis_features();
  for (int d = 0; d < N; ++d) {
    breaks[d] = feats[d].empty() ? uniform_breaks(domain.lo(d), domain.hi(d), base)
                                 : graded_breaks(domain.lo(d), domain.hi(d), base, feats[d],
                                                 std::max(1, disc.cells_across / 2), disc.growth);
    if (!parent) breaks[d] = bisect_breaks(breaks[d]);
  }
  return build_space(domain, m, breaks, disc.bc, p);
}

SolveResult solve_density(const Density& rho, int m, const Discretization& disc, int k, const SolverConfig& solver,
                          bool compare_parent, double flag_threshold) {
  const int N = rho.domain().dim();
  SolveResult r;
  const DiscreteSpace space = make_space(rho.domain(), m, disc, &rho);
  r.dim = space.dim();
  r.cells_across = cells_across_features(space, rho);
  const SparseMatrix K = assemble_stiffness(space);
  const SparseMatrix M = assemble_mass(space, rho);
  r.spectrum = solve_generalized(K, M, std::min(k, space.dim()), solver);
  const bool natural = disc.bc == BoundaryCondition::Natural;
  r.kernel_expected = natural ? expected_kernel_dimension(N, m) : 0;
  const int nk = static_cast<int>(r.spectrum.eigenvalues.size());
  if (natural) {
    r.kernel_ok = nk > r.kernel_expected && kernel_dimension(r.spectrum, N, m) == r.kernel_expected &&
                  r.spectrum.eigenvalues[r.kernel_expected] > 0.0;
  } else {
    r.kernel_ok = nk > 0 && r.spectrum.eigenvalues[0] > 0.0;
  }
  r.spectrum.kernel_count = natural && nk > r.kernel_expected ? kernel_dimension(r.spectrum, N, m) : 0;
  r.flagged.assign(nk, false);
  if (compare_parent) {
    const DiscreteSpace coarse = make_space(rho.domain(), m, disc, &rho, true);
    const Spectrum ps = solve_generalized(assemble_stiffness(coarse), assemble_mass(coarse, rho),
                                          std::min(nk, coarse.dim()), solver);
    r.parent = ps.eigenvalues;
    for (int j = 0; j < nk; ++j) {
      if (j < r.kernel_expected) continue;
      if (j >= static_cast<int>(r.parent.size())) {
        r.flagged[j] = true;
        continue;
      }
      const double mu = r.spectrum.eigenvalues[j];
      r.flagged[j] = std::abs(mu - r.parent[j]) > flag_threshold * std::abs(mu);
    }
  }
  return r;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  SweepResult out;
  out.N = cfg.domain.dim();
  out.m = cfg.m;
  std::vector<std::optional<double>> ladder;
  if (cfg.sweep.eps.empty()) ladder.push_back(std::nullopt);
  for (double e : cfg.sweep.eps) ladder.push_back(e);
  const double p = out.N / (2.0 * out.m);
  for (const auto& e : ladder) {
    try {
      const Density rho = parse_density(cfg.density, cfg.domain, cfg.m, e);
      const SolveResult s =
          solve_density(rho, cfg.m, cfg.disc, cfg.k, cfg.solver, cfg.sweep.compare_parent, cfg.sweep.flag_threshold);
      if (s.cells_across < 4.0 - 1e-9) throw Error("resolution rule violated: fewer than 4 cells across a density feature");
      SweepPoint pt;
      pt.eps = e.value_or(rho.eps());
      pt.mu = s.spectrum.eigenvalues;
      pt.parent = s.parent;
      pt.flagged = s.flagged;
      pt.mass = rho.mass();
      pt.lp = rho.lp_norm(p).integral;
      pt.sup = rho.sup_norm();
      pt.vol = volume(cfg.domain);
      pt.kernel_count = s.spectrum.kernel_count;
      pt.kernel_ok = s.kernel_ok;
      pt.dim = s.dim;
      out.points.push_back(std::move(pt));
    } catch (const std::exception& ex) {
      out.error = ex.what();
      break;
    }
  }
  return out;
}

RateFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y, int j) {
  if (x.size() != y.size() || x.size() < 2) throw Error("fit: need matching samples");
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw Error("fit: log of a nonpositive value");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  RateFit f;
  f.j = j;
  f.points = static_cast<int>(n);
  const double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
  f.slope = cxy / vx;
  f.intercept = (sy - f.slope * sx) / n;
  f.r2 = vy > 0.0 ? cxy * cxy / (vx * vy) : 1.0;
  return f;
}

RateFit fit_rate(const SweepResult& s, int j, bool exclude_flagged) {
  std::vector<double> x, y, dropped;
  for (const auto& p : s.points) {
    if (j < 1 || j > static_cast<int>(p.mu.size())) throw Error("fit_rate: j outside the computed spectrum");
    if (!(p.mu[j - 1] > 0.0)) throw Error("fit_rate: nonpositive eigenvalue in sweep");
    if (!p.kernel_ok || (exclude_flagged && p.flagged[j - 1])) {
      dropped.push_back(p.eps);
      continue;
    }
    x.push_back(p.eps);
    y.push_back(p.mu[j - 1]);
  }
  if (x.size() < 5) throw Error("fit_rate: fewer than 5 accepted points for j = " + std::to_string(j));
  RateFit f = fit_loglog(x, y, j);
  f.excluded = dropped;
  return f;
}

Table SteklovResult::table() const {
  Table t;
  t.header = {"eps", "j", "mu_j", "sigma_j", "target", "gap_target", "gap_sigma"};
  for (const auto& r : rows)
    t.add({fmt17(r.eps), std::to_string(r.j), fmt17(r.mu), fmt17(r.sigma), fmt17(r.target), fmt17(r.gap_target),
           fmt17(r.gap_sigma)});
  return t;
}

SteklovResult steklov_compare(const Domain& domain, int m, const std::vector<double>& eps, int j_max,
                              const Discretization& disc, const SolverConfig& solver) {
  if (eps.empty()) throw Error("steklov: empty eps ladder");
  if (disc.bc != BoundaryCondition::Natural) throw Error("steklov: needs natural boundary conditions");
  if (domain.dim() == 1 && j_max > 2) throw Error("steklov: j_max exceeds the boundary rank (2) in 1D");
  if (j_max < 1) throw Error("steklov: j_max must be >= 1");
  const double thinnest = *std::min_element(eps.begin(), eps.end());
  const Density finest = Density::steklov_family(domain, thinnest);
  const DiscreteSpace space = make_space(domain, m, disc, &finest);
  const SparseMatrix K = assemble_stiffness(space);
  SteklovResult out;
  out.boundary = boundary_measure(domain);
  const Spectrum st = solve_generalized(K, assemble_boundary_mass(space), j_max, solver);
  out.sigma = st.eigenvalues;
  for (double e : eps) {
    const Spectrum s = solve_generalized(K, assemble_mass(space, Density::steklov_family(domain, e)), j_max, solver);
    for (int j = 0; j < j_max; ++j) {
      SteklovRow r;
      r.eps = e;
      r.j = j + 1;
      r.mu = s.eigenvalues[j];
      r.sigma = out.sigma[j];
      r.target = out.boundary * r.sigma;
      r.gap_target = std::abs(r.mu - r.target);
      r.gap_sigma = std::abs(r.mu - r.sigma);
      out.rows.push_back(r);
    }
  }
  return out;
}

std::vector<BoundReport> bound_reports(const SweepResult& s, const std::vector<BoundKind>& kinds,
                                       const std::vector<int>& js, bool explore) {
  std::vector<BoundReport> out;
  for (BoundKind kind : kinds)
    for (int j : js)
      for (const auto& p : s.points) {
        if (j < 1 || j > static_cast<int>(p.mu.size())) throw Error("bounds: j outside the computed spectrum");
        BoundInputs in{s.N, s.m, j, p.mass, p.lp, p.sup, p.vol};
        out.push_back(make_report(kind, in, p.eps, p.mu[j - 1], explore));
      }
  return out;
}

std::vector<BoundCheck> check_bounds(const std::vector<BoundReport>& reports, double max_growth) {
  std::map<std::pair<int, int>, std::vector<BoundReport>> groups;
  std::vector<std::pair<int, int>> order;
  for (const auto& r : reports) {
    const std::pair<int, int> key{static_cast<int>(r.kind), r.j};
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(r);
  }
  std::vector<BoundCheck> out;
  for (const auto& key : order) {
    const auto& g = groups[key];
    BoundCheck c;
    c.j = key.second;
    c.verdict = uniformity_verdict(g);
    const BoundReport& f = g.front();
    if (g.size() >= 3) {
      const double base = g[g.size() - 3].ratio;
      c.growth_last3 = std::max(g[g.size() - 2].ratio, g.back().ratio) / base;
    }
    if (!applicable(f.kind, f.N, f.m) || (f.kind == BoundKind::ConjecturedWeyl && f.N < 2 * f.m)) {
      c.ok = true;  // exploration only
    } else if (is_lower_bound(f.kind)) {
      c.ok = c.verdict.inf_ratio > 0.0;
    } else if (f.kind == BoundKind::Krein) {
      c.ok = c.verdict.sup_ratio <= 1.0 + 1e-9;
    } else {
      // j within the kernel gives mu_j ~ 0 and no information
      c.ok = f.j <= expected_kernel_dimension(f.N, f.m) || g.size() < 3 || c.growth_last3 <= 1.0 + max_growth;
    }
    out.push_back(c);
  }
  return out;
}

Table sweep_table(const SweepResult& s) {
  Table t;
  t.header = {"eps", "j", "mu_j", "mass", "lp", "sup"};
  for (const auto& p : s.points)
    for (std::size_t j = 0; j < p.mu.size(); ++j)
      t.add({fmt17(p.eps), std::to_string(j + 1), fmt17(p.mu[j]), fmt17(p.mass), fmt17(p.lp), fmt17(p.sup)});
  return t;
}

Table fit_table(const std::vector<RateFit>& fits) {
  Table t;
  t.header = {"j", "slope", "intercept", "r2"};
  for (const auto& f : fits) t.add({std::to_string(f.j), fmt17(f.slope), fmt17(f.intercept), fmt17(f.r2)});
  return t;
}

Table spectrum_table(const Spectrum& s) {
  Table t;
  t.header = {"j", "mu_j", "residual"};
  for (std::size_t j = 0; j < s.eigenvalues.size(); ++j)
    t.add({std::to_string(j + 1), fmt17(s.eigenvalues[j]), fmt17(j < s.residuals.size() ? s.residuals[j] : 0.0)});
  return t;
}

std::string emit(const Table& t, const std::string& dir, const std::string& name, const std::string& format) {
  std::filesystem::create_directories(dir);
  if (format == "csv") {
    const std::string path = (std::filesystem::path(dir) / (name + ".csv")).string();
    write_text(path, t.csv());
    return path;
  }
  if (format == "json") return emit_json(t.json(), dir, name);
  throw Error("emit: format must be csv or json");
}

std::string emit_json(const nlohmann::json& j, const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  const std::string path = (std::filesystem::path(dir) / (name + ".json")).string();
  write_text(path, dump_json(j));
  return path;
}

}  // namespace pdlab

// One PASS/FAIL line per acceptance criterion. Usage: pdlab_acceptance [--report file] [criterion numbers...]
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pdlab/bounds.hpp"
#include "pdlab/bumps.hpp"
#include "pdlab/experiments.hpp"
#include "pdlab/gny.hpp"
#include "pdlab/taylor.hpp"

using namespace pdlab;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects info lines and the verdict for one criterion.
struct Log {
  Outcome out;
  void info(const std::string& s) { std::printf("    %s\n", s.c_str()); std::fflush(stdout); }
  void require(bool ok, const std::string& what) {
    if (!ok) {
      out.pass = false;
      if (!out.detail.empty()) out.detail += "; ";
      out.detail += what;
    }
  }
};

std::string g(double v, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

SolverConfig solver_for(const Domain& d) {
  SolverConfig s;
  s.shift = 1.0 / volume(d);
  return s;
}

Spectrum solve(const DiscreteSpace& s, const Density& rho, int k) {
  return solve_generalized(assemble_stiffness(s), assemble_mass(s, rho), std::min(k, s.dim()), solver_for(s.domain()));
}

// Catalog at one eps, centers chosen off the symmetry points.
std::vector<Density> catalog(const Domain& d, int m, double eps) {
  const int N = d.dim();
  const Point c1 = N == 1 ? Point{0.4, 0, 0} : (N == 2 ? Point{0.4, 0.55, 0} : Point{0.4, 0.55, 0.45});
  const Point c2 = N == 1 ? Point{0.75, 0, 0} : (N == 2 ? Point{0.7, 0.3, 0} : Point{0.7, 0.3, 0.6});
  Box box;
  for (int i = 0; i < N; ++i) box.bounds.push_back({0.15 + 0.05 * i, 0.45 + 0.1 * i});
  return {Density::constant(d, 1.7),
          Density::point_concentration(d, m, eps, 0.1, c1),
          Density::tilde_concentration(d, m, eps, 0.1, c1),
          Density::boundary_strip_weyl(d, m, eps),
          Density::steklov_family(d, eps),
          Density::multi_point(d, eps, {c1, c2}),
          Density::piecewise_constant(d, 0.5, {{box, 3.0}, {Ball{c2, 0.1}, 2.0}}),
          Density::smooth(d, 1.0, 2.0)};
}

Discretization graded(int elements, int cells_across) {
  Discretization disc;
  disc.elements = elements;
  disc.cells_across = cells_across;
  return disc;
}

// ---------------------------------------------------------------------------------------------------------------

Outcome kernel_structure() {
  constexpr double kRel = 1e-7;
  Log log;
  struct Case {
    int N, m, elements;
  };
  for (const Case c : {Case{1, 1, 64}, Case{1, 2, 64}, Case{1, 3, 64}, Case{2, 1, 24}, Case{2, 2, 24}, Case{3, 1, 24}}) {
    const Domain d = Domain::unit(c.N);
    const DiscreteSpace s = build_space(d, c.m, c.elements, BoundaryCondition::Natural, std::max(c.m, 2));
    const int dk = expected_kernel_dimension(c.N, c.m);
    const Spectrum sp = solve(s, Density::smooth(d, 1.0, 0.5), dk + 3);
    const double next = sp.eigenvalues[dk];
    double worst = 0.0;
    for (int i = 0; i < dk; ++i) worst = std::max(worst, std::abs(sp.eigenvalues[i]) / next);
    const bool ok = next > 0.0 && worst < kRel && kernel_dimension(sp, c.N, c.m, kRel) == dk;
    log.info("N=" + std::to_string(c.N) + " m=" + std::to_string(c.m) + " cells " + std::to_string(c.elements) +
             "^N: d=" + std::to_string(dk) + " max|mu_i|/mu_{d+1} " + g(worst, 3) + " mu_{d+1} " + g(next));
    log.require(ok, "kernel mismatch at N=" + std::to_string(c.N) + " m=" + std::to_string(c.m));
  }
  return log.out;
}

Outcome analytic_oracles() {
  constexpr double kStringTol = 0.005, kSquareTol = 0.01;
  Log log;
  {
    const Domain d = Domain::unit(1);
    const Spectrum s = solve(build_space(d, 1, 512, BoundaryCondition::Natural, 2), Density::constant(d, 1.0), 10);
    double worst = 0.0;
    for (int j = 2; j <= 10; ++j) worst = std::max(worst, std::abs(s.eigenvalues[j - 1] / (kPi2 * (j - 1) * (j - 1)) - 1));
    log.info("string: mu_1 " + g(s.eigenvalues[0], 3) + ", worst relative error j=2..10 " + g(worst, 3));
    log.require(std::abs(s.eigenvalues[0]) < 1e-8 * s.eigenvalues[9] && worst <= kStringTol, "string spectrum");
  }
  {
    const Domain d = Domain::unit(2);
    std::vector<double> exact;
    for (int p = 0; p < 8; ++p)
      for (int q = 0; q < 8; ++q) exact.push_back(kPi2 * (p * p + q * q));
    std::sort(exact.begin(), exact.end());
    exact.resize(15);  // 0 and the first 8 distinct positive values with multiplicity
    const Spectrum s = solve(build_space(d, 1, 32, BoundaryCondition::Natural, 2), Density::constant(d, 1.0), 15);
    double worst = 0.0;
    std::set<long> distinct;
    for (int j = 1; j < 15; ++j) {
      distinct.insert(std::lround(exact[j] / kPi2));
      worst = std::max(worst, std::abs(s.eigenvalues[j] / exact[j] - 1));
    }
    log.info("square: " + std::to_string(distinct.size()) + " distinct values, worst relative error " + g(worst, 3));
    log.require(distinct.size() == 8 && worst <= kSquareTol, "square spectrum");
  }
  return log.out;
}

Outcome weyl_law() {
  Log log;
  struct Case {
    int N, elements, jlo, jhi;
    double lo, hi;
  };
  for (const Case c : {Case{1, 2048, 20, 60, 0.8, 1.2}, Case{2, 48, 15, 40, 0.7, 1.3}}) {
    const Domain d = Domain::unit(c.N);
    const DiscreteSpace s = build_space(d, 1, c.elements, BoundaryCondition::Natural, 2);
    for (const Density& rho : {Density::constant(d, 1.0), Density::smooth(d, 1.0, 3.0)}) {
      const Spectrum sp = solve(s, rho, c.jhi);
      const double lp = rho.lp_norm(c.N / 2.0).integral;
      double lo = 1e300, hi = 0.0;
      for (int j = c.jlo; j <= c.jhi; ++j) {
        const double r = sp.eigenvalues[j - 1] / weyl_reference(c.N, 1, j, lp);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
      log.info("N=" + std::to_string(c.N) + " " + rho.name() + ": mu_j/weyl in [" + g(lo, 4) + ", " + g(hi, 4) +
               "] for j=" + std::to_string(c.jlo) + ".." + std::to_string(c.jhi));
      log.require(lo >= c.lo && hi <= c.hi, "Weyl band N=" + std::to_string(c.N) + " " + rho.name());
    }
  }
  {
    // separation of variables on the unit square, no discretization involved
    std::vector<double> exact;
    for (int p = 0; p < 20; ++p)
      for (int q = 0; q < 20; ++q) exact.push_back(kPi2 * (p * p + q * q));
    std::sort(exact.begin(), exact.end());
    double lo = 1e300;
    int at = 0;
    for (int j = 15; j <= 40; ++j)
      if (exact[j - 1] / weyl_reference(2, 1, j, 1.0) < lo) {
        lo = exact[j - 1] / weyl_reference(2, 1, j, 1.0);
        at = j;
      }
    log.info("exact unit-square spectrum: min mu_j/weyl over j=15..40 is " + g(lo, 4) + " at j=" + std::to_string(at));
  }
  return log.out;
}

Outcome exact_scaling() {
  constexpr double kRel = 1e-10;
  Log log;
  struct Case {
    int N, m;
  };
  for (const Case c : {Case{1, 2}, Case{2, 1}}) {
    const Domain d = Domain::unit(c.N);
    const int dk = expected_kernel_dimension(c.N, c.m);
    double worst = 0.0;
    for (const Density& rho : catalog(d, c.m, 0.05)) {
      const DiscreteSpace s = make_space(d, c.m, graded(c.N == 1 ? 32 : 10, 4), &rho);
      const Spectrum base = solve(s, rho, 8);
      for (double f : {0.5, 3.0}) {
        const Spectrum sc = solve(s, rho.scaled(f), 8);
        for (std::size_t j = 0; j < base.eigenvalues.size(); ++j) {
          const double expect = base.eigenvalues[j] / f;
          const double err = static_cast<int>(j) < dk ? std::abs(sc.eigenvalues[j] - expect) / (base.eigenvalues.back() / f)
                                                      : std::abs(sc.eigenvalues[j] / expect - 1);
          worst = std::max(worst, err);
        }
      }
    }
    log.info("N=" + std::to_string(c.N) + " m=" + std::to_string(c.m) + " catalog, c in {0.5, 3}: worst " + g(worst, 3));
    log.require(worst <= kRel, "scaling N=" + std::to_string(c.N));
  }
  return log.out;
}

Outcome refinement_monotonicity() {
  constexpr double kSlack = 1e-9;
  Log log;
  struct Case {
    int N, m;
  };
  for (const Case c : {Case{1, 1}, Case{1, 2}, Case{2, 1}}) {
    const Domain d = Domain::unit(c.N);
    const int dk = expected_kernel_dimension(c.N, c.m);
    double worst = -1e300;
    for (const Density& rho : catalog(d, c.m, 0.05)) {
      const DiscreteSpace coarse = make_space(d, c.m, graded(c.N == 1 ? 16 : 8, 4), &rho);
      const DiscreteSpace fine = coarse.refined();
      const Spectrum sc = solve(coarse, rho, 10), sf = solve(fine, rho, 10);
      const double scale = sf.eigenvalues.back();
      for (int j = 0; j < 10; ++j) {
        // violation > 0 means refinement raised mu_j beyond the slack
        // kernel entries are roundoff around 0 and are measured against mu_10
        const double v = (sf.eigenvalues[j] - sc.eigenvalues[j]) / (j < dk ? scale : sf.eigenvalues[j]);
        worst = std::max(worst, v);
        if (v > kSlack)
          log.require(false, rho.name() + " N=" + std::to_string(c.N) + " m=" + std::to_string(c.m) + " j=" +
                                 std::to_string(j + 1) + " by " + g(v, 3));
      }
    }
    log.info("N=" + std::to_string(c.N) + " m=" + std::to_string(c.m) + ": max (mu_fine - mu_coarse)/mu " + g(worst, 3));
  }
  return log.out;
}

Outcome krein() {
  constexpr double kUpper = 1.01, kEqual = 0.01;
  constexpr int kDensities = 12;
  Log log;
  const Domain d = Domain::unit(1);
  const DiscreteSpace s = build_space(d, 1, 512, BoundaryCondition::Clamped, 2);
  auto bound = [](const Density& rho, int j) { return kPi2 * rho.sup_norm() * j * j / (rho.mass() * rho.mass()); };
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < kDensities; ++i) {
    const double a = 0.2 + 2.0 * U(rng), b = a + 0.5 + 8.0 * U(rng);
    const double w = 0.05 + 0.5 * U(rng), x0 = (1.0 - w) * U(rng);
    const Density rho = Density::piecewise_constant(d, a, {{Box{{{x0, x0 + w}}}, b}});
    const Spectrum sp = solve(s, rho, 5);
    for (int j = 1; j <= 5; ++j) worst = std::max(worst, sp.eigenvalues[j - 1] / bound(rho, j));
  }
  log.info(std::to_string(kDensities) + " random two-valued densities: max mu_j / Krein " + g(worst, 5));
  log.require(worst <= kUpper, "Krein bound exceeded");
  double eq = 0.0;
  for (double c : {1.0, 2.5}) {
    const Density rho = Density::constant(d, c);
    const Spectrum sp = solve(s, rho, 5);
    for (int j = 1; j <= 5; ++j) eq = std::max(eq, std::abs(sp.eigenvalues[j - 1] / bound(rho, j) - 1));
  }
  log.info("constant density: max |mu_j / Krein - 1| " + g(eq, 3));
  log.require(eq <= kEqual, "Krein equality for constants");
  return log.out;
}

std::string fit_line(const RateFit& f) {
  return "slope " + g(f.slope, 5) + " r2 " + g(f.r2, 5) + " points " + std::to_string(f.points) + " excluded " +
         std::to_string(f.excluded.size());
}

void sweep_info(Log& log, const SweepResult& s, int j) {
  for (const auto& p : s.points)
    log.info("  eps " + g(p.eps, 4) + " mu_" + std::to_string(j) + " " + g(p.mu[j - 1], 8) + " parent " +
             g(p.parent.size() >= std::size_t(j) ? p.parent[j - 1] : 0.0, 8) + (p.flagged[j - 1] ? " flagged" : "") +
             " dofs " + std::to_string(p.dim));
}

Outcome rates_point_concentration() {
  constexpr double kSlopeTol = 0.15, kMinR2 = 0.98, kDelta = 0.1;
  Log log;
  for (int m : {1, 2}) {
    const ExperimentConfig cfg = parse_config(json{
        {"domain", {{"dim", 1}}},
        {"m", m},
        {"k", expected_kernel_dimension(1, m) + 2},
        {"density", {{"kind", "point_concentration"}, {"delta", kDelta}, {"center", {0.4}}}},
        {"discretization", {{"elements", 256}, {"cells_across", 32}}},
        {"sweep", {{"eps", {{"first", 1e-1}, {"last", 1e-3}, {"count", 8}}}}}});
    const SweepResult s = run_sweep(cfg);
    if (!s.error.empty()) throw Error(s.error);
    const int j = expected_kernel_dimension(1, m) + 1;
    sweep_info(log, s, j);
    const RateFit f = fit_rate(s, j);
    const double expect = -(2.0 * m - 1 - kDelta);
    log.info("m=" + std::to_string(m) + " j=" + std::to_string(j) + ": " + fit_line(f) + ", expected " + g(expect));
    log.require(std::abs(f.slope - expect) <= kSlopeTol && f.r2 >= kMinR2, "rate m=" + std::to_string(m));
  }
  return log.out;
}

// Boundary strip sweep in 3D, shared by the rate and lower bound criteria.
const SweepResult& strip_sweep_3d() {
  static std::optional<SweepResult> cache;
  if (!cache) {
    const ExperimentConfig cfg = parse_config(json{
        {"domain", {{"dim", 3}}},
        {"m", 1},
        {"k", 3},
        {"density", {{"kind", "boundary_strip_weyl"}}},
        {"discretization", {{"elements", 24}, {"cells_across", 4}}},
        {"sweep", {{"eps", {{"first", 1e-2}, {"last", 1e-3}, {"count", 6}}}}}});
    cache = run_sweep(cfg);
    if (!cache->error.empty()) throw Error(cache->error);
  }
  return *cache;
}

Outcome rate_boundary_strip() {
  constexpr double kExpect = -1.0 / 3.0, kSlopeTol = 0.08;
  Log log;
  const SweepResult& s = strip_sweep_3d();
  sweep_info(log, s, 2);
  const RateFit f = fit_rate(s, 2);
  log.info("N=3 m=1 j=2: " + fit_line(f) + ", expected " + g(kExpect));
  log.require(f.points == 6, "fewer than 6 accepted points");
  log.require(std::abs(f.slope - kExpect) <= kSlopeTol, "strip rate");
  return log.out;
}

Outcome multi_point_rates() {
  constexpr double kSlopeTol = 0.15, kBand = 3.0;
  Log log;
  {
    const ExperimentConfig cfg = parse_config(json{
        {"domain", {{"dim", 3}}},
        {"m", 1},
        {"k", 3},
        {"density", {{"kind", "multi_point"}, {"centers", {{0.3, 0.4, 0.45}, {0.7, 0.6, 0.55}}}}},
        {"discretization", {{"elements", 16}, {"cells_across", 8}}},
        {"sweep", {{"eps", {{"first", 8e-2}, {"last", 1e-2}, {"count", 5}}}}}});
    const SweepResult s = run_sweep(cfg);
    if (!s.error.empty()) throw Error(s.error);
    sweep_info(log, s, 2);
    const RateFit f = fit_rate(s, 2);
    log.info("N=3 two points, mu_2 vs eps: " + fit_line(f) + ", expected 1");
    log.require(std::abs(f.slope - 1.0) <= kSlopeTol, "3D two-point slope");
  }
  {
    const ExperimentConfig cfg = parse_config(json{
        {"domain", {{"dim", 2}}},
        {"m", 1},
        {"k", 3},
        {"density", {{"kind", "multi_point"}, {"centers", {{0.3, 0.4}, {0.7, 0.6}}}}},
        {"discretization", {{"elements", 32}, {"cells_across", 8}}},
        {"sweep", {{"eps", {{"first", 1e-1}, {"last", 1e-3}, {"count", 8}}}}}});
    const SweepResult s = run_sweep(cfg);
    if (!s.error.empty()) throw Error(s.error);
    double lo = 1e300, hi = 0.0;
    int used = 0;
    for (const auto& p : s.points) {
      if (p.flagged[1]) continue;
      const double v = p.mu[1] * std::abs(std::log(p.eps));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      ++used;
      log.info("  eps " + g(p.eps, 4) + " mu_2 " + g(p.mu[1], 8) + " mu_2 |log eps| " + g(v, 6));
    }
    log.info("N=2 two points: max/min of mu_2 |log eps| " + g(hi / lo, 4) + " over " + std::to_string(used) + " points");
    log.require(used >= 5 && hi / lo <= kBand, "2D log band");
  }
  return log.out;
}

// floor_i = min over the family of the products at eps >= eps_i
Outcome lower_bounds() {
  constexpr double kStable = 0.2;
  Log log;
  {
    const Domain d = Domain::unit(1);
    std::vector<double> ladder = geometric_ladder(1e-1, 1e-3, 8);
    ladder.push_back(5e-4);
    std::vector<double> floor_at;
    double running = 1e300;
    for (double eps : ladder) {
      for (const Density& rho : catalog(d, 1, eps)) {
        const Spectrum sp = solve(make_space(d, 1, graded(64, 8), &rho), rho, 3);
        running = std::min(running, sp.eigenvalues[1] * rho.mass());
      }
      floor_at.push_back(running);
    }
    const double f1 = floor_at[floor_at.size() - 2], f2 = floor_at.back();
    log.info("N=1 m=1 catalog: floor of mu_2 int rho " + g(f1, 6) + " at eps >= 1e-3, " + g(f2, 6) + " at eps >= 5e-4");
    log.require(f1 > 0.0 && std::abs(f2 / f1 - 1) <= kStable, "1D lower bound floor");
  }
  {
    const SweepResult& s = strip_sweep_3d();
    double running = 1e300, prev = 0.0;
    for (const auto& p : s.points) running = std::min(running, p.mu[1] * std::pow(p.lp, 2.0 / 3.0));
    prev = running;
    // one halving beyond the ladder
    const Domain d = Domain::unit(3);
    const double eps = s.points.back().eps / 2;
    const Density rho = Density::boundary_strip_weyl(d, 1, eps);
    const Spectrum sp = solve(make_space(d, 1, graded(24, 4), &rho), rho, 3);
    running = std::min(running, sp.eigenvalues[1] * std::pow(rho.lp_norm(1.5).integral, 2.0 / 3.0));
    log.info("N=3 m=1 strip: floor of mu_2 (int rho^{3/2})^{2/3} " + g(prev, 6) + " at eps >= " +
             g(s.points.back().eps, 3) + ", " + g(running, 6) + " at eps >= " + g(eps, 3));
    log.require(prev > 0.0 && std::abs(running / prev - 1) <= kStable, "3D lower bound floor");
  }
  return log.out;
}

Outcome uniform_upper_bound() {
  constexpr double kGrowth = 0.10;
  constexpr int kJ = 6;
  Log log;
  const std::vector<json> families = {
      {{"kind", "point_concentration"}, {"delta", 0.1}, {"center", {0.4, 0.55}}},
      {{"kind", "tilde_concentration"}, {"delta", 0.1}, {"center", {0.4, 0.55}}},
      {{"kind", "multi_point"}, {"centers", {{0.3, 0.4}, {0.7, 0.6}}}},
      {{"kind", "boundary_strip_weyl"}}};
  const std::vector<double> ladder = geometric_ladder(1e-1, 1e-3, 8);
  // sup over families of mu_j int rho / |Omega| (j / |Omega|)^{-1}, per eps
  std::vector<std::vector<double>> sup(kJ + 1, std::vector<double>(ladder.size(), 0.0));
  for (const json& fam : families) {
    const ExperimentConfig cfg = parse_config(json{{"domain", {{"dim", 2}}},
                                                   {"m", 1},
                                                   {"k", kJ + 1},
                                                   {"density", fam},
                                                   {"discretization", {{"elements", 24}, {"cells_across", 8}}},
                                                   {"sweep", {{"eps", ladder}}}});
    const SweepResult s = run_sweep(cfg);
    if (!s.error.empty()) throw Error(s.error);
    for (std::size_t i = 0; i < s.points.size(); ++i)
      for (int j = 1; j <= kJ; ++j) {
        const auto& p = s.points[i];
        const double r = p.mu[j - 1] * p.mass / p.vol / (j / p.vol);
        sup[j][i] = std::max(sup[j][i], r);
      }
  }
  const std::size_t n = ladder.size();
  for (int j = 2; j <= kJ; ++j) {
    const double growth = std::max(sup[j][n - 1], sup[j][n - 2]) / sup[j][n - 3];
    std::string row;
    for (double v : sup[j]) row += " " + g(v, 4);
    log.info("j=" + std::to_string(j) + " sup ratio along eps:" + row + "  last-three growth " + g(growth, 4));
    log.require(growth <= 1.0 + kGrowth, "j=" + std::to_string(j) + " ratio grows");
  }
  return log.out;
}

Outcome gny_decomposition() {
  constexpr double kC = 0.01;
  Log log;
  for (int N : {1, 2}) {
    const Domain d = Domain::unit(N);
    const Point c = N == 1 ? Point{0.4, 0, 0} : Point{0.4, 0.55, 0};
    const int base = N == 1 ? 256 : 24, across = N == 1 ? 129 : 17;
    for (const Density& rho : {Density::constant(d, 1.0), Density::point_concentration(d, 1, 0.01, 0.1, c),
                               Density::boundary_strip_weyl(d, 1, 0.01)}) {
      const MeasureSpace ms = MeasureSpace::build(rho, base, across);
      double cmin = 1e300;
      for (int j = 1; j <= 8; ++j) {
        const Decomposition dec = decompose(ms, j);
        const GnyReport r = verify(dec, ms, j, rho.sup_norm(), kC);
        cmin = std::min(cmin, r.c_emp);
        if (!r.ok()) {
          std::string why;
          for (const auto& f : r.failures) why += " " + f;
          log.require(false, "N=" + std::to_string(N) + " " + rho.name() + " j=" + std::to_string(j) + ":" + why);
        }
      }
      log.info("N=" + std::to_string(N) + " " + rho.name() + ": min c_emp over j<=8 " + g(cmin, 4));
    }
  }
  return log.out;
}

Outcome bump_machinery() {
  constexpr double kResidual = 1e-10;
  Log log;
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  for (int m = 1; m <= 3; ++m)
    for (int i = 0; i < 100; ++i) {
      const double R = 0.01 + U(rng), r = (i % 10 == 0) ? 0.0 : R * (0.02 + 0.9 * U(rng));
      worst = std::max(worst, solve_profile(m, r, R).residual);
    }
  log.info("300 random profiles, m<=3: max residual " + g(worst, 3));
  log.require(worst < kResidual, "profile residual");
  const Domain sq = Domain::unit(2);
  const std::vector<Region> regions = {Ball{{0.2, 0.2, 0}, 0.07}, Ball{{0.8, 0.2, 0}, 0.07}, Ball{{0.2, 0.8, 0}, 0.07},
                                       Ball{{0.8, 0.8, 0}, 0.07}};
  for (int m : {1, 2})
    for (const Density& rho : {Density::constant(sq, 1.0), Density::smooth(sq, 1.0, 2.0)}) {
      const DiscreteSpace sp = build_space(sq, m, 96, BoundaryCondition::Natural, std::max(m, 2));
      const SparseMatrix K = assemble_stiffness(sp), M = assemble_mass(sp, rho);
      const Spectrum s = solve_generalized(K, M, 4 + expected_kernel_dimension(2, m), solver_for(sq));
      std::string row;
      for (int j = 1; j <= 4; ++j) {
        const std::vector<Region> sub(regions.begin(), regions.begin() + j);
        const auto vecs = project_family(build_disjoint_family(sub, m, sq), sp, rho);
        const double ub = minmax_upper_bound(K, M, vecs);
        row += " " + g(ub / s.eigenvalues[j - 1], 4);
        log.require(ub >= s.eigenvalues[j - 1], "min-max below mu_" + std::to_string(j));
      }
      log.info("m=" + std::to_string(m) + " " + rho.name() + ": bump bound / mu_j for j=1..4:" + row);
    }
  return log.out;
}

Outcome steklov_limit() {
  constexpr double kTol = 0.02;
  Log log;
  SolverConfig solver;
  {
    const SteklovResult s = steklov_compare(Domain::unit(1), 1, geometric_ladder(1e-1, 1e-3, 5), 2, graded(64, 8), solver);
    const SteklovRow& last = s.rows.back();
    log.info("1D: sigma = {" + g(s.sigma[0], 3) + ", " + g(s.sigma[1], 8) + "}, |dOmega| sigma_2 = " + g(last.target, 8));
    for (const auto& r : s.rows)
      if (r.j == 2) log.info("  eps " + g(r.eps, 3) + " mu_2 " + g(r.mu, 8) + " gap to target " + g(r.gap_target, 4) + " gap to sigma_2 " + g(r.gap_sigma, 4));
    log.require(last.gap_target <= kTol * last.target, "1D mu_2 at eps=1e-3 is " + g(last.mu, 6) + ", target " + g(last.target, 6));
  }
  {
    const std::vector<double> eps = {0.08, 0.04, 0.02, 0.01};
    const int jmax = 6;
    const SteklovResult s = steklov_compare(Domain::unit(2), 1, eps, jmax, graded(24, 8), solver);
    for (int j = 2; j <= jmax; ++j) {
      std::string row;
      bool dec = true;
      double prev = 1e300;
      for (const auto& r : s.rows)
        if (r.j == j) {
          row += " " + g(r.gap_target, 5);
          dec = dec && r.gap_target < prev;
          prev = r.gap_target;
        }
      std::string row2;
      for (const auto& r : s.rows)
        if (r.j == j) row2 += " " + g(r.gap_sigma, 4);
      log.info("2D j=" + std::to_string(j) + " sigma_j " + g(s.sigma[j - 1], 6) + ", gaps to |dOmega| sigma_j:" + row +
               ", gaps to sigma_j:" + row2);
      log.require(dec, "2D gap not decreasing at j=" + std::to_string(j));
    }
  }
  return log.out;
}

Outcome taylor_remainder() {
  Log log;
  const std::vector<double> eps = geometric_ladder(1e-1, 1e-3, 5);
  struct Case {
    int N, m, k;
  };
  for (const Case c : {Case{1, 1, 0}, Case{1, 2, 1}, Case{3, 2, 0}, Case{1, 3, 2}, Case{3, 3, 1}, Case{2, 2, 0},
                       Case{2, 3, 1}}) {
    const TaylorReport r = taylor_remainder_check(c.m, c.N, c.k, eps);
    std::string row;
    for (const auto& p : r.panel) row += " " + p.function + "=" + (p.exact ? std::string(p.bounded ? "exact" : "nonzero") : g(p.spread, 3));
    log.info(std::string(r.tcase == TaylorCase::Odd ? "odd " : "even") + " N=" + std::to_string(c.N) + " m=" +
             std::to_string(c.m) + " k=" + std::to_string(c.k) + ": max/min" + row);
    log.require(r.pass(), "N=" + std::to_string(c.N) + " m=" + std::to_string(c.m) + " k=" + std::to_string(c.k) +
                              " worst spread " + g(r.worst_spread, 3));
  }
  return log.out;
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "kernel structure", kernel_structure},
      {2, "analytic oracles", analytic_oracles},
      {3, "Weyl law", weyl_law},
      {4, "exact discrete scaling", exact_scaling},
      {5, "refinement monotonicity", refinement_monotonicity},
      {6, "Krein bound", krein},
      {7, "point concentration rates, N=1", rates_point_concentration},
      {8, "boundary strip rate, N=3", rate_boundary_strip},
      {9, "two-point family rates", multi_point_rates},
      {10, "lower bounds", lower_bounds},
      {11, "uniform upper bound", uniform_upper_bound},
      {12, "annuli decomposition", gny_decomposition},
      {13, "bump machinery", bump_machinery},
      {14, "Steklov limit", steklov_limit},
      {15, "Taylor remainder", taylor_remainder},
  };
  // Stated targets the exact mathematics does not meet; reported, not gated.
  const std::set<int> known_defects = {3, 14, 15};
  std::set<int> pick;
  std::ofstream report;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--report" && i + 1 < argc) {
      report.open(argv[++i]);
      continue;
    }
    pick.insert(std::atoi(argv[i]));
  }
  auto emit = [&](const std::string& line) {
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    if (report.is_open()) report << line << '\n' << std::flush;
  };
  int unexpected = 0;
  std::vector<int> failed;
  for (const auto& c : all) {
    if (!pick.empty() && !pick.count(c.id)) continue;
    std::printf("[%d] %s\n", c.id, c.title);
    std::fflush(stdout);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char head[160];
    std::snprintf(head, sizeof head, "%s %d: %s (%.1f s)", o.pass ? "PASS" : "FAIL", c.id, c.title, secs);
    emit(std::string(head) + (o.detail.empty() ? "" : ": " + o.detail));
    if (!o.pass) {
      failed.push_back(c.id);
      if (!known_defects.count(c.id)) ++unexpected;
    }
  }
  std::string summary = "summary: " + std::to_string(failed.size()) + " failed";
  for (int id : failed) summary += " " + std::to_string(id) + (known_defects.count(id) ? "(known)" : "");
  emit(summary);
  return unexpected == 0 ? 0 : 1;
}

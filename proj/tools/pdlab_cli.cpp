#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pdlab/config.hpp"
#include "pdlab/experiments.hpp"
#include "pdlab/gny.hpp"
#include "pdlab/taylor.hpp"

using namespace pdlab;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kPredicate = 2;

struct Common {
  std::string config;
  std::string out = "out";
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
};

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? parse_config(json::object()) : load_config(c.config);
  if (c.seed) {
    cfg.seed = *c.seed;
    cfg.solver.seed = *c.seed;
  }
  return cfg;
}

void report(const std::string& path) { std::cout << "wrote " << path << "\n"; }

int cmd_solve(const Common& c) {
  const ExperimentConfig cfg = load(c);
  const Density rho = parse_density(cfg.density, cfg.domain, cfg.m);
  const SolveResult s = solve_density(rho, cfg.m, cfg.disc, cfg.k, cfg.solver);
  report(emit(spectrum_table(s.spectrum), c.out, "spectrum", c.format));
  report(emit_json(json::parse(to_json(s.spectrum)), c.out, "spectrum_full"));
  std::cout << "dim " << s.dim << ", kernel " << s.spectrum.kernel_count << "/" << s.kernel_expected
            << (s.spectrum.converged ? "" : ", NOT converged") << "\n";
  return s.kernel_ok && s.spectrum.converged ? kOk : kPredicate;
}

int cmd_sweep(const Common& c) {
  const ExperimentConfig cfg = load(c);
  const SweepResult s = run_sweep(cfg);
  report(emit(sweep_table(s), c.out, "sweep", c.format));
  if (!s.error.empty()) {
    std::cerr << "sweep stopped: " << s.error << "\n";
    return kRuntime;
  }
  bool ok = true;
  for (const auto& p : s.points)
    if (!p.kernel_ok) {
      std::cerr << "kernel check failed at eps " << fmt17(p.eps) << "\n";
      ok = false;
    }
  std::vector<int> js = cfg.sweep.fit_j;
  if (js.empty()) js.push_back(expected_kernel_dimension(s.N, s.m) + 1);
  std::vector<RateFit> fits;
  if (s.points.size() >= 5) {
    for (int j : js) {
      try {
        fits.push_back(fit_rate(s, j));
      } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        ok = false;
      }
    }
  }
  report(emit(fit_table(fits), c.out, "fits", c.format));
  json meta = {{"expected_slope", cfg.sweep.expected_slope ? json(*cfg.sweep.expected_slope) : json(nullptr)},
               {"slope_tol", cfg.sweep.slope_tol},
               {"min_r2", cfg.sweep.min_r2},
               {"flag_threshold", cfg.sweep.flag_threshold},
               {"fits", json::array()}};
  for (const auto& f : fits) {
    bool pass = f.r2 >= cfg.sweep.min_r2;
    if (cfg.sweep.expected_slope) pass = pass && std::abs(f.slope - *cfg.sweep.expected_slope) <= cfg.sweep.slope_tol;
    meta["fits"].push_back({{"j", f.j}, {"slope", f.slope}, {"r2", f.r2}, {"points", f.points},
                            {"excluded_eps", f.excluded}, {"pass", pass}});
    std::cout << "j=" << f.j << " slope " << fmt17(f.slope) << " r2 " << fmt17(f.r2) << (pass ? "" : "  FAIL") << "\n";
    ok = ok && pass;
  }
  report(emit_json(meta, c.out, "fit_check"));
  return ok ? kOk : kPredicate;
}

int cmd_gny(const Common& c) {
  const ExperimentConfig cfg = load(c);
  const Density rho = parse_density(cfg.density, cfg.domain, cfg.m);
  const MeasureSpace ms = MeasureSpace::build(rho, cfg.gny.base_cells, cfg.gny.cells_across);
  DecomposeOptions opt;
  opt.theta = cfg.gny.theta;
  opt.volume_filter = cfg.gny.volume_filter;
  const Decomposition d = decompose(ms, cfg.gny.j, opt);
  const GnyReport r = verify(d, ms, cfg.gny.j, rho.sup_norm(), cfg.gny.c_threshold);
  json out = to_json(d, cfg.domain.dim());
  out["verify"] = {{"count", r.count},       {"disjoint", r.disjoint}, {"measures", r.measures},
                   {"constant", r.constant}, {"radius", r.radius},     {"c_emp", r.c_emp},
                   {"failures", r.failures}, {"ok", r.ok()}};
  report(emit_json(out, c.out, "gny"));
  std::cout << "c_emp " << fmt17(r.c_emp) << (r.ok() ? "" : "  FAIL") << "\n";
  return r.ok() ? kOk : kPredicate;
}

int cmd_steklov(const Common& c) {
  const ExperimentConfig cfg = load(c);
  std::vector<double> eps = cfg.steklov.eps;
  if (eps.empty()) eps = geometric_ladder(1e-1, 1e-3, 5);
  const SteklovResult s = steklov_compare(cfg.domain, cfg.m, eps, cfg.steklov.j_max, cfg.disc, cfg.solver);
  report(emit(s.table(), c.out, "steklov", c.format));
  const int d = expected_kernel_dimension(cfg.domain.dim(), cfg.m);
  const int jm = cfg.steklov.j_max;
  bool ok = true;
  for (int j = d + 1; j <= jm; ++j) {
    std::vector<double> gaps;
    for (const auto& r : s.rows)
      if (r.j == j) gaps.push_back(r.gap_target);
    for (std::size_t i = 1; i < gaps.size(); ++i)
      if (!(gaps[i] < gaps[i - 1])) ok = false;
    const SteklovRow& last = s.rows[(eps.size() - 1) * jm + (j - 1)];
    const bool close = last.gap_target <= cfg.steklov.tol * last.target;
    std::cout << "j=" << j << " mu " << fmt17(last.mu) << " |dOmega|sigma " << fmt17(last.target) << " sigma "
              << fmt17(last.sigma) << (close ? "" : "  FAIL") << "\n";
    ok = ok && close;
  }
  return ok ? kOk : kPredicate;
}

int cmd_verify(const Common& c) {
  const ExperimentConfig cfg = load(c);
  const SweepResult s = run_sweep(cfg);
  if (!s.error.empty()) {
    report(emit(sweep_table(s), c.out, "sweep", c.format));
    std::cerr << "sweep stopped: " << s.error << "\n";
    return kRuntime;
  }
  std::vector<BoundKind> kinds = cfg.verify.kinds;
  if (kinds.empty())
    for (auto k : {BoundKind::UpperMass_Nge2m, BoundKind::UpperMass_Nlt2m, BoundKind::WeylType_Nle2m,
                   BoundKind::WeylType_Ngt2m, BoundKind::LowerMass, BoundKind::LowerLp})
      if (applicable(k, s.N, s.m)) kinds.push_back(k);
  std::vector<int> js = cfg.verify.j;
  if (js.empty())
    for (int j = 1; j <= cfg.k; ++j) js.push_back(j);
  const auto reports = bound_reports(s, kinds, js, cfg.verify.explore);
  report(emit(bounds_table(reports), c.out, "bounds", c.format));
  json verdicts = json::array();
  bool ok = true;
  for (const auto& b : check_bounds(reports, cfg.verify.max_growth)) {
    verdicts.push_back({{"kind", to_string(b.verdict.kind)},
                        {"j", b.j},
                        {"sup_ratio", b.verdict.sup_ratio},
                        {"inf_ratio", b.verdict.inf_ratio},
                        {"last_over_first", b.verdict.last_over_first},
                        {"growth_last3", b.growth_last3},
                        {"label", b.verdict.label},
                        {"ok", b.ok}});
    ok = ok && b.ok;
  }
  report(emit_json(verdicts, c.out, "verdicts"));
  return ok ? kOk : kPredicate;
}

int cmd_taylor(const Common& c) {
  const ExperimentConfig cfg = load(c);
  std::vector<double> eps = cfg.taylor.eps;
  if (eps.empty()) eps = geometric_ladder(1e-1, 1e-3, 5);
  const TaylorReport r = taylor_remainder_check(cfg.m, cfg.taylor.N, cfg.taylor.k, eps, cfg.taylor.spread_limit);
  report(emit(r.table(), c.out, "taylor", c.format));
  for (const auto& p : r.panel)
    std::cout << p.function << (p.exact ? " remainder ~ 0: " : " max/min ") << (p.exact ? (p.bounded ? "yes" : "no") : fmt17(p.spread))
              << "\n";
  return r.pass() ? kOk : kPredicate;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pdlab: Neumann polyharmonic eigenvalues with a mass density"};
  app.require_subcommand(1);
  Common common;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON experiment file");
    sub->add_option("--out", common.out, "output directory");
    sub->add_option("--format", common.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed, "solver seed")->each([&](const std::string&) { common.seed = seed; });
    return sub;
  };
  struct Cmd {
    const char* name;
    const char* help;
    int (*run)(const Common&);
  };
  const Cmd cmds[] = {
      {"solve", "one spectrum", cmd_solve},
      {"sweep", "eps ladder and rate fits", cmd_sweep},
      {"gny", "annuli decomposition and verification", cmd_gny},
      {"steklov", "Neumann to Steklov comparison", cmd_steklov},
      {"verify", "bound reports and uniformity verdicts", cmd_verify},
      {"taylor", "Taylor remainder ratios on shrinking balls", cmd_taylor},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : cmds) subs.push_back(add_common(app.add_subcommand(c.name, c.help)));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kRuntime;
  }
  try {
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) return cmds[i].run(common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kRuntime;
}

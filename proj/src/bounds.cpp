#include "pdlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pdlab/geometry.hpp"

namespace pdlab {

namespace {

struct KindName {
  BoundKind kind;
  const char* name;
};

constexpr KindName kNames[] = {
    {BoundKind::UpperMass_Nge2m, "UpperMass_Nge2m"}, {BoundKind::UpperMass_Nlt2m, "UpperMass_Nlt2m"},
    {BoundKind::Krein, "Krein"},                     {BoundKind::WeylType_Nle2m, "WeylType_Nle2m"},
    {BoundKind::WeylType_Ngt2m, "WeylType_Ngt2m"},   {BoundKind::ConjecturedWeyl, "ConjecturedWeyl"},
    {BoundKind::LowerMass, "LowerMass"},             {BoundKind::LowerLp, "LowerLp"},
};

}  // namespace

std::string to_string(BoundKind k) {
  for (const auto& e : kNames)
    if (e.kind == k) return e.name;
  return "unknown";
}

BoundKind bound_kind_from_string(const std::string& s) {
  for (const auto& e : kNames)
    if (s == e.name) return e.kind;
  throw Error("unknown bound kind: " + s);
}

bool applicable(BoundKind k, int N, int m) {
  switch (k) {
    case BoundKind::UpperMass_Nge2m: return N >= 2 * m;
    case BoundKind::UpperMass_Nlt2m: return N < 2 * m;
    case BoundKind::Krein: return N == 1 && m == 1;
    case BoundKind::WeylType_Nle2m: return N <= 2 * m;
    case BoundKind::WeylType_Ngt2m: return N > 2 * m;
    // proved for N = 2m, open for N < 2m, false for N > 2m
    case BoundKind::ConjecturedWeyl: return N <= 2 * m;
    case BoundKind::LowerMass: return N < 2 * m;
    case BoundKind::LowerLp: return N > 2 * m;
  }
  return false;
}

bool is_lower_bound(BoundKind k) { return k == BoundKind::LowerMass || k == BoundKind::LowerLp; }

double weyl_reference(int N, int m, int j, double lp_integral) {
  if (N < 1 || m < 1 || j < 1 || !(lp_integral > 0.0)) throw Error("weyl_reference: inputs must be positive");
  const double q = 2.0 * m / N;
  return std::pow(2 * std::numbers::pi, 2 * m) * std::pow(unit_ball_volume(N), -q) * std::pow(j / lp_integral, q);
}

double structural_factor(BoundKind kind, const BoundInputs& in, bool explore) {
  if (!explore && !applicable(kind, in.N, in.m))
    throw Error("structural_factor: " + to_string(kind) + " does not apply to (N, m) = (" + std::to_string(in.N) +
                ", " + std::to_string(in.m) + ")");
  if (!(in.mass > 0.0 && in.lp_integral > 0.0 && in.sup > 0.0 && in.vol > 0.0 && in.j >= 1))
    throw Error("structural_factor: inputs must be positive");
  const double q = 2.0 * in.m / in.N;
  const double j = in.j;
  const double w = in.vol * std::pow(in.sup, 1.0 / q) / in.lp_integral;
  switch (kind) {
    case BoundKind::UpperMass_Nge2m: return in.vol / in.mass * std::pow(j / in.vol, q);
    case BoundKind::UpperMass_Nlt2m: return std::pow(in.sup, q - 1.0) * std::pow(j, q) / std::pow(in.mass, q);
    case BoundKind::Krein: return std::numbers::pi * std::numbers::pi * in.sup * j * j / (in.mass * in.mass);
    case BoundKind::WeylType_Nle2m: return std::pow(w, q - 1.0) * std::pow(j / in.lp_integral, q);
    case BoundKind::WeylType_Ngt2m: return std::pow(w, 1.0 - q) * std::pow(j / in.lp_integral, q);
    case BoundKind::ConjecturedWeyl: return std::pow(j / in.lp_integral, q);
    case BoundKind::LowerMass: return 1.0 / in.mass;
    case BoundKind::LowerLp: return 1.0 / std::pow(in.lp_integral, q);
  }
  throw Error("structural_factor: unknown kind");
}

BoundReport make_report(BoundKind kind, const BoundInputs& in, double eps, double mu, bool explore) {
  BoundReport r;
  r.kind = kind;
  r.N = in.N;
  r.m = in.m;
  r.j = in.j;
  r.eps = eps;
  r.mu = mu;
  r.factor = structural_factor(kind, in, explore);
  r.ratio = mu / r.factor;
  return r;
}

Verdict uniformity_verdict(const std::vector<BoundReport>& reports) {
  if (reports.empty()) throw Error("uniformity_verdict: no reports");
  Verdict v;
  v.kind = reports.front().kind;
  v.sup_ratio = -std::numeric_limits<double>::infinity();
  v.inf_ratio = std::numeric_limits<double>::infinity();
  for (const auto& r : reports) {
    if (r.kind != v.kind) throw Error("uniformity_verdict: mixed bound kinds");
    v.sup_ratio = std::max(v.sup_ratio, r.ratio);
    v.inf_ratio = std::min(v.inf_ratio, r.ratio);
  }
  v.last_over_first = reports.back().ratio / reports.front().ratio;
  const BoundReport& f = reports.front();
  if (v.kind == BoundKind::ConjecturedWeyl && f.N < 2 * f.m)
    v.label = "conjecture, not falsifiable by boundedness";
  else if (!applicable(v.kind, f.N, f.m))
    v.label = "inapplicable kind: divergence demonstrates a counterexample";
  else
    v.label = is_lower_bound(v.kind) ? "lower bound: inf ratio should stay positive"
                                     : "upper bound: sup ratio should stay finite";
  return v;
}

Table bounds_table(const std::vector<BoundReport>& reports) {
  Table t;
  t.header = {"kind", "N", "m", "j", "eps", "mu_j", "factor", "ratio"};
  for (const auto& r : reports)
    t.add({to_string(r.kind), std::to_string(r.N), std::to_string(r.m), std::to_string(r.j), fmt17(r.eps), fmt17(r.mu),
           fmt17(r.factor), fmt17(r.ratio)});
  return t;
}

}  // namespace pdlab

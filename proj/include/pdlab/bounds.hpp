#pragma once

#include <string>
#include <vector>

#include "pdlab/emit.hpp"

namespace pdlab {

enum class BoundKind {
  UpperMass_Nge2m,  // (|Ω|/∫ρ) (j/|Ω|)^{2m/N}
  UpperMass_Nlt2m,  // ||ρ||∞^{2m/N-1} j^{2m/N} / (∫ρ)^{2m/N}
  Krein,            // π² ||ρ||∞ j² / (∫ρ)², Dirichlet string
  WeylType_Nle2m,   // (|Ω| ||ρ||∞^{N/2m} / ∫ρ^{N/2m})^{2m/N-1} (j / ∫ρ^{N/2m})^{2m/N}
  WeylType_Ngt2m,   // same first factor with exponent 1-2m/N
  ConjecturedWeyl,  // (j / ∫ρ^{N/2m})^{2m/N}
  LowerMass,        // 1/∫ρ
  LowerLp           // 1/(∫ρ^{N/2m})^{2m/N}
};

std::string to_string(BoundKind k);
BoundKind bound_kind_from_string(const std::string& s);
bool applicable(BoundKind k, int N, int m);
bool is_lower_bound(BoundKind k);

struct BoundInputs {
  int N = 1;
  int m = 1;
  int j = 1;
  double mass = 1.0;         // ∫ρ
  double lp_integral = 1.0;  // ∫ρ^{N/2m}
  double sup = 1.0;          // ||ρ||∞
  double vol = 1.0;          // |Ω|
};

// (2π)^{2m} ω_N^{-2m/N} (j / ∫ρ^{N/2m})^{2m/N}
double weyl_reference(int N, int m, int j, double lp_integral);

// Factor with the unknown constant set to 1; throws for inapplicable (N, m) unless explore is set.
double structural_factor(BoundKind kind, const BoundInputs& in, bool explore = false);

struct BoundReport {
  BoundKind kind = BoundKind::UpperMass_Nge2m;
  int N = 1;
  int m = 1;
  int j = 1;
  double eps = 0.0;
  double mu = 0.0;
  double factor = 0.0;
  double ratio = 0.0;  // mu / factor
};

BoundReport make_report(BoundKind kind, const BoundInputs& in, double eps, double mu, bool explore = false);

struct Verdict {
  BoundKind kind = BoundKind::UpperMass_Nge2m;
  double sup_ratio = 0.0;
  double inf_ratio = 0.0;
  double last_over_first = 1.0;  // trend along the report order (decreasing eps)
  std::string label;
};

Verdict uniformity_verdict(const std::vector<BoundReport>& reports);

Table bounds_table(const std::vector<BoundReport>& reports);

}  // namespace pdlab

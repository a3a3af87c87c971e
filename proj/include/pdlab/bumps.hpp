#pragma once

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "pdlab/discretization.hpp"
#include "pdlab/geometry.hpp"

namespace pdlab {

// C^{m-1} plateau profile: 0 on [0, r/2), sum a_i (t/r)^i on [r/2, r), 1 on [r, R), sum b_i (t/R)^i on
// [R, 2R), 0 beyond. r = 0 drops the inner transition.
struct BumpProfile {
  int m = 1;
  double r = 0.0;
  double R = 1.0;
  std::vector<double> a;  // normalized, independent of r and R
  std::vector<double> b;
  double residual = 0.0;  // max violation of the 4m conditions, derivatives scaled by r^l or R^l
};

// 1 on [0, eps/2], sum c_i (t/eps)^i on [eps/2, eps), 0 beyond.
struct CapProfile {
  int m = 1;
  double eps = 1.0;
  std::vector<double> c;
  double residual = 0.0;
};

// U_1(t) = -log t + log eps0 - sum_{k=1}^{m-1} (eps0 - t)^k / (k eps0^k) on [eps, eps0],
// U_2(t) = alpha + sum_{k=0}^{m-2} alpha_k t^{m+k} on [0, eps], 0 beyond eps0.
struct LogProfile {
  int m = 1;
  double eps = 0.0;
  double eps0 = 0.0;
  double alpha = 0.0;
  std::vector<double> alpha_k;
  double residual = 0.0;  // C^{m-1} matching at eps, derivatives scaled by eps^l
  double growth = 0.0;    // |alpha| / |log eps|
};

using Profile = std::variant<BumpProfile, CapProfile, LogProfile>;

BumpProfile solve_profile(int m, double r, double R);
CapProfile cap_profile(int m, double eps);
LogProfile log_profile(int m, double eps, double eps0);

double profile_derivative(const Profile& p, double t, int l);
inline double profile_value(const Profile& p, double t) { return profile_derivative(p, t, 0); }
int profile_order(const Profile& p);
double support_radius(const Profile& p);
// Break points of the piecewise definition inside [0, support_radius].
std::vector<double> profile_breaks(const Profile& p);

struct RadialTestFunction {
  Point center{};
  Profile profile;
  double operator()(const Point& x, int N) const;
  Ball support() const { return {center, support_radius(profile)}; }
};

// All multi-indices alpha in N variables with |alpha| = order.
std::vector<std::array<int, 3>> multi_indices(int N, int order);

// d^alpha U(|x|) = sum over terms of coeff * omega^beta * U^{(k)}(t) * t^{k - |alpha|}, omega = x/|x|.
struct RadialTerm {
  int k;
  std::array<int, 3> beta;
  double coeff;
};
std::vector<RadialTerm> radial_derivative_terms(int N, const std::array<int, 3>& alpha);

// Bound on sum_alpha (sum_k max_omega |c_{N,k,alpha}(omega)|)^2 for the radial derivative expansion
// d^alpha U(|x|) = sum_k c_{N,k,alpha}(omega) U^{(k)}(t) t^{k-m}.
double radial_derivative_constant(int N, int m);

struct RadialEnergy {
  double surrogate = 0.0;  // |S^{N-1}| sum_k int (U^{(k)})^2 t^{N-1-2(m-k)} dt
  double c_nm = 0.0;       // radial_derivative_constant(N, m)
  double upper = 0.0;      // c_nm * surrogate >= int |D^m u|^2
  double exact = -1.0;     // m = 1 only: |S^{N-1}| int (U')^2 t^{N-1} dt
};
RadialEnergy radial_energy(const RadialTestFunction& f, int N, int m);

struct FamilyOptions {
  bool require_inside = true;  // supports compactly inside the domain
  int sample_per_axis = 16;
};

// One bump per region: Ball(a, R) -> U_{0,R}, Annulus(a, r, R) -> U_{r,R}. Supports are the doubled regions.
std::vector<RadialTestFunction> build_disjoint_family(const std::vector<Region>& regions, int m, const Domain& domain,
                                                      const FamilyOptions& opt = {});

// Coefficient vectors of the family in the discrete space, each restricted to functions supported in the
// bounding box of its support so that disjoint boxes give exactly decoupled vectors.
std::vector<DofVector> project_family(const std::vector<RadialTestFunction>& family, const DiscreteSpace& space,
                                      const Density& rho, double* worst_relative_error = nullptr);

nlohmann::json to_json(const Profile& p);

}  // namespace pdlab

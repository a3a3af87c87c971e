#include "pdlab/bumps.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

#include "pdlab/quadrature.hpp"

namespace pdlab {

namespace {

double falling(int i, int l) {
  double f = 1.0;
  for (int q = 0; q < l; ++q) f *= i - q;
  return f;
}

// l-th derivative in s of sum c_i s^i
double poly_derivative(const std::vector<double>& c, double s, int l) {
  double v = 0.0;
  for (int i = static_cast<int>(c.size()) - 1; i >= l; --i) v = v * s + c[i] * falling(i, l);
  return v;
}

// Hermite conditions for a degree 2m-1 polynomial in s: value/derivatives at s0 and s1.
std::vector<double> hermite_solve(int m, double s0, double v0, double s1, double v1) {
  const int n = 2 * m;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int l = 0; l < m; ++l) {
    for (int i = l; i < n; ++i) {
      A(l, i) = falling(i, l) * std::pow(s0, i - l);
      A(m + l, i) = falling(i, l) * std::pow(s1, i - l);
    }
  }
  rhs[0] = v0;
  rhs[m] = v1;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) throw Error("profile: singular Hermite system");
  const Eigen::VectorXd c = lu.solve(rhs);
  return {c.data(), c.data() + n};
}

double log_u1(const LogProfile& p, double t, int l) {
  const int m = p.m;
  double v;
  if (l == 0) {
    v = -std::log(t) + std::log(p.eps0);
  } else {
    // d^l(-log t) = (-1)^l (l-1)! t^{-l}
    v = ((l % 2) ? -1.0 : 1.0) * std::tgamma(l) * std::pow(t, -l);
  }
  for (int k = std::max(1, l); k <= m - 1; ++k) {
    const double dk = falling(k, l) * ((l % 2) ? -1.0 : 1.0) * std::pow(p.eps0 - t, k - l);
    v -= dk / (k * std::pow(p.eps0, k));
  }
  return v;
}

double log_u2(const LogProfile& p, double t, int l) {
  double v = l == 0 ? p.alpha : 0.0;
  for (int k = 0; k + 2 <= p.m; ++k) {
    const int e = p.m + k;
    if (e >= l) v += p.alpha_k[k] * falling(e, l) * std::pow(t, e - l);
  }
  return v;
}

struct Deriv {
  double operator()(const BumpProfile& p, double t, int l) const {
    if (p.r > 0.0 && t >= p.r / 2 && t < p.r) return poly_derivative(p.a, t / p.r, l) / std::pow(p.r, l);
    if (t >= p.r && t < p.R) return l == 0 ? 1.0 : 0.0;
    if (t >= p.R && t < 2 * p.R) return poly_derivative(p.b, t / p.R, l) / std::pow(p.R, l);
    return 0.0;
  }
  double operator()(const CapProfile& p, double t, int l) const {
    if (t < p.eps / 2) return l == 0 ? 1.0 : 0.0;
    if (t < p.eps) return poly_derivative(p.c, t / p.eps, l) / std::pow(p.eps, l);
    return 0.0;
  }
  double operator()(const LogProfile& p, double t, int l) const {
    if (t < p.eps) return log_u2(p, t, l);
    if (t <= p.eps0) return log_u1(p, t, l);
    return 0.0;
  }
};

}  // namespace

BumpProfile solve_profile(int m, double r, double R) {
  if (m < 1 || m > 7) throw Error("solve_profile: unsupported order m");
  if (!(r >= 0.0 && r < R)) throw Error("solve_profile: need 0 <= r < R");
  BumpProfile p;
  p.m = m;
  p.r = r;
  p.R = R;
  const int n = 2 * m;
  const bool inner = r > 0.0;
  const int rows = inner ? 2 * n : n;
  // conditions in the physical variable t, unknowns A_i = a_i / r^i and B_i = b_i / R^i
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, rows);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
  int row = 0;
  auto condition = [&](int offset, double t, int l, double target) {
    for (int i = l; i < n; ++i) A(row, offset + i) = falling(i, l) * std::pow(t, i - l);
    rhs[row++] = target;
  };
  const int ob = inner ? n : 0;
  for (int l = 0; l < m; ++l) {
    if (inner) {
      condition(0, r / 2, l, 0.0);
      condition(0, r, l, l == 0 ? 1.0 : 0.0);
    }
    condition(ob, R, l, l == 0 ? 1.0 : 0.0);
    condition(ob, 2 * R, l, 0.0);
  }
  // column equilibration
  Eigen::VectorXd sc(rows);
  for (int j = 0; j < rows; ++j) sc[j] = 1.0 / A.col(j).cwiseAbs().maxCoeff();
  const Eigen::MatrixXd As = A * sc.asDiagonal();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(As);
  if (!lu.isInvertible()) throw Error("solve_profile: singular system");
  const Eigen::VectorXd x = sc.asDiagonal() * lu.solve(rhs);
  if (inner) {
    p.a.resize(n);
    for (int i = 0; i < n; ++i) p.a[i] = x[i] * std::pow(r, i);
  }
  p.b.resize(n);
  for (int i = 0; i < n; ++i) p.b[i] = x[ob + i] * std::pow(R, i);

  double res = 0.0;
  for (int l = 0; l < m; ++l) {
    const double one = l == 0 ? 1.0 : 0.0;
    if (inner) {
      res = std::max(res, std::abs(poly_derivative(p.a, 0.5, l)));
      res = std::max(res, std::abs(poly_derivative(p.a, 1.0, l) - one));
    }
    res = std::max(res, std::abs(poly_derivative(p.b, 1.0, l) - one));
    res = std::max(res, std::abs(poly_derivative(p.b, 2.0, l)));
  }
  p.residual = res;
  return p;
}

CapProfile cap_profile(int m, double eps) {
  if (m < 1 || m > 7) throw Error("cap_profile: unsupported order m");
  if (!(eps > 0.0)) throw Error("cap_profile: eps must be positive");
  CapProfile p;
  p.m = m;
  p.eps = eps;
  p.c = hermite_solve(m, 0.5, 1.0, 1.0, 0.0);
  double res = 0.0;
  for (int l = 0; l < m; ++l) {
    res = std::max(res, std::abs(poly_derivative(p.c, 0.5, l) - (l == 0 ? 1.0 : 0.0)));
    res = std::max(res, std::abs(poly_derivative(p.c, 1.0, l)));
  }
  p.residual = res;
  return p;
}

LogProfile log_profile(int m, double eps, double eps0) {
  if (m < 1 || m > 7) throw Error("log_profile: unsupported order m");
  if (!(eps > 0.0 && eps < eps0 && eps0 < 1.0)) throw Error("log_profile: need 0 < eps < eps0 < 1");
  LogProfile p;
  p.m = m;
  p.eps = eps;
  p.eps0 = eps0;
  p.alpha_k.assign(std::max(0, m - 1), 0.0);
  // unknowns alpha and beta_k = alpha_k eps^{m+k}; row l scaled by eps^l
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd rhs(m);
  for (int l = 0; l < m; ++l) {
    A(l, 0) = l == 0 ? 1.0 : 0.0;
    for (int k = 0; k + 2 <= m; ++k) A(l, 1 + k) = falling(m + k, l);
    rhs[l] = std::pow(eps, l) * log_u1(p, eps, l);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) throw Error("log_profile: singular matching system");
  const Eigen::VectorXd x = lu.solve(rhs);
  p.alpha = x[0];
  for (int k = 0; k + 2 <= m; ++k) p.alpha_k[k] = x[1 + k] / std::pow(eps, m + k);
  double res = 0.0;
  for (int l = 0; l < m; ++l) {
    const double s = std::pow(eps, l);
    const double u1 = s * log_u1(p, eps, l);
    res = std::max(res, std::abs(s * log_u2(p, eps, l) - u1) / std::max(1.0, std::abs(u1)));
  }
  p.residual = res;
  p.growth = std::abs(p.alpha) / std::abs(std::log(eps));
  return p;
}

int profile_order(const Profile& p) {
  return std::visit([](const auto& q) { return q.m; }, p);
}

double profile_derivative(const Profile& p, double t, int l) {
  if (l < 0 || l > profile_order(p)) throw Error("profile_derivative: order l exceeds m");
  if (t < 0.0) throw Error("profile_derivative: negative radius");
  return std::visit([&](const auto& q) { return Deriv{}(q, t, l); }, p);
}

double support_radius(const Profile& p) {
  struct {
    double operator()(const BumpProfile& q) const { return 2 * q.R; }
    double operator()(const CapProfile& q) const { return q.eps; }
    double operator()(const LogProfile& q) const { return q.eps0; }
  } v;
  return std::visit(v, p);
}

std::vector<double> profile_breaks(const Profile& p) {
  struct {
    std::vector<double> operator()(const BumpProfile& q) const {
      if (q.r > 0.0) return {0.0, q.r / 2, q.r, q.R, 2 * q.R};
      return {0.0, q.R, 2 * q.R};
    }
    std::vector<double> operator()(const CapProfile& q) const { return {0.0, q.eps / 2, q.eps}; }
    std::vector<double> operator()(const LogProfile& q) const {
      // geometric splitting of [eps, eps0] for the logarithmic part
      std::vector<double> b{0.0};
      for (double t = q.eps; t < q.eps0; t *= 2.0) b.push_back(t);
      b.push_back(q.eps0);
      return b;
    }
  } v;
  return std::visit(v, p);
}

double RadialTestFunction::operator()(const Point& x, int N) const {
  return profile_value(profile, distance(x, center, N));
}

std::vector<RadialTerm> radial_derivative_terms(int N, const std::array<int, 3>& alpha) {
  if (N < 1 || N > 3) throw Error("radial_derivative_terms: unsupported dimension");
  using Key = std::pair<int, std::array<int, 3>>;  // (k, beta): omega^beta U^{(k)} t^{k-n}
  std::map<Key, double> terms{{Key{0, {0, 0, 0}}, 1.0}};
  int n = 0;
  for (int i = 0; i < N; ++i)
    for (int rep = 0; rep < alpha[i]; ++rep, ++n) {
      std::map<Key, double> next;
      for (const auto& [key, c] : terms) {
        const int k = key.first;
        const std::array<int, 3>& beta = key.second;
        const int bsum = beta[0] + beta[1] + beta[2];
        std::array<int, 3> up = beta;
        ++up[i];
        next[Key{k + 1, up}] += c;
        next[Key{k, up}] += -((n - k) + bsum) * c;
        if (beta[i] > 0) {
          std::array<int, 3> dn = beta;
          --dn[i];
          next[Key{k, dn}] += beta[i] * c;
        }
      }
      terms.clear();
      for (const auto& [key, c] : next)
        if (c != 0.0) terms.emplace(key, c);
    }
  std::vector<RadialTerm> out;
  for (const auto& [key, c] : terms) out.push_back({key.first, key.second, c});
  return out;
}

double radial_derivative_constant(int N, int m) {
  if (N < 1 || N > 3 || m < 1) throw Error("radial_derivative_constant: unsupported (N, m)");
  double C = 0.0;
  for (const auto& alpha : multi_indices(N, m)) {
    double row = 0.0;
    for (const auto& t : radial_derivative_terms(N, alpha)) row += std::abs(t.coeff);
    C += row * row;
  }
  return C;
}

std::vector<std::array<int, 3>> multi_indices(int N, int order) {
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a <= order; ++a)
    for (int b = 0; b <= (N > 1 ? order - a : 0); ++b) {
      const int c = order - a - b;
      if (N == 1 && a == order) out.push_back({a, 0, 0});
      if (N == 2 && c == 0) out.push_back({a, b, 0});
      if (N == 3 && c >= 0) out.push_back({a, b, c});
    }
  return out;
}

RadialEnergy radial_energy(const RadialTestFunction& f, int N, int m) {
  if (m < 1 || m > profile_order(f.profile)) throw Error("radial_energy: unsupported m for this profile");
  if (N < 1 || N > 3) throw Error("radial_energy: unsupported dimension");
  const std::vector<double> br = profile_breaks(f.profile);
  const Rule1D& g = gauss_legendre(24);
  double s = 0.0;
  for (std::size_t piece = 0; piece + 1 < br.size(); ++piece) {
    const double a = br[piece], b = br[piece + 1];
    const double h = 0.5 * (b - a);
    for (std::size_t q = 0; q < g.x.size(); ++q) {
      const double t = a + h * (g.x[q] + 1.0);
      double v = 0.0;
      for (int k = 1; k <= m; ++k) {
        const double d = profile_derivative(f.profile, t, k);
        if (d != 0.0) v += d * d * std::pow(t, N - 1 - 2 * (m - k));
      }
      s += h * g.w[q] * v;
    }
  }
  RadialEnergy e;
  e.surrogate = unit_sphere_area(N) * s;
  e.c_nm = radial_derivative_constant(N, m);
  e.upper = e.c_nm * e.surrogate;
  if (m == 1) e.exact = e.surrogate;
  return e;
}

std::vector<RadialTestFunction> build_disjoint_family(const std::vector<Region>& regions, int m, const Domain& domain,
                                                      const FamilyOptions& opt) {
  const int N = domain.dim();
  std::vector<RadialTestFunction> fam;
  std::vector<double> inner, outer;
  for (const Region& reg : regions) {
    RadialTestFunction f;
    if (const Ball* b = std::get_if<Ball>(&reg)) {
      f.center = b->center;
      f.profile = solve_profile(m, 0.0, b->radius);
      inner.push_back(0.0);
      outer.push_back(2 * b->radius);
    } else if (const Annulus* a = std::get_if<Annulus>(&reg)) {
      f.center = a->center;
      f.profile = solve_profile(m, a->inner, a->outer);
      inner.push_back(a->inner / 2);
      outer.push_back(2 * a->outer);
    } else {
      throw Error("build_disjoint_family: regions must be balls or annuli");
    }
    if (opt.require_inside && !(domain.contains(f.center) && domain.distance_to_boundary(f.center) >= outer.back()))
      throw Error("build_disjoint_family: support leaves the domain");
    fam.push_back(std::move(f));
  }
  const std::size_t n = fam.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance(fam[i].center, fam[j].center, N);
      const bool apart = d >= outer[i] + outer[j];
      const bool j_in_i = d + outer[j] <= inner[i];
      const bool i_in_j = d + outer[i] <= inner[j];
      if (!(apart || j_in_i || i_in_j)) throw Error("build_disjoint_family: overlap detected");
    }
  // sampled check
  const int s = opt.sample_per_axis;
  int total = 1;
  for (int d = 0; d < N; ++d) total *= s;
  for (int g = 0; g < total; ++g) {
    Point x{};
    int rest = g;
    for (int d = 0; d < N; ++d) {
      x[d] = domain.lo(d) + (rest % s + 0.5) * domain.edge(d) / s;
      rest /= s;
    }
    int hits = 0;
    for (const auto& f : fam)
      if (f(x, N) != 0.0) ++hits;
    if (hits > 1) throw Error("build_disjoint_family: overlap detected on sample grid");
  }
  return fam;
}

std::vector<DofVector> project_family(const std::vector<RadialTestFunction>& family, const DiscreteSpace& space,
                                      const Density& rho, double* worst_relative_error) {
  const Domain& dom = space.domain();
  const int N = dom.dim();
  std::vector<DofVector> out;
  double worst = 0.0;
  for (const auto& f : family) {
    const Ball sb = f.support();
    Box box;
    for (int d = 0; d < N; ++d)
      box.bounds.push_back({std::max(dom.lo(d), sb.center[d] - sb.radius), std::min(dom.hi(d), sb.center[d] + sb.radius)});
    const Projection pr = project([&](const Point& x) { return f(x, N); }, space, rho, &box);
    worst = std::max(worst, pr.relative_error);
    out.push_back(pr.coefficients);
  }
  if (worst_relative_error) *worst_relative_error = worst;
  return out;
}

nlohmann::json to_json(const Profile& p) {
  struct {
    nlohmann::json operator()(const BumpProfile& q) const {
      return {{"kind", "bump"}, {"m", q.m}, {"r", q.r}, {"R", q.R}, {"a", q.a}, {"b", q.b}, {"residual", q.residual}};
    }
    nlohmann::json operator()(const CapProfile& q) const {
      return {{"kind", "cap"}, {"m", q.m}, {"eps", q.eps}, {"c", q.c}, {"residual", q.residual}};
    }
    nlohmann::json operator()(const LogProfile& q) const {
      return {{"kind", "log"},        {"m", q.m},           {"eps", q.eps},
              {"eps0", q.eps0},       {"alpha", q.alpha},   {"alpha_k", q.alpha_k},
              {"residual", q.residual}, {"growth", q.growth}};
    }
  } v;
  return std::visit(v, p);
}

}  // namespace pdlab

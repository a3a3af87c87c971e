#include "pdlab/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pdlab/bumps.hpp"
#include "pdlab/quadrature.hpp"

namespace pdlab {

namespace {

double falling(double s, int l) {
  double f = 1.0;
  for (int q = 0; q < l; ++q) f *= s - q;
  return f;
}

double factorial(int n) { return falling(n, n); }

double binom(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// p(t) * exp(-t^2 / (2 s^2)); s == 0 drops the Gaussian
struct Factor1D {
  std::vector<double> poly;
  double s = 0.0;

  double derivative(double t, int l) const {
    auto pd = [&](int i) {
      double v = 0.0;
      for (int q = static_cast<int>(poly.size()) - 1; q >= i; --q) v = v * t + poly[q] * falling(q, i);
      return v;
    };
    if (s == 0.0) return pd(l);
    // G^{(r)} = (-1/s)^r He_r(t/s) G
    const double z = t / s, g = std::exp(-0.5 * z * z);
    std::vector<double> he(l + 1);
    he[0] = 1.0;
    if (l >= 1) he[1] = z;
    for (int r = 1; r < l; ++r) he[r + 1] = z * he[r] - r * he[r - 1];
    double v = 0.0;
    for (int i = 0; i <= l; ++i) {
      const int r = l - i;
      v += binom(l, i) * pd(i) * std::pow(-1.0 / s, r) * he[r] * g;
    }
    return v;
  }
};

struct SeparableTerm {
  double coeff = 1.0;
  std::array<Factor1D, 3> f;
};

PanelFunction separable(std::string name, std::vector<SeparableTerm> terms, int N) {
  PanelFunction u;
  u.name = std::move(name);
  u.partial = [terms = std::move(terms), N](const std::array<int, 3>& a, const Point& x) {
    double v = 0.0;
    for (const auto& t : terms) {
      double p = t.coeff;
      for (int d = 0; d < N; ++d) p *= t.f[d].derivative(x[d], a[d]);
      v += p;
    }
    return v;
  };
  return u;
}

PanelFunction sinusoid(std::string name, Point a, double b, int N) {
  PanelFunction u;
  u.name = std::move(name);
  u.partial = [a, b, N](const std::array<int, 3>& al, const Point& x) {
    double arg = b, scale = 1.0;
    for (int d = 0; d < N; ++d) {
      arg += a[d] * x[d];
      scale *= std::pow(a[d], al[d]);
    }
    return scale * std::sin(arg + (al[0] + al[1] + al[2]) * std::numbers::pi / 2);
  };
  return u;
}

PanelFunction radial_power(double s, int N) {
  PanelFunction u;
  u.name = "critical_radial";
  u.radial_power = s;
  u.partial = [s, N](const std::array<int, 3>& al, const Point& x) {
    double t2 = 0.0;
    for (int d = 0; d < N; ++d) t2 += x[d] * x[d];
    const double t = std::sqrt(t2);
    if (t == 0.0) return 0.0;
    const int n = al[0] + al[1] + al[2];
    double v = 0.0;
    for (const auto& term : radial_derivative_terms(N, al)) {
      double w = term.coeff * falling(s, term.k) * std::pow(t, s - n);
      for (int d = 0; d < N; ++d) w *= std::pow(x[d] / t, term.beta[d]);
      v += w;
    }
    return v;
  };
  return u;
}

// int over S^{N-1} of omega^gamma
double sphere_moment(int N, const std::array<int, 3>& g) {
  double num = 2.0;
  int total = 0;
  for (int d = 0; d < N; ++d) {
    if (g[d] % 2) return 0.0;
    num *= std::tgamma((g[d] + 1) / 2.0);
    total += g[d];
  }
  return num / std::tgamma((total + N) / 2.0);
}

struct PolarRule {
  std::vector<Point> dir;
  std::vector<double> w;
};

const PolarRule& sphere_rule(int N) {
  static PolarRule rules[3];
  PolarRule& r = rules[N - 1];
  if (!r.dir.empty()) return r;
  if (N == 1) {
    r.dir = {{1, 0, 0}, {-1, 0, 0}};
    r.w = {1, 1};
  } else if (N == 2) {
    const int n = 128;
    for (int i = 0; i < n; ++i) {
      const double th = 2 * std::numbers::pi * i / n;
      r.dir.push_back({std::cos(th), std::sin(th), 0});
      r.w.push_back(2 * std::numbers::pi / n);
    }
  } else {
    const Rule1D& gz = gauss_legendre(40);
    const int n = 80;
    for (std::size_t a = 0; a < gz.x.size(); ++a) {
      const double z = gz.x[a], rho = std::sqrt(1 - z * z);
      for (int i = 0; i < n; ++i) {
        const double ph = 2 * std::numbers::pi * i / n;
        r.dir.push_back({rho * std::cos(ph), rho * std::sin(ph), z});
        r.w.push_back(gz.w[a] * 2 * std::numbers::pi / n);
      }
    }
  }
  return r;
}

template <class F>
double ball_integral(int N, double R, F&& g) {
  const Rule1D& gt = gauss_legendre(24);
  const PolarRule& sr = sphere_rule(N);
  const double cuts[] = {0.0, 0.125, 0.5, 1.0};
  double sum = 0.0;
  for (int piece = 0; piece < 3; ++piece) {
    const double a = cuts[piece] * R, b = cuts[piece + 1] * R, h = 0.5 * (b - a);
    for (std::size_t q = 0; q < gt.x.size(); ++q) {
      const double t = a + h * (gt.x[q] + 1.0);
      const double wt = h * gt.w[q] * std::pow(t, N - 1);
      for (std::size_t i = 0; i < sr.dir.size(); ++i) {
        Point x{};
        for (int d = 0; d < N; ++d) x[d] = t * sr.dir[i][d];
        sum += wt * sr.w[i] * g(x);
      }
    }
  }
  return sum;
}

}  // namespace

TaylorCase taylor_case(int N, int m, int k) {
  if (m >= 1 && k >= 0 && k <= m - 1 && N == 2 * m - 2 * k - 1) return TaylorCase::Odd;
  if (m >= 2 && k >= 0 && k <= m - 2 && N == 2 * m - 2 * k - 2) return TaylorCase::Even;
  throw Error("taylor: (N, m, k) = (" + std::to_string(N) + ", " + std::to_string(m) + ", " + std::to_string(k) +
              ") needs N = 2m-2k-1 or N = 2m-2k-2");
}

std::vector<PanelFunction> default_panel(int N, int m, int k) {
  if (N < 1 || N > 3) throw Error("taylor: unsupported dimension");
  std::vector<PanelFunction> panel;
  auto mono = [](int deg) {
    std::vector<double> c(deg + 1, 0.0);
    c[deg] = 1.0;
    return c;
  };
  const double gs = 0.4;

  SeparableTerm t;
  t.f[0].poly = mono(k + 1);
  for (int d = 1; d < 3; ++d) t.f[d].poly = {1.0};
  panel.push_back(separable("monomial", {t}, N));

  SeparableTerm g = t;
  for (int d = 0; d < 3; ++d) g.f[d].s = gs;
  panel.push_back(separable("monomial_gauss", {g}, N));

  SeparableTerm sh = g;
  sh.f[0].poly.assign(k + 3, 0.0);
  for (int i = 0; i <= k + 2; ++i) sh.f[0].poly[i] = binom(k + 2, i);  // (1 + t)^{k+2}
  for (int d = 0; d < 3; ++d) sh.f[d].s = 0.5;
  if (N > 1) sh.f[1].poly = {1.0, -0.5};
  panel.push_back(separable("poly_gauss", {sh}, N));

  panel.push_back(sinusoid("sin", {3.0, 2.0, 1.0}, 0.3, N));
  panel.push_back(sinusoid("cos", {1.7, -2.3, 0.9}, 1.1 + std::numbers::pi / 2, N));

  std::vector<SeparableTerm> poly;
  SeparableTerm one;
  for (int d = 0; d < 3; ++d) one.f[d].poly = {1.0};
  poly.push_back(one);
  for (int d = 0; d < N && k >= 1; ++d) {
    SeparableTerm e = one;
    e.coeff = 0.5 + d;
    e.f[d].poly = mono(k);
    poly.push_back(e);
    e.coeff = -1.3;
    e.f[d].poly = mono(1);
    poly.push_back(e);
  }
  PanelFunction p = separable("degree_k_polynomial", poly, N);
  p.polynomial_degree_le_k = true;
  panel.push_back(p);

  panel.push_back(radial_power(m - N / 2.0 + 0.05, N));
  return panel;
}

double hm_norm_squared(const PanelFunction& u, int N, int m) {
  double sum = 0.0;
  for (int order = 0; order <= m; ++order)
    for (const auto& al : multi_indices(N, order)) {
      if (u.radial_power >= 0.0) {
        const double s = u.radial_power;
        const auto terms = radial_derivative_terms(N, al);
        double ang = 0.0;
        for (const auto& a : terms)
          for (const auto& b : terms) {
            std::array<int, 3> gsum{a.beta[0] + b.beta[0], a.beta[1] + b.beta[1], a.beta[2] + b.beta[2]};
            ang += a.coeff * b.coeff * falling(s, a.k) * falling(s, b.k) * sphere_moment(N, gsum);
          }
        const double expo = 2 * s - 2 * order + N;
        if (!(expo > 0.0)) throw Error("taylor: radial power not in H^m");
        sum += ang / expo;
      } else {
        sum += ball_integral(N, 1.0, [&](const Point& x) {
          const double v = u.partial(al, x);
          return v * v;
        });
      }
    }
  return sum;
}

double remainder_integral(const PanelFunction& u, int N, int k, double eps) {
  if (u.radial_power >= 0.0) {
    const double s = u.radial_power;
    if (!(s > k)) throw Error("taylor: radial power must exceed k");
    return unit_sphere_area(N) * std::pow(eps, 2 * s + N) / (2 * s + N);
  }
  struct Coef {
    std::array<int, 3> a;
    double c;
  };
  std::vector<Coef> tk;
  const Point zero{};
  for (int order = 0; order <= k; ++order)
    for (const auto& al : multi_indices(N, order))
      tk.push_back({al, u.partial(al, zero) / (factorial(al[0]) * factorial(al[1]) * factorial(al[2]))});
  return ball_integral(N, eps, [&](const Point& x) {
    double r = u.partial({0, 0, 0}, x);
    for (const auto& c : tk) r -= c.c * std::pow(x[0], c.a[0]) * std::pow(x[1], c.a[1]) * std::pow(x[2], c.a[2]);
    return r * r;
  });
}

bool TaylorReport::pass() const {
  if (!exactness_ok) return false;
  for (const auto& p : panel)
    if (!p.exact && !p.bounded) return false;
  return true;
}

Table TaylorReport::table() const {
  Table t;
  t.header = {"function", "eps", "remainder", "rhs", "ratio"};
  for (const auto& p : panel)
    for (std::size_t i = 0; i < eps.size(); ++i) {
      const double rhs = p.ratio[i] > 0 ? p.remainder[i] / p.ratio[i] : 0.0;
      t.add({p.function, fmt17(eps[i]), fmt17(p.remainder[i]), fmt17(rhs), fmt17(p.ratio[i])});
    }
  return t;
}

TaylorReport taylor_remainder_check(int m, int N, int k, const std::vector<double>& eps, double spread_limit) {
  TaylorReport rep;
  rep.N = N;
  rep.m = m;
  rep.k = k;
  rep.tcase = taylor_case(N, m, k);
  rep.eps = eps;
  rep.spread_limit = spread_limit;
  if (eps.size() < 2) throw Error("taylor: need at least two eps values");
  for (std::size_t i = 0; i < eps.size(); ++i)
    if (!(eps[i] > 0.0 && eps[i] < 1.0) || (i > 0 && !(eps[i] < eps[i - 1])))
      throw Error("taylor: eps ladder must be strictly decreasing in (0, 1)");

  rep.exactness_ok = true;
  for (const auto& u : default_panel(N, m, k)) {
    TaylorPanelResult r;
    r.function = u.name;
    const double norm2 = hm_norm_squared(u, N, m);
    double lo = 1e300, hi = 0.0;
    for (double e : eps) {
      const double rem = remainder_integral(u, N, k, e);
      double rhs = std::pow(e, 2 * m);
      if (rep.tcase == TaylorCase::Even) rhs *= 1.0 + std::abs(std::log(e));
      r.remainder.push_back(rem);
      r.ratio.push_back(rem / (rhs * norm2));
      lo = std::min(lo, r.ratio.back());
      hi = std::max(hi, r.ratio.back());
    }
    if (u.polynomial_degree_le_k) {
      r.exact = true;
      double worst = 0.0;
      for (std::size_t i = 0; i < eps.size(); ++i)
        worst = std::max(worst, r.remainder[i] / (unit_ball_volume(N) * std::pow(eps[i], N) * norm2));
      r.bounded = worst < 1e-20;
      rep.exactness_ok = r.bounded;
      r.spread = 0.0;
    } else {
      r.spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
      r.growth = r.ratio.back() / r.ratio.front();
      r.bounded = r.spread <= spread_limit;
      rep.worst_spread = std::max(rep.worst_spread, r.spread);
    }
    rep.panel.push_back(std::move(r));
  }
  return rep;
}

std::vector<double> geometric_ladder(double first, double last, int count) {
  if (count < 2 || !(first > 0.0 && last > 0.0)) throw Error("geometric_ladder: bad arguments");
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = first * std::pow(last / first, double(i) / (count - 1));
  out.back() = last;
  return out;
}

}  // namespace pdlab

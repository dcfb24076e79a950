#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "geometry.hpp"
#include "numeric.hpp"
#include "orlicz.hpp"
#include "spaces.hpp"

namespace morlicz {

struct RieszParams {
  double alpha;
  int n;

  RieszParams(double a, int dim) : alpha(a), n(dim) {
    if (n < 1) throw domain_error("riesz: dimension must be >= 1");
    if (!(alpha > 0 && alpha < n)) throw domain_error("riesz: alpha must lie in (0, n)");
  }
};

class divergence_error : public numeric_failure {
 public:
  using numeric_failure::numeric_failure;
};

namespace detail {

/// ∫_a^b |x − y|^{α−1} dy, without cancellation for short intervals far from x.
inline double interval_kernel(double a, double b, double x, double alpha) {
  auto diff = [&](double A, double w) {  // ((A + w)^α − A^α)/α
    if (A == 0) return std::pow(w, alpha) / alpha;
    return std::pow(A, alpha) * std::expm1(alpha * std::log1p(w / A)) / alpha;
  };
  if (x <= a) return diff(a - x, b - a);
  if (x >= b) return diff(x - b, b - a);
  return (std::pow(x - a, alpha) + std::pow(b - x, alpha)) / alpha;
}

/// ∫ w(t)·σ(t) dt over shells |y − P| = t with t < tmax, where σ(t) is the fraction of the shell inside a
/// ball of radius rho whose center is d > 0 away from P. Only the window |rho − d| < t < rho + d is
/// integrated; inner shells lying entirely inside are left to the caller.
template <class W>
double shell_window(int n, double d, double rho, double tmax, W&& w, double tol) {
  // t = c + h·u with u = −cos φ; 1 − κ² comes from factored differences so thin windows keep their precision
  const double c = std::max(rho, d), h = std::min(rho, d);
  double phi_max = std::numbers::pi;
  if (tmax < c + h) {
    const double um = (tmax - c) / h;
    if (um <= -1) return 0.0;
    phi_max = std::acos(-um);
  }
  auto g = [&](double phi) {
    const double u = -std::cos(phi), t = c + h * u;
    if (!(t > 0)) return 0.0;
    double P, Q;  // rho² − (t − d)², (t + d)² − rho²
    if (d >= rho) {
      P = rho * (1 - u) * rho * (1 + u);
      Q = (2 * d + rho * (u - 1)) * (t + d + rho);
    } else {
      P = d * (1 - u) * (2 * rho + d * (u - 1));
      Q = d * (1 + u) * (2 * rho + d * (1 + u));
    }
    double frac;
    if (n == 1) {
      frac = 0.5;
    } else {
      const double one_minus_k2 = std::clamp(P * Q / (4 * t * t * d * d), 0.0, 1.0);
      const double half = 0.5 * incomplete_beta((n - 1) / 2.0, 0.5, one_minus_k2);
      frac = Q >= P ? half : 1 - half;
    }
    return w(t) * frac * h * std::sin(phi);
  };
  return integrate(g, 0.0, phi_max, tol).value;
}

/// I_α χ_B at a point at distance d from the center of B (radius rho), in dimension n >= 2.
inline double riesz_ball_radial(int n, double alpha, double d, double rho, double tol) {
  const double nv = n * unit_ball_volume(n);
  double v = 0;
  if (d < rho) v += std::pow(rho - d, alpha) / alpha;
  if (d > 0) v += shell_window(n, d, rho, kInf, [&](double t) { return std::pow(t, alpha - 1); }, tol);
  return nv * v;
}

inline double riesz_ball(const Ball& b, double alpha, const std::vector<double>& x, double tol) {
  const int n = b.dim();
  if (n == 1) return interval_kernel(b.center[0] - b.radius, b.center[0] + b.radius, x[0], alpha);
  if (n > 3 && !b.at_origin()) throw unsupported_geometry("riesz: off-origin balls need n <= 3");
  return riesz_ball_radial(n, alpha, distance(x, b.center), b.radius, tol);
}

/// ∫_{B \ B_r} |y|^{α−n} dy.
inline double far_kernel_ball(const Ball& b, double alpha, double r, double tol) {
  const int n = b.dim();
  const double c = b.center_norm(), rho = b.radius;
  if (n == 1) {
    const double x = b.center[0];
    auto seg = [&](double lo, double hi) {  // ∫_lo^hi s^{α−1} ds over s >= r
      lo = std::max(lo, r);
      return hi > lo ? interval_kernel(lo, hi, 0.0, alpha) : 0.0;
    };
    return seg(x - rho, x + rho) + seg(-(x + rho), -(x - rho));
  }
  if (n > 3 && c > 0) throw unsupported_geometry("riesz_tail: off-origin balls need n <= 3");
  const double nv = n * unit_ball_volume(n);
  double v = 0;
  double start = std::max(r, std::abs(c - rho));
  if (c < rho && r < rho - c) v += (std::pow(rho - c, alpha) - std::pow(r, alpha)) / alpha;
  if (c > 0 && start < c + rho) {
    auto g = [&](double s) { return std::pow(s, alpha - 1) * sphere_fraction_inside(n, s, c, rho); };
    v += integrate(g, start, c + rho, tol).value;
  }
  return nv * v;
}

/// ∫_0^m F(s) s^{−β−1} ds where F(s) ~ κ s^n near 0; substitution keeps the integrand bounded.
template <class F>
double layer_integral(F&& F_of_s, int n, double beta, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  if (a > 0) {
    // s = e^t, one panel per decade
    auto g = [&](double t) {
      const double s = std::exp(t);
      return F_of_s(s) * std::pow(s, -beta);
    };
    const double la = std::log(a), lb = std::log(b);
    std::vector<double> breaks;
    for (double t = la + kLn10; t < lb; t += kLn10) breaks.push_back(t);
    return integrate_pieces(g, la, lb, breaks, tol).value;
  }
  const double k = n - beta;
  auto g = [&](double w) {
    if (w <= 0) return 0.0;
    const double s = b * std::pow(w, 1 / k);
    return F_of_s(s) * std::pow(s, -n) * std::pow(b, k) / k;
  };
  return integrate(g, 0.0, 1.0, tol).value;
}

}  // namespace detail

inline double riesz_eval(const TestFunction& f, const RieszParams& p, const std::vector<double>& x,
                         const NumericConfig& cfg = {}) {
  if (f.dim() != p.n || static_cast<int>(x.size()) != p.n) throw domain_error("riesz_eval: dimension mismatch");
  const double tol = cfg.quad_tol * 1e-2;
  if (const auto* rp = std::get_if<RadialPower>(&f.variant())) {
    const double d = distance(x, std::vector<double>(x.size(), 0.0));
    const double a = p.alpha, be = rp->beta, rho = rp->radius;
    const int n = p.n;
    if (d == 0) {
      if (be >= a) return rp->coef == 0 ? 0.0 : kInf * rp->coef;
      return rp->coef * n * unit_ball_volume(n) * std::pow(rho, a - be) / (a - be);
    }
    auto I_ball = [&](double s) {
      if (n == 1) return detail::interval_kernel(-s, s, x[0], a);
      return detail::riesz_ball_radial(n, a, d, s, tol);
    };
    // layer cake: c[ρ^{−β} Iχ_{B_ρ} + β ∫_0^ρ Iχ_{B_s} s^{−β−1} ds]
    double v = std::pow(rho, -be) * I_ball(rho);
    if (be != 0) {
      const double m = std::min(d, rho);
      v += be * (detail::layer_integral(I_ball, n, be, 0.0, m, tol) + detail::layer_integral(I_ball, n, be, m, rho, tol));
    }
    return rp->coef * v;
  }
  double v = 0;
  for (const auto& [c, b] : f.terms()) v += c * detail::riesz_ball(b, p.alpha, x, tol);
  return v;
}

/// ∫_{R^n \ B_r} |f(y)| |y|^{α−n} dy.
inline double riesz_tail(const TestFunction& f, const RieszParams& p, double r, const NumericConfig& cfg = {}) {
  if (!(r > 0)) throw domain_error("riesz_tail: r must be positive");
  if (f.dim() != p.n) throw domain_error("riesz_tail: dimension mismatch");
  const double tol = cfg.quad_tol * 1e-2;
  if (const auto* rp = std::get_if<RadialPower>(&f.variant())) {
    if (r >= rp->radius) return 0.0;
    const double k = p.alpha - rp->beta;
    const double nv = p.n * unit_ball_volume(p.n);
    const double I = k == 0 ? std::log(rp->radius / r) : (std::pow(rp->radius, k) - std::pow(r, k)) / k;
    return std::abs(rp->coef) * nv * I;
  }
  double v = 0;
  for (const auto& a : f.atoms()) {
    if (a.value == 0) continue;
    double t = detail::far_kernel_ball(a.outer, p.alpha, r, tol);
    for (const auto& h : a.holes) t -= detail::far_kernel_ball(h, p.alpha, r, tol);
    v += std::abs(a.value) * std::max(0.0, t);
  }
  return v;
}

namespace detail {

/// ∫_{B(x,ρ)} |f|.
inline double local_mass(const TestFunction& f, const std::vector<double>& x, double rho, double tol) {
  const int n = f.dim();
  if (const auto* rp = std::get_if<RadialPower>(&f.variant())) {
    const double c = std::abs(rp->coef), be = rp->beta, R = rp->radius;
    const double d = distance(x, std::vector<double>(x.size(), 0.0));
    const double nv = n * unit_ball_volume(n);
    if (d == 0) return c * nv * std::pow(std::min(rho, R), n - be) / (n - be);
    if (n == 1) {
      const double k = 1 - be;
      auto side = [&](double lo, double hi) {  // ∫ s^{-β} over [lo, hi] ∩ [0, R]
        const double a = std::max(0.0, lo), b = std::min(R, hi);
        if (!(b > a)) return 0.0;
        const double w = (a == lo && b == hi) ? 2 * rho : b - a;
        if (a == 0) return std::pow(w, k) / k;
        return std::pow(a, k) * std::expm1(k * std::log1p(w / a)) / k;
      };
      return c * (side(x[0] - rho, x[0] + rho) + side(-x[0] - rho, -x[0] + rho));
    }
    // shells about the origin: those below rho − d lie inside B(x, ρ)
    const double k = n - be;
    double v = 0;
    if (d < rho) v += std::pow(std::min(rho - d, R), k) / k;
    v += shell_window(n, d, rho, R, [&](double t) { return std::pow(t, k - 1); }, tol);
    v *= nv;
    return c * v;
  }
  const Ball b(x, rho);
  double m = 0;
  for (const auto& a : f.atoms())
    if (a.value != 0) m += std::abs(a.value) * a.measure_in(b);
  return m;
}

}  // namespace detail

/// Hardy–Littlewood maximal function at x: sup over radii of the average of |f| on B(x, ρ).
inline double maximal_eval(const TestFunction& f, const std::vector<double>& x, const NumericConfig& cfg = {}) {
  const int n = f.dim();
  if (static_cast<int>(x.size()) != n) throw domain_error("maximal_eval: dimension mismatch");
  const double tol = cfg.quad_tol * 1e-2;
  auto avg = [&](double lr) {
    const double rho = std::exp(lr);
    return detail::local_mass(f, x, rho, tol) / ball_volume(n, rho);
  };
  std::vector<double> cand;
  for (double r : cfg.r_grid.points()) cand.push_back(std::log(r));
  auto add = [&](double r) {
    if (r > 0) cand.push_back(std::log(r));
  };
  if (const auto* rp = std::get_if<RadialPower>(&f.variant())) {
    const double d = distance(x, std::vector<double>(x.size(), 0.0));
    add(d + rp->radius);
    add(std::abs(d - rp->radius));
  } else {
    for (const auto& [c, b] : f.terms()) {
      const double d = distance(x, b.center);
      add(d + b.radius);
      add(std::abs(d - b.radius));
    }
  }
  std::sort(cand.begin(), cand.end());
  std::size_t best = 0;
  std::vector<double> vals(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i) {
    vals[i] = avg(cand[i]);
    if (vals[i] > vals[best]) best = i;
  }
  double bv = vals[best];
  if (best > 0 && best + 1 < cand.size()) bv = std::max(bv, golden_maximize(avg, cand[best - 1], cand[best + 1], 1e-10).value);
  return bv;
}

/// D_a f(x) = f(ax).
inline TestFunction dilate(const TestFunction& f, double a) {
  if (!(a > 0) || !std::isfinite(a)) throw domain_error("dilate: a must be positive");
  auto scale = [&](const Ball& b) {
    std::vector<double> c = b.center;
    for (auto& v : c) v /= a;
    return Ball(std::move(c), b.radius / a);
  };
  if (const auto* i = std::get_if<Indicator>(&f.variant())) return TestFunction::indicator(scale(i->ball));
  if (const auto* rp = std::get_if<RadialPower>(&f.variant()))
    return TestFunction::radial_power(rp->n, rp->beta, rp->radius / a, rp->coef * std::pow(a, -rp->beta));
  if (const auto* d = std::get_if<DyadicTower>(&f.variant()))
    return TestFunction::dyadic_tower(d->p, d->terms, d->dilation * a);
  std::vector<std::pair<double, Ball>> ts;
  for (const auto& [c, b] : std::get<LinearCombo>(f.variant()).terms) ts.push_back({c, scale(b)});
  return TestFunction::linear_combo(std::move(ts));
}

struct DilationNorm {
  double formula;
  double empirical;
};

/// Operator norm of D_a on the central space: closed form through the s-function and the indicator sup.
inline DilationNorm dilation_norm(const SpaceSpec& s, double a, const NumericConfig& cfg = {}) {
  if (!(a > 0)) throw domain_error("dilation_norm: a must be positive");
  if (!s.phi.is_orlicz()) throw domain_error("dilation_norm: requires an Orlicz function");
  const double target = std::pow(a, s.n * (s.lambda - 1));
  const auto sf = s_function(s.phi, target, cfg);
  auto N = [&](double t) { return central_norm(TestFunction::indicator(Ball::origin(s.n, t)), s, false, cfg); };
  if (s.lambda == 1) return {sf.value, N(1 / a) / N(1)};
  // parametrize t by x = ln |B_{t/a}|^{λ−1}
  const double vn = unit_ball_volume(s.n);
  auto t_of = [&](double x) { return a * std::pow(std::exp(x / (s.lambda - 1)) / vn, 1.0 / s.n); };
  auto ratio = [&](double x) {
    const double t = t_of(x);
    return std::log(N(t / a)) - std::log(N(t));
  };
  LogGrid g = cfg.sup_grid;
  g.per_decade = std::min(g.per_decade, 32.0);
  std::vector<double> xs = g.log_points();
  for (double bp : inverse_breakpoints(s.phi))
    for (double x : {bp, bp - std::log(target)}) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  std::size_t best = 0;
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ys[i] = ratio(xs[i]);
    if (ys[i] > ys[best]) best = i;
  }
  double by = ys[best];
  if (best > 0 && best + 1 < xs.size()) by = std::max(by, golden_maximize(ratio, xs[best - 1], xs[best + 1], 1e-10).value);
  return {sf.value, std::exp(by)};
}

struct TailIntegralResult {
  double value;
  bool convergent;
  double truncation_bound;
  double log_value;
};

namespace detail {

/// ∫_u^∞ t^{α/n} Φ⁻¹(e^{c0} t^{c1}) dt/t with c1 < 0, evaluated in x = ln t.
inline TailIntegralResult power_tail(const YoungFunction& phi, double alpha, int n, double c0, double c1, double u,
                                     const NumericConfig& cfg) {
  if (!(u > 0)) throw domain_error("tail_integral: u must be positive");
  const double kappa = alpha / n + c1 * inverse_exponent_at_zero(phi);
  if (!(c1 < 0) || kappa >= 0) return {kInf, false, kInf, kInf};
  const double x0 = std::log(u);
  auto G = [&](double x) { return alpha / n * x + log_inverse(phi, c0 + c1 * x); };
  const double G0 = G(x0);
  auto h = [&](double x) { return std::exp(G(x) - G0); };
  std::vector<double> breaks;
  for (double bp : inverse_breakpoints(phi)) breaks.push_back((bp - c0) / c1);
  const double panel = std::clamp(2 / -kappa, 0.5, 50.0);
  const auto q = integrate_tail(h, x0, panel, cfg.quad_tol, breaks);
  if (!q.converged) return {kInf, false, kInf, kInf};
  const double scale = std::exp(G0);
  return {scale * q.value, true, scale * q.remainder, G0 + std::log(q.value)};
}

}  // namespace detail

/// ∫_u^∞ t^{α/n} Φ⁻¹(t^{λ−1}) dt/t.
inline TailIntegralResult tail_integral(const YoungFunction& phi, double lambda, double alpha, int n, double u,
                                        const NumericConfig& cfg = {}) {
  if (!(lambda >= 0 && lambda < 1)) throw domain_error("tail_integral: lambda must lie in [0,1)");
  return detail::power_tail(phi, alpha, n, 0.0, lambda - 1, u, cfg);
}

/// ∫_u^∞ t^{α/n} Φ⁻¹(r^λ/t) dt/t.
inline TailIntegralResult scaled_tail_integral(const YoungFunction& phi, double lambda, double alpha, int n, double u,
                                               double r, const NumericConfig& cfg = {}) {
  if (!(r > 0)) throw domain_error("scaled_tail_integral: r must be positive");
  return detail::power_tail(phi, alpha, n, lambda * std::log(r), -1.0, u, cfg);
}

}  // namespace morlicz

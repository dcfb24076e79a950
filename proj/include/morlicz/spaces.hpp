#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "geometry.hpp"
#include "numeric.hpp"
#include "orlicz.hpp"

namespace morlicz {

struct SpaceSpec {
  YoungFunction phi;
  double lambda = 0;
  int n = 1;
  bool homogeneous = true;

  SpaceSpec(YoungFunction f, double l, int dim, bool homog = true) : phi(std::move(f)), lambda(l), n(dim), homogeneous(homog) {
    if (!(lambda >= 0 && lambda <= 1)) throw domain_error("space: lambda must lie in [0,1]");
    if (n < 1) throw domain_error("space: dimension must be >= 1");
  }
};

struct Indicator {
  Ball ball;
  bool operator==(const Indicator&) const = default;
};

/// coef·|y|^{-beta} on the origin-centered ball of the given radius.
struct RadialPower {
  int n;
  double beta;
  double radius;
  double coef = 1;
  bool operator==(const RadialPower&) const = default;
};

struct LinearCombo {
  std::vector<std::pair<double, Ball>> terms;
  bool operator==(const LinearCombo&) const = default;
};

/// Σ_{k<K} 2^{k/p} χ_{[k, k+2^{-k}]}(|a x|) on the real line.
struct DyadicTower {
  double p;
  int terms;
  double dilation = 1;
  bool operator==(const DyadicTower&) const = default;
};

/// Piece of a piecewise-constant function: `value` on `outer` minus the `holes`.
struct Atom {
  double value;
  Ball outer;
  std::vector<Ball> holes;

  double measure_in(const Ball& b) const {
    double m = intersection_volume(outer, b);
    for (const auto& h : holes) m -= intersection_volume(h, b);
    return std::max(0.0, m);
  }
  double measure() const {
    double m = ball_volume(outer);
    for (const auto& h : holes) m -= ball_volume(h);
    return std::max(0.0, m);
  }
};

class TestFunction {
 public:
  using Variant = std::variant<Indicator, RadialPower, LinearCombo, DyadicTower>;

  static TestFunction indicator(Ball b) { return TestFunction(Indicator{std::move(b)}); }

  static TestFunction radial_power(int n, double beta, double radius, double coef = 1) {
    if (n < 1) throw domain_error("radial_power: dimension must be >= 1");
    if (!(beta < n) || !std::isfinite(beta)) throw domain_error("radial_power: beta must be < n (local integrability)");
    if (!(radius > 0) || !std::isfinite(radius)) throw domain_error("radial_power: radius must be positive");
    if (!std::isfinite(coef)) throw domain_error("radial_power: coefficient must be finite");
    return TestFunction(RadialPower{n, beta, radius, coef});
  }

  static TestFunction linear_combo(std::vector<std::pair<double, Ball>> terms) {
    if (terms.empty()) throw domain_error("linear_combo: no terms");
    const int n = terms.front().second.dim();
    for (const auto& [c, b] : terms) {
      if (b.dim() != n) throw domain_error("linear_combo: dimension mismatch");
      if (!std::isfinite(c)) throw domain_error("linear_combo: coefficient must be finite");
    }
    TestFunction f(LinearCombo{std::move(terms)});
    f.atoms();  // validates the nesting structure
    return f;
  }

  static TestFunction dyadic_tower(double p, int terms, double dilation = 1) {
    if (!(p > 0) || !std::isfinite(p)) throw domain_error("dyadic_tower: p must be positive");
    if (terms < 1 || terms > 60) throw domain_error("dyadic_tower: term count must lie in [1, 60]");
    if (!(dilation > 0) || !std::isfinite(dilation)) throw domain_error("dyadic_tower: dilation must be positive");
    return TestFunction(DyadicTower{p, terms, dilation});
  }

  const Variant& variant() const { return v_; }

  std::string variant_name() const {
    switch (v_.index()) {
      case 0: return "indicator";
      case 1: return "radial_power";
      case 2: return "linear_combo";
      default: return "dyadic_tower";
    }
  }

  int dim() const {
    return std::visit(
        [](const auto& k) -> int {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Indicator>) return k.ball.dim();
          else if constexpr (std::is_same_v<K, RadialPower>) return k.n;
          else if constexpr (std::is_same_v<K, LinearCombo>) return k.terms.front().second.dim();
          else return 1;
        },
        v_);
  }

  bool is_radial_power() const { return std::holds_alternative<RadialPower>(v_); }

  /// Every ball involved is centered at the origin.
  bool is_radial() const {
    if (is_radial_power()) return true;
    if (std::holds_alternative<DyadicTower>(v_)) return false;
    for (const auto& [c, b] : terms())
      if (!b.at_origin()) return false;
    return true;
  }

  /// f = Σ c_j χ_{B_j}; not available for RadialPower.
  std::vector<std::pair<double, Ball>> terms() const {
    if (const auto* i = std::get_if<Indicator>(&v_)) return {{1.0, i->ball}};
    if (const auto* l = std::get_if<LinearCombo>(&v_)) return l->terms;
    if (const auto* d = std::get_if<DyadicTower>(&v_)) {
      std::vector<std::pair<double, Ball>> out;
      for (int k = 0; k < d->terms; ++k) {
        const double h = std::ldexp(1.0, -k - 1) / d->dilation;
        const double mid = (k + std::ldexp(1.0, -k - 1)) / d->dilation;
        const double c = std::pow(2.0, k / d->p);
        out.push_back({c, Ball({mid}, h)});
        out.push_back({c, Ball({-mid}, h)});
      }
      return out;
    }
    throw domain_error("terms: radial power has no indicator decomposition");
  }

  /// Level decomposition of a piecewise-constant function. Balls must be pairwise nested or disjoint.
  std::vector<Atom> atoms() const {
    auto ts = terms();
    std::vector<std::pair<double, Ball>> merged;
    for (auto& [c, b] : ts) {
      auto it = std::find_if(merged.begin(), merged.end(), [&](const auto& m) { return m.second == b; });
      if (it != merged.end())
        it->first += c;
      else
        merged.push_back({c, b});
    }
    std::sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) { return a.second.radius > b.second.radius; });
    const std::size_t m = merged.size();
    std::vector<int> parent(m, -1);
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        const auto& bi = merged[i].second;
        const auto& bj = merged[j].second;
        const double d = distance(bi.center, bj.center);
        const double slack = 1e-12 * (bi.radius + bj.radius);
        if (d + bj.radius <= bi.radius + slack) {
          parent[j] = static_cast<int>(i);  // smallest container wins since radii decrease
        } else if (d < bi.radius + bj.radius - slack) {
          throw domain_error("linear_combo: balls must be nested or disjoint");
        }
      }
    }
    std::vector<Atom> out;
    for (std::size_t j = 0; j < m; ++j) {
      double v = 0;
      for (int k = static_cast<int>(j); k >= 0; k = parent[static_cast<std::size_t>(k)]) v += merged[static_cast<std::size_t>(k)].first;
      Atom a{v, merged[j].second, {}};
      for (std::size_t c = 0; c < m; ++c)
        if (parent[c] == static_cast<int>(j)) a.holes.push_back(merged[c].second);
      out.push_back(std::move(a));
    }
    return out;
  }

  /// Radii at which the restriction to B_r changes structure.
  std::vector<double> radial_breakpoints() const {
    std::vector<double> out;
    if (const auto* rp = std::get_if<RadialPower>(&v_)) {
      out.push_back(rp->radius);
      return out;
    }
    for (const auto& [c, b] : terms()) {
      const double d = b.center_norm();
      out.push_back(d + b.radius);
      if (d > b.radius) out.push_back(d - b.radius);
      if (d < b.radius && d > 0) out.push_back(b.radius - d);
      if (d > 0) out.push_back(d);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  double value_at(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != dim()) throw domain_error("value_at: dimension mismatch");
    if (const auto* rp = std::get_if<RadialPower>(&v_)) {
      const double s = distance(x, std::vector<double>(x.size(), 0.0));
      if (s >= rp->radius) return 0.0;
      if (s == 0) return rp->beta > 0 ? kInf * rp->coef : (rp->beta == 0 ? rp->coef : 0.0);
      return rp->coef * std::pow(s, -rp->beta);
    }
    double v = 0;
    for (const auto& [c, b] : terms())
      if (distance(x, b.center) < b.radius) v += c;
    return v;
  }

  bool operator==(const TestFunction&) const = default;

 private:
  explicit TestFunction(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

namespace detail {

/// Largest u with Φ(u) finite.
inline double finite_range(const YoungFunction& phi) {
  if (std::holds_alternative<LinearCapKind>(phi.kind())) return 1.0;
  if (const auto* t = std::get_if<TabulatedKind>(&phi.kind()))
    if (std::isinf(t->right_slope)) return t->u.back();
  return kInf;
}

/// Growth exponent of Φ at infinity.
inline double growth_exponent(const YoungFunction& phi) {
  const double e = inverse_exponent_at_infinity(phi);
  return e > 0 ? 1 / e : kInf;
}

inline void require_origin(const Ball& b, const char* what) {
  if (!b.at_origin()) throw domain_error(std::string(what) + ": ball must be centered at the origin");
}

inline double phi_times(const YoungFunction& phi, double u, double measure) {
  if (measure <= 0 || u == 0) return 0.0;
  return evaluate(phi, u) * measure;
}

/// ∫_{B_m} Φ(|c| |y|^{-β}/ε) dy.
inline double radial_phi_integral(const RadialPower& f, const YoungFunction& phi, double m, double eps,
                                  const NumericConfig& cfg) {
  const int n = f.n;
  const double c = std::abs(f.coef);
  if (c == 0 || m <= 0) return 0.0;
  const double vol = ball_volume(n, m);
  if (f.beta == 0) return phi_times(phi, c / eps, vol);
  const double cap = finite_range(phi);
  const double nv = n * unit_ball_volume(n);
  if (f.beta < 0) {
    const double top = c * std::pow(m, -f.beta) / eps;
    if (top > cap) return kInf;
    auto g = [&](double s) { return evaluate(phi, c * std::pow(s, -f.beta) / eps) * std::pow(s, n - 1); };
    return nv * integrate(g, 0.0, m, cfg.quad_tol * 1e-2).value;
  }
  if (std::isfinite(cap)) return kInf;
  if (f.beta * growth_exponent(phi) >= n) return kInf;
  // s = m e^{-y}
  const double base = c * std::pow(m, -f.beta) / eps;
  auto g = [&](double y) { return evaluate(phi, base * std::exp(f.beta * y)) * std::exp(-n * y); };
  const double rate = n - f.beta * growth_exponent(phi);
  const double panel = std::clamp(2 / rate, 0.5, 40.0);
  const auto q = integrate_tail(g, 0.0, panel, cfg.quad_tol);
  if (!q.converged) return kInf;
  return nv * std::pow(m, n) * q.value;
}

/// Smallest ε > 0 with M(ε) <= 1 for a nonincreasing M; 0 if M vanishes, inf if never <= 1.
/// Illinois steps on ln M(e^x), which is close to linear for power-like Φ, with bisection across jumps.
template <class M>
double gauge(M&& modular, double tol) {
  constexpr double step = 4 * kLn10;
  auto g = [&](double x) { return std::log(modular(std::exp(x))); };
  double lo, hi, glo, ghi;
  if (const double g0 = g(0); g0 > 0) {
    lo = 0, glo = g0;
    hi = step, ghi = g(hi);
    while (ghi > 0) {
      lo = hi, glo = ghi;
      hi += step;
      if (hi > 690) return kInf;
      ghi = g(hi);
    }
  } else {
    hi = 0, ghi = g0;
    lo = -step, glo = g(lo);
    while (!(glo > 0)) {
      hi = lo, ghi = glo;
      lo -= step;
      if (lo < -690) return 0.0;
      glo = g(lo);
    }
  }
  int kept = 0;  // +1 after lo moved, -1 after hi moved
  for (int i = 0; i < 400 && hi - lo > tol; ++i) {
    double x = 0.5 * (lo + hi);
    if (std::isfinite(glo) && std::isfinite(ghi) && glo > ghi) x = hi - ghi * (hi - lo) / (ghi - glo);
    x = std::clamp(x, lo + 0.25 * tol, hi - 0.25 * tol);
    const double gx = g(x);
    if (gx > 0) {
      lo = x, glo = gx;
      if (kept == 1) ghi *= 0.5;
      kept = 1;
    } else {
      hi = x, ghi = gx;
      if (kept == -1) glo *= 0.5;
      kept = -1;
    }
  }
  return std::exp(hi);
}

}  // namespace detail

inline double distribution_function(const TestFunction& f, double u, const Ball& restrict) {
  if (!(u > 0)) throw domain_error("distribution_function: u must be positive");
  if (restrict.dim() != f.dim()) throw domain_error("distribution_function: dimension mismatch");
  if (const auto* rp = std::get_if<RadialPower>(&f.variant())) {
    const double c = std::abs(rp->coef);
    const int n = rp->n;
    const Ball supp = Ball::origin(n, rp->radius);
    if (c == 0) return 0.0;
    if (rp->beta == 0) return c > u ? intersection_volume(supp, restrict) : 0.0;
    if (rp->beta > 0) {
      const double s = std::min(rp->radius, std::pow(c / u, 1 / rp->beta));
      return intersection_volume(Ball::origin(n, s), restrict);
    }
    const double s0 = std::pow(u / c, -1 / rp->beta);
    if (s0 >= rp->radius) return 0.0;
    return intersection_volume(supp, restrict) - intersection_volume(Ball::origin(n, s0), restrict);
  }
  double d = 0;
  for (const auto& a : f.atoms())
    if (std::abs(a.value) > u) d += a.measure_in(restrict);
  return d;
}

/// |B|^{-λ} ∫_B Φ(|f|/ε).
inline double modular(const TestFunction& f, const YoungFunction& phi, double lambda, const Ball& b, double eps,
                      const NumericConfig& cfg = {}) {
  if (!(eps > 0)) throw domain_error("modular: eps must be positive");
  detail::require_origin(b, "modular");
  if (b.dim() != f.dim()) throw domain_error("modular: dimension mismatch");
  const double scale = std::pow(ball_volume(b), -lambda);
  if (const auto* rp = std::get_if<RadialPower>(&f.variant()))
    return scale * detail::radial_phi_integral(*rp, phi, std::min(b.radius, rp->radius), eps, cfg);
  double s = 0;
  for (const auto& a : f.atoms()) s += detail::phi_times(phi, std::abs(a.value) / eps, a.measure_in(b));
  return scale * s;
}

namespace detail {

/// (|value|, measure) of the nonzero levels of a piecewise-constant f inside b, by decreasing value.
inline std::vector<std::pair<double, double>> levels_in(const TestFunction& f, const Ball& b) {
  std::map<double, double, std::greater<>> lv;
  for (const auto& a : f.atoms()) {
    const double m = a.measure_in(b);
    if (m > 0 && a.value != 0) lv[std::abs(a.value)] += m;
  }
  std::vector<std::pair<double, double>> out;
  double cum = 0;
  for (auto [v, m] : lv) {
    cum += m;
    out.push_back({v, cum});
  }
  return out;
}

/// sup_u Φ(u/ε) d(f χ_b, u) for a radial power on b.
inline double radial_weak_sup(const RadialPower& f, const YoungFunction& phi, double r, double eps) {
  const int n = f.n;
  const double c = std::abs(f.coef);
  const double m = std::min(r, f.radius);
  if (c == 0) return 0.0;
  const double vm = ball_volume(n, m);
  if (f.beta == 0) return phi_times(phi, c / eps, vm);
  auto logw = [&](double lu) -> double {
    const double u = std::exp(lu);
    double d;
    if (f.beta > 0)
      d = ball_volume(n, std::min(m, std::pow(c / u, 1 / f.beta)));
    else
      d = vm - ball_volume(n, std::min(m, std::pow(u / c, -1 / f.beta)));
    const double ph = evaluate(phi, u / eps);
    if (d <= 0 || ph == 0) return -kInf;
    return std::log(ph) + std::log(d);
  };
  if (f.beta > 0) {
    const double u0 = c * std::pow(m, -f.beta);
    if (std::isfinite(finite_range(phi))) return kInf;
    if (growth_exponent(phi) * f.beta > n) return kInf;
    double best = logw(std::log(u0)), bx = std::log(u0);
    for (double lu = std::log(u0); lu < std::log(u0) + 60; lu += 0.05) {
      const double w = logw(lu);
      if (w > best) best = w, bx = lu;
    }
    const auto e = golden_maximize(logw, std::max(std::log(u0), bx - 0.05), bx + 0.05, 1e-10);
    return std::exp(std::max(best, e.value));
  }
  const double U = c * std::pow(m, -f.beta);
  double best = -kInf, bx = std::log(U);
  for (double lu = std::log(U) - 60; lu < std::log(U); lu += 0.05) {
    const double w = logw(lu);
    if (w > best) best = w, bx = lu;
  }
  const auto e = golden_maximize(logw, bx - 0.05, std::min(std::log(U), bx + 0.05), 1e-10);
  return std::exp(std::max(best, e.value));
}

}  // namespace detail

/// sup_u Φ(u/ε) d(fχ_b, u) |b|^{-λ}.
inline double weak_modular(const TestFunction& f, const YoungFunction& phi, double lambda, const Ball& b, double eps) {
  detail::require_origin(b, "weak_modular");
  const double scale = std::pow(ball_volume(b), -lambda);
  if (const auto* rp = std::get_if<RadialPower>(&f.variant()))
    return scale * detail::radial_weak_sup(*rp, phi, b.radius, eps);
  double s = 0;
  for (auto [v, m] : detail::levels_in(f, b)) s = std::max(s, detail::phi_times(phi, v / eps, m));
  return scale * s;
}

inline double luxemburg_norm(const TestFunction& f, const YoungFunction& phi, double lambda, const Ball& b,
                             const NumericConfig& cfg = {}) {
  return detail::gauge([&](double e) { return modular(f, phi, lambda, b, e, cfg); }, cfg.bisection_tol);
}

inline double weak_norm(const TestFunction& f, const YoungFunction& phi, double lambda, const Ball& b,
                        const NumericConfig& cfg = {}) {
  return detail::gauge([&](double e) { return weak_modular(f, phi, lambda, b, e); }, cfg.bisection_tol);
}

struct CentralNorm {
  double value;
  double r_star;  // radius attaining the sup (inf when divergent)
  bool divergent = false;
  bool closed_form = false;
};

/// Norm over B_r for one radius.
inline double ball_norm(const TestFunction& f, const SpaceSpec& s, bool weak, double r, const NumericConfig& cfg) {
  const Ball b = Ball::origin(s.n, r);
  return weak ? weak_norm(f, s.phi, s.lambda, b, cfg) : luxemburg_norm(f, s.phi, s.lambda, b, cfg);
}

/// Grid search over radii with golden refinement and end-growth classification.
inline CentralNorm central_norm_search(const TestFunction& f, const SpaceSpec& s, bool weak, const NumericConfig& cfg) {
  if (f.dim() != s.n) throw domain_error("central_norm: dimension mismatch");
  const double rmin = s.homogeneous ? 0.0 : 1.0;
  std::vector<double> grid;
  for (double r : cfg.r_grid.points())
    if (r > rmin) grid.push_back(r);
  if (!s.homogeneous) grid.push_back(1.0 * (1 + 1e-12));
  for (double bp : f.radial_breakpoints())
    for (double r : {bp * (1 - 1e-9), bp, bp * (1 + 1e-9)})
      if (r > rmin) grid.push_back(r);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  auto norm_at = [&](double r) { return ball_norm(f, s, weak, r, cfg); };
  std::vector<double> lx, ly;
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    lx.push_back(std::log(grid[i]));
    ly.push_back(std::log(norm_at(grid[i])));
    if (std::isnan(ly[i])) throw numeric_failure("central_norm: norm evaluation failed");
    if (ly[i] > ly[best]) best = i;
  }
  if (std::isinf(ly[best]) && ly[best] > 0) return {kInf, grid[best], true, false};

  const double far = 30 * kLn10;
  auto log_norm = [&](double x) { return std::log(norm_at(std::exp(x))); };
  const auto g = end_growth(lx, ly, cfg.slope_decades);
  const bool low_div =
      s.homogeneous && end_diverges(log_norm, lx.front(), ly.front(), g.growth_low, -1, cfg.slope_tol, far);
  const bool high_div = end_diverges(log_norm, lx.back(), ly.back(), g.growth_high, 1, cfg.slope_tol, far);
  if (low_div) return {kInf, 0.0, true, false};
  if (high_div) return {kInf, kInf, true, false};

  double bx = lx[best], by = ly[best];
  std::size_t lo_i = best, hi_i = best;
  for (int round = 0; round < std::max(1, cfg.refinement_rounds); ++round) {
    lo_i = lo_i > 0 ? lo_i - 1 : 0;
    hi_i = std::min(hi_i + 1, lx.size() - 1);
    if (lo_i == hi_i) break;
    const auto e = golden_maximize(log_norm, lx[lo_i], lx[hi_i], 1e-10);
    if (e.value > by) bx = e.x, by = e.value;
  }
  return {std::exp(by), std::exp(bx), false, false};
}

inline CentralNorm central_norm_detail(const TestFunction& f, const SpaceSpec& s, bool weak,
                                       const NumericConfig& cfg = {}) {
  if (const auto* ind = std::get_if<Indicator>(&f.variant()); ind && ind->ball.at_origin()) {
    if (f.dim() != s.n) throw domain_error("central_norm: dimension mismatch");
    const double t = ind->ball.radius;
    const double r = s.homogeneous ? t : std::max(t, 1.0);
    const double value = 1 / inverse(s.phi, std::pow(ball_volume(s.n, r), s.lambda) / ball_volume(s.n, t));
    const double check = ball_norm(f, s, weak, r, cfg);
    if (std::abs(check - value) > 1e-6 * value) throw numeric_failure("central_norm: closed form disagrees with bisection");
    return {value, r, false, true};
  }
  return central_norm_search(f, s, weak, cfg);
}

inline double central_norm(const TestFunction& f, const SpaceSpec& s, bool weak, const NumericConfig& cfg = {}) {
  return central_norm_detail(f, s, weak, cfg).value;
}

}  // namespace morlicz

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <type_traits>
#include <variant>
#include <vector>

#include "numeric.hpp"

namespace morlicz {

struct PowerKind {
  double p;
  bool operator==(const PowerKind&) const = default;
};

/// Inverse given by u^{1/p} on [0,1] and u^{1/p}(1+ln u)^{-a} above 1.
struct PowerLogPlusKind {
  double p;
  double a;
  bool operator==(const PowerLogPlusKind&) const = default;
};

/// Inverse given by u^{1/p}(1+|ln u|)^{-a}; a may be negative.
struct PowerLogSymKind {
  double p;
  double a;
  bool operator==(const PowerLogSymKind&) const = default;
};

struct LinearCapKind {
  bool operator==(const LinearCapKind&) const = default;
};

/// Convex piecewise-linear interpolant through (u[i], v[i]); u[0] = v[0] = 0.
struct TabulatedKind {
  std::vector<double> u;
  std::vector<double> v;
  double right_slope;  // may be +inf: jump to infinity after the last knot
  bool operator==(const TabulatedKind&) const = default;
};

class YoungFunction {
 public:
  using Kind = std::variant<PowerKind, PowerLogPlusKind, PowerLogSymKind, LinearCapKind, TabulatedKind>;

  static YoungFunction power(double p) {
    if (!(p >= 1) || !std::isfinite(p)) throw domain_error("power: p must be >= 1");
    return YoungFunction(PowerKind{p});
  }
  static YoungFunction powerlog_plus(double p, double a) {
    if (!(p > 1) || !std::isfinite(p)) throw domain_error("powerlog_plus: p must be > 1");
    if (!(a > 0) || !std::isfinite(a)) throw domain_error("powerlog_plus: a must be > 0");
    return YoungFunction(PowerLogPlusKind{p, a});
  }
  static YoungFunction powerlog_sym(double p, double a) {
    if (!(p > 1) || !std::isfinite(p)) throw domain_error("powerlog_sym: p must be > 1");
    if (!std::isfinite(a)) throw domain_error("powerlog_sym: a must be finite");
    return YoungFunction(PowerLogSymKind{p, a});
  }
  static YoungFunction linear_cap() { return YoungFunction(LinearCapKind{}); }

  /// Knots need not include the origin; it is prepended. The right slope defaults to the last segment's.
  static YoungFunction tabulated(std::vector<std::pair<double, double>> knots,
                                 std::optional<double> right_slope = std::nullopt) {
    TabulatedKind t;
    if (knots.empty()) throw domain_error("tabulated: no knots");
    if (knots.front().first != 0.0) {
      t.u.push_back(0.0);
      t.v.push_back(0.0);
    }
    for (auto [u, v] : knots) {
      if (!std::isfinite(u) || !std::isfinite(v) || u < 0 || v < 0) throw domain_error("tabulated: bad knot");
      if (!t.u.empty() && !(u > t.u.back())) throw domain_error("tabulated: knots must be strictly increasing");
      t.u.push_back(u);
      t.v.push_back(v);
    }
    if (t.v.front() != 0.0) throw domain_error("tabulated: value at 0 must be 0");
    if (t.u.size() < 2) throw domain_error("tabulated: need a positive knot");
    double prev = 0;
    for (std::size_t i = 0; i + 1 < t.u.size(); ++i) {
      const double s = (t.v[i + 1] - t.v[i]) / (t.u[i + 1] - t.u[i]);
      if (s < prev * (1 - 1e-12) - 1e-300) throw domain_error("tabulated: knots are not convex nondecreasing");
      prev = s;
    }
    t.right_slope = right_slope.value_or(prev);
    if (!(t.right_slope >= prev * (1 - 1e-12))) throw domain_error("tabulated: right slope below last segment");
    if (!(t.right_slope > 0)) throw domain_error("tabulated: function is identically zero");
    return YoungFunction(std::move(t));
  }

  const Kind& kind() const { return kind_; }

  std::string name() const {
    switch (kind_.index()) {
      case 0: return "power";
      case 1: return "powerlog_plus";
      case 2: return "powerlog_sym";
      case 3: return "linear_cap";
      default: return "tabulated";
    }
  }

  /// True when the inverse, not the function itself, is the analytic direction.
  bool forward_closed_form() const {
    return !std::holds_alternative<PowerLogPlusKind>(kind_) && !std::holds_alternative<PowerLogSymKind>(kind_);
  }

  /// Finite, continuous and strictly increasing.
  bool is_orlicz() const {
    if (std::holds_alternative<LinearCapKind>(kind_)) return false;
    if (const auto* t = std::get_if<TabulatedKind>(&kind_))
      return std::isfinite(t->right_slope) && t->v[1] > 0;
    return true;
  }

  bool operator==(const YoungFunction&) const = default;

 private:
  explicit YoungFunction(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

namespace detail {

struct PowerLogShape {
  double p;
  double a;
  bool plus;

  double raw(double x) const {
    if (plus) return x <= 0 ? x / p : x / p - a * std::log1p(x);
    return x / p - a * std::log1p(std::abs(x));
  }
  double raw_slope(double x) const {
    if (plus) return x <= 0 ? 1 / p : 1 / p - a / (1 + x);
    return 1 / p - a * (x < 0 ? -1 : 1) / (1 + std::abs(x));
  }
  /// Left end of the interval on which the raw inverse is not monotone.
  double x_m() const { return std::max(0.0, a * p - 1); }
  bool monotone() const { return a * p <= 1 && (plus || a * p >= -1); }

  /// Nondecreasing regularization: inf over w >= x of the raw log-inverse.
  double reg(double x) const {
    const double xm = x_m();
    if (x >= xm) return raw(x);
    return std::min(raw(x), raw(xm));
  }
  double reg_slope(double x) const {
    const double xm = x_m();
    if (x >= xm || raw(x) < raw(xm)) return raw_slope(x);
    return 0.0;
  }

  /// Where the regularized inverse starts its flat piece, if any.
  std::optional<double> flat_start() const {
    if (monotone()) return std::nullopt;
    const double xm = x_m();
    const double level = raw(xm);
    const double peak = (!plus && a < 0) ? 1 + a * p : 0.0;
    double lo = peak - 1;
    while (raw(lo) >= level) lo = peak - 2 * (peak - lo);
    auto [l, h] = bisect_predicate([&](double x) { return raw(x) < level; }, lo, peak, 1e-14);
    return 0.5 * (l + h);
  }
};

inline PowerLogShape shape_of(const YoungFunction& phi) {
  if (const auto* k = std::get_if<PowerLogPlusKind>(&phi.kind())) return {k->p, k->a, true};
  const auto& k = std::get<PowerLogSymKind>(phi.kind());
  return {k.p, k.a, false};
}

inline double tabulated_eval(const TabulatedKind& t, double u) {
  const std::size_t m = t.u.size() - 1;
  if (u >= t.u[m]) {
    if (u == t.u[m]) return t.v[m];
    return std::isinf(t.right_slope) ? kInf : t.v[m] + t.right_slope * (u - t.u[m]);
  }
  const auto it = std::upper_bound(t.u.begin(), t.u.end(), u);
  const std::size_t i = static_cast<std::size_t>(it - t.u.begin()) - 1;
  const double s = (t.v[i + 1] - t.v[i]) / (t.u[i + 1] - t.u[i]);
  return t.v[i] + s * (u - t.u[i]);
}

inline double tabulated_inverse(const TabulatedKind& t, double v) {
  const std::size_t m = t.u.size() - 1;
  const auto it = std::upper_bound(t.v.begin(), t.v.end(), v);
  if (it == t.v.end()) {
    if (std::isinf(v)) return kInf;
    return std::isinf(t.right_slope) ? t.u[m] : t.u[m] + (v - t.v[m]) / t.right_slope;
  }
  const std::size_t i = static_cast<std::size_t>(it - t.v.begin());
  const double s = (t.v[i] - t.v[i - 1]) / (t.u[i] - t.u[i - 1]);
  return t.u[i - 1] + (v - t.v[i - 1]) / s;
}

}  // namespace detail

/// ln Φ⁻¹(e^x). Works in the log domain so extreme arguments do not under- or overflow.
inline double log_inverse(const YoungFunction& phi, double x) {
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, PowerKind>) {
          return x / k.p;
        } else if constexpr (std::is_same_v<K, LinearCapKind>) {
          return 0.0;
        } else if constexpr (std::is_same_v<K, TabulatedKind>) {
          const double s0 = (k.v[1] - k.v[0]) / (k.u[1] - k.u[0]);
          if (s0 > 0 && x < std::log(k.v[1])) return x - std::log(s0);
          if (x > 700 && std::isfinite(k.right_slope)) return x - std::log(k.right_slope);
          return std::log(detail::tabulated_inverse(k, std::exp(x)));
        } else {
          return detail::shape_of(phi).reg(x);
        }
      },
      phi.kind());
}

/// Φ⁻¹(v) = inf{u >= 0 : Φ(u) > v}.
inline double inverse(const YoungFunction& phi, double v) {
  if (!(v >= 0)) throw domain_error("inverse: argument must be >= 0");
  if (std::isinf(v)) return kInf;
  if (const auto* t = std::get_if<TabulatedKind>(&phi.kind())) return detail::tabulated_inverse(*t, v);
  if (std::holds_alternative<LinearCapKind>(phi.kind())) return 1.0;
  if (v == 0) return 0.0;
  return std::exp(log_inverse(phi, std::log(v)));
}

/// Exponent of Φ⁻¹ near 0 (as v -> 0) and near infinity.
inline double inverse_exponent_at_zero(const YoungFunction& phi) {
  return std::visit(
      [](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, LinearCapKind>) return 0.0;
        else if constexpr (std::is_same_v<K, TabulatedKind>) return k.v[1] > 0 ? 1.0 : 0.0;
        else return 1.0 / k.p;
      },
      phi.kind());
}

inline double inverse_exponent_at_infinity(const YoungFunction& phi) {
  return std::visit(
      [](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, LinearCapKind>) return 0.0;
        else if constexpr (std::is_same_v<K, TabulatedKind>) return std::isfinite(k.right_slope) ? 1.0 : 0.0;
        else return 1.0 / k.p;
      },
      phi.kind());
}

/// Points (as ln v) where Φ⁻¹ is not smooth.
inline std::vector<double> inverse_breakpoints(const YoungFunction& phi) {
  std::vector<double> out;
  if (const auto* t = std::get_if<TabulatedKind>(&phi.kind())) {
    for (double v : t->v)
      if (v > 0) out.push_back(std::log(v));
  } else if (std::holds_alternative<PowerLogPlusKind>(phi.kind()) ||
             std::holds_alternative<PowerLogSymKind>(phi.kind())) {
    const auto sh = detail::shape_of(phi);
    out.push_back(0.0);
    if (sh.x_m() > 0) out.push_back(sh.x_m());
    if (auto xl = sh.flat_start()) out.push_back(*xl);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Φ(u). Left-continuous where the inverse has flat pieces.
inline double evaluate(const YoungFunction& phi, double u) {
  if (!(u >= 0)) throw domain_error("evaluate: argument must be >= 0");
  if (u == 0) return 0.0;
  if (std::isinf(u)) return kInf;
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, PowerKind>) {
          return std::pow(u, k.p);
        } else if constexpr (std::is_same_v<K, LinearCapKind>) {
          return u <= 1 ? 0.0 : kInf;
        } else if constexpr (std::is_same_v<K, TabulatedKind>) {
          return detail::tabulated_eval(k, u);
        } else {
          // sup{x : reg(x) < ln u}, bracketed around the pure power guess.
          const auto sh = detail::shape_of(phi);
          const double y = std::log(u);
          // a level equal to a flat piece up to rounding belongs to the left end
          const double ys = y - 8 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(y));
          double lo = sh.p * y - 1, hi = sh.p * y + 1;
          for (double w = 2; sh.reg(lo) >= ys; w *= 2) lo = sh.p * y - w;
          for (double w = 2; sh.reg(hi) < ys; w *= 2) hi = sh.p * y + w;
          auto [l, h] = newton_predicate([&](double x) { return sh.reg(x); }, [&](double x) { return sh.reg_slope(x); }, ys,
                                         lo, hi, sh.p * y, 1e-13);
          return std::exp(0.5 * (l + h));
        }
      },
      phi.kind());
}

/// sup over w of v·g(w) − w for a concave-ish g given by its log ln g(e^x), starting near x0.
template <class LogG>
double legendre_sup(LogG&& log_g, double v, double x0) {
  if (v == 0) return 0.0;
  const double lv = std::log(v);
  auto G = [&](double x) {
    const double a = lv + log_g(x);
    // v·g − w, scaled to avoid overflow at extreme arguments
    const double m = std::max(a, x);
    return std::exp(m) * (std::exp(a - m) - std::exp(x - m));
  };
  constexpr double step = 0.5, limit = 1400;
  double x = std::clamp(x0, -limit, limit), g = G(x);
  int dir = 0;
  if (G(x + step) > g)
    dir = 1;
  else if (G(x - step) > g)
    dir = -1;
  while (dir != 0) {
    const double gn = G(x + dir * step);
    if (!(gn > g)) break;
    x += dir * step;
    g = gn;
    if (x > limit) return kInf;
    if (x < -limit) return std::max(g, 0.0);
  }
  const auto e = golden_maximize(G, x - step, x + step, 1e-10);
  return std::max({e.value, g, 0.0});
}

/// Φ*(v) = sup_u [uv − Φ(u)].
inline double conjugate(const YoungFunction& phi, double v) {
  if (!(v >= 0)) throw domain_error("conjugate: argument must be >= 0");
  if (v == 0) return 0.0;
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, PowerKind>) {
          if (k.p == 1) return v <= 1 ? 0.0 : kInf;
          const double q = k.p / (k.p - 1);
          return (k.p - 1) * std::pow(k.p, -q) * std::pow(v, q);
        } else if constexpr (std::is_same_v<K, LinearCapKind>) {
          return v;
        } else if constexpr (std::is_same_v<K, TabulatedKind>) {
          if (v > k.right_slope) return kInf;
          double best = 0;
          for (std::size_t i = 0; i < k.u.size(); ++i) best = std::max(best, k.u[i] * v - k.v[i]);
          return best;
        } else {
          const double e = 1.0 / k.p;
          const double x0 = (std::log(v) + std::log(e)) / (1 - e);
          return legendre_sup([&](double x) { return log_inverse(phi, x); }, v, x0);
        }
      },
      phi.kind());
}

/// Inverse of the conjugate, inf{v : Φ*(v) > w}.
inline double conjugate_inverse(const YoungFunction& phi, double w) {
  if (!(w >= 0)) throw domain_error("conjugate_inverse: argument must be >= 0");
  if (const auto* k = std::get_if<PowerKind>(&phi.kind())) {
    if (k->p == 1) return 1.0;
    const double q = k->p / (k->p - 1);
    return std::pow(w / ((k->p - 1) * std::pow(k->p, -q)), 1 / q);
  }
  if (std::holds_alternative<LinearCapKind>(phi.kind())) return w;
  if (std::isinf(w)) return kInf;
  auto le = [&](double x) { return conjugate(phi, std::exp(x)) <= w; };
  double lo = 0, hi = 0;
  if (le(0)) {
    while (le(hi) && hi < 1400) hi += 4;
    lo = hi - 4;
    if (hi >= 1400) return kInf;
  } else {
    while (!le(lo) && lo > -1400) lo -= 4;
    if (lo <= -1400) return 0.0;
    hi = lo + 4;
  }
  auto [l, h] = bisect_predicate(le, lo, hi, 1e-13);
  return std::exp(0.5 * (l + h));
}

inline double fundamental_function(const YoungFunction& phi, double t) {
  if (!(t > 0)) throw domain_error("fundamental_function: t must be > 0");
  return 1.0 / inverse(phi, 1.0 / t);
}

/// Bounded/divergent verdict for one end of a sampled log-log curve. A fitted growth above tol
/// must persist over two consecutive chords reaching far_distance; slow convergence toward a limit fails that test.
template <class LogF>
bool end_diverges(LogF&& log_f, double x_end, double y_end, double fitted_growth, int direction, double tol,
                  double far_distance) {
  if (!(fitted_growth >= tol)) return false;
  const double h = far_distance / 2;
  double y_prev = y_end;
  for (int k = 1; k <= 2; ++k) {
    const double y = log_f(x_end + direction * k * h);
    if (std::isnan(y)) return false;
    if (std::isinf(y)) return y > 0;
    if ((y - y_prev) / h < tol) return false;
    y_prev = y;
  }
  return true;
}

inline constexpr double kFarProbe = 100 * kLn10;  // distance of the confirming probe, in ln units

struct SFunctionValue {
  double t;
  double value;
  std::optional<double> attained_s;
  bool divergent = false;
};

/// s(t) = sup_s Φ⁻¹(st)/Φ⁻¹(s).
inline SFunctionValue s_function(const YoungFunction& phi, double t, const NumericConfig& cfg = {}) {
  if (!(t > 0) || !std::isfinite(t)) throw domain_error("s_function: t must be positive and finite");
  if (t == 1) return {t, 1.0, 1.0, false};
  const double lt = std::log(t);
  auto R = [&](double x) { return log_inverse(phi, x + lt) - log_inverse(phi, x); };
  const auto xs = cfg.sup_grid.log_points();
  std::vector<double> ys(xs.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ys[i] = R(xs[i]);
    if (ys[i] > ys[best]) best = i;
  }
  double bx = xs[best], by = ys[best];
  const double h = xs[1] - xs[0];
  if (best > 0 && best + 1 < xs.size()) {
    const auto e = golden_maximize(R, xs[best] - h, xs[best] + h, 1e-12);
    if (e.value > by) bx = e.x, by = e.value;
  }
  for (double bp : inverse_breakpoints(phi)) {
    for (double x : {bp, bp - lt}) {
      const double y = R(x);
      if (y > by) bx = x, by = y;
    }
  }
  const auto g = end_growth(xs, ys, cfg.slope_decades);
  const bool div = end_diverges(R, xs.front(), ys.front(), g.growth_low, -1, cfg.slope_tol, kFarProbe) ||
                   end_diverges(R, xs.back(), ys.back(), g.growth_high, 1, cfg.slope_tol, kFarProbe);
  if (div) return {t, kInf, std::nullopt, true};
  return {t, std::exp(by), std::exp(bx), false};
}

struct Delta2Result {
  bool applicable = true;
  bool satisfied = false;
  std::optional<double> D2;
  double growth_low = 0;
  double growth_high = 0;
  std::string reason;
};

/// Δ₂ test for any nondecreasing f: sup of f(2u)/f(u) on the grid plus end-stability.
template <class F>
Delta2Result delta2_check_fn(F&& f, const NumericConfig& cfg = {}) {
  Delta2Result r;
  const auto xs = cfg.sup_grid.log_points();
  std::vector<double> ys(xs.size());
  auto log_ratio = [&](double x) {
    const double a = f(std::exp(x)), b = f(2 * std::exp(x));
    return std::log(b) - std::log(a);
  };
  double sup = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double u = std::exp(xs[i]);
    const double a = f(u), b = f(2 * u);
    if (!(a > 0) || !std::isfinite(a) || !std::isfinite(b)) {
      r.applicable = false;
      r.reason = !(a > 0) ? "function vanishes on the grid" : "function is infinite on the grid";
      return r;
    }
    ys[i] = std::log(b / a);
    sup = std::max(sup, b / a);
  }
  const auto g = end_growth(xs, ys, cfg.slope_decades);
  r.growth_low = g.growth_low;
  r.growth_high = g.growth_high;
  r.D2 = sup;
  const bool div = end_diverges(log_ratio, xs.front(), ys.front(), g.growth_low, -1, cfg.slope_tol, kFarProbe) ||
                   end_diverges(log_ratio, xs.back(), ys.back(), g.growth_high, 1, cfg.slope_tol, kFarProbe);
  r.satisfied = !div;
  if (div) r.reason = "ratio grows toward a grid end";
  return r;
}

inline Delta2Result delta2_check(const YoungFunction& phi, const NumericConfig& cfg = {}) {
  return delta2_check_fn([&](double u) { return evaluate(phi, u); }, cfg);
}

/// Δ₂ test applied to the conjugate function.
inline Delta2Result delta2_check_conjugate(const YoungFunction& phi, const NumericConfig& cfg = {}) {
  return delta2_check_fn([&](double v) { return conjugate(phi, v); }, cfg);
}

struct IndexResult {
  double beta;
  bool divergent = false;
};

/// Upper index of Φ⁻¹: slope of ln s(t) against ln t over the top decade of the grid.
inline IndexResult matuszewska_index(const YoungFunction& phi, const NumericConfig& cfg = {}) {
  const double hi = std::log(cfg.sup_grid.hi);
  std::vector<double> xs, ys;
  for (int i = 0; i <= 10; ++i) {
    const double x = hi - kLn10 * (1 - i / 10.0);
    const auto s = s_function(phi, std::exp(x), cfg);
    if (s.divergent) return {kInf, true};
    xs.push_back(x);
    ys.push_back(std::log(s.value));
  }
  return {least_squares_slope(xs, ys), false};
}

}  // namespace morlicz

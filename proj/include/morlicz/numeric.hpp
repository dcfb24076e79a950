#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace morlicz {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kLn10 = 2.302585092994045684;

/// Invalid parameters or a spec outside the supported domain.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iteration or quadrature that could not reach its tolerance.
class numeric_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Logarithmically spaced grid; `per_decade` may be fractional.
struct LogGrid {
  double lo = 1e-8;
  double hi = 1e8;
  double per_decade = 512;

  std::size_t size() const {
    const double decades = std::log10(hi / lo);
    return static_cast<std::size_t>(std::max(1.0, std::round(decades * per_decade))) + 1;
  }

  std::vector<double> log_points() const {
    const std::size_t m = size();
    const double a = std::log(lo), b = std::log(hi);
    std::vector<double> xs(m);
    for (std::size_t i = 0; i < m; ++i) xs[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(m - 1);
    return xs;
  }

  std::vector<double> points() const {
    auto xs = log_points();
    for (auto& x : xs) x = std::exp(x);
    xs.front() = lo;
    xs.back() = hi;
    return xs;
  }
};

struct NumericConfig {
  double bisection_tol = 1e-10;  // relative, outer norm bisection
  double inverse_tol = 1e-12;    // relative, forward Young function from its inverse
  double quad_tol = 1e-9;        // relative
  LogGrid r_grid{1e-6, 1e6, 64};
  LogGrid sup_grid{1e-8, 1e8, 512};
  LogGrid check_grid{1e-8, 1e8, 16};
  LogGrid check_grid_2d{1e-6, 1e6, 127.0 / 12.0};
  int refinement_rounds = 2;
  double slope_tol = 1e-3;
  double slope_decades = 2;
  std::optional<double> maximal_constant;       // strong maximal bound, default 3^n
  std::optional<double> weak_maximal_constant;  // weak maximal bound, default 3^n
};

inline double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

/// Shrinks [lo, hi] around the switch of a monotone predicate with pred(lo) true and pred(hi) false.
template <class Pred>
std::pair<double, double> bisect_predicate(Pred&& pred, double lo, double hi, double abs_tol, int max_iter = 400) {
  for (int i = 0; i < max_iter && hi - lo > abs_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid))
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

/// bisect_predicate for pred(x) = f(x) < y with f nondecreasing, taking Newton steps where df > 0.
template <class F, class DF>
std::pair<double, double> newton_predicate(F&& f, DF&& df, double y, double lo, double hi, double x, double abs_tol,
                                           int max_iter = 200) {
  for (int i = 0; i < max_iter && hi - lo > abs_tol; ++i) {
    const double fx = f(x);
    if (fx < y)
      lo = x;
    else
      hi = x;
    if (hi - lo <= abs_tol) break;
    const double d = df(x);
    double next = d > 0 ? x - (fx - y) / d : 0.5 * (lo + hi);
    // once converged, step just across the switch so the other end of the bracket closes in
    if (std::abs(next - x) < 0.5 * abs_tol) next = fx < y ? x + 0.5 * abs_tol : x - 0.5 * abs_tol;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return {lo, hi};
}

struct Extremum {
  double x;
  double value;
};

template <class F>
Extremum golden_maximize(F&& f, double a, double b, double tol, int max_iter = 200) {
  constexpr double g = 0.6180339887498949;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? Extremum{c, fc} : Extremum{d, fd};
}

inline double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t m = xs.size();
  if (m < 2 || ys.size() != m) throw std::invalid_argument("least_squares_slope: need two or more points");
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(m);
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(m);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

/// Log-log growth of a sampled function toward each end of its grid.
/// growth_low > 0 means the function increases as x decreases.
struct EndGrowth {
  double growth_low = 0;
  double growth_high = 0;
  bool bounded(double tol) const { return growth_low < tol && growth_high < tol; }
};

/// `log_x` and `log_y` are natural logs; the fit uses the outermost `decades` decades.
inline EndGrowth end_growth(const std::vector<double>& log_x, const std::vector<double>& log_y, double decades) {
  EndGrowth g;
  const std::size_t m = log_x.size();
  if (m < 3) return g;
  const double span = decades * kLn10;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < m && log_x[i] <= log_x.front() + span; ++i) {
    if (!std::isfinite(log_y[i])) continue;
    xs.push_back(log_x[i]);
    ys.push_back(log_y[i]);
  }
  if (xs.size() >= 2) g.growth_low = -least_squares_slope(xs, ys);
  xs.clear();
  ys.clear();
  for (std::size_t i = m; i-- > 0 && log_x[i] >= log_x.back() - span;) {
    if (!std::isfinite(log_y[i])) continue;
    xs.push_back(log_x[i]);
    ys.push_back(log_y[i]);
  }
  if (xs.size() >= 2) g.growth_high = least_squares_slope(xs, ys);
  return g;
}

struct Quadrature {
  double value;
  double error;
};

template <class F>
Quadrature integrate(F&& f, double a, double b, double rel_tol, unsigned max_depth = 18) {
  if (!(b > a)) return {0.0, 0.0};
  // Boost compares the unscaled panel error with a width-scaled tolerance, so narrow intervals
  // never terminate; integrating over [-1, 1] keeps both on the same scale.
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  auto g = [&](double s) { return f(mid + half * s) * half; };
  double err = 0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, -1.0, 1.0, max_depth, rel_tol, &err);
  return {v, err};
}

/// Integral over [a, b] split at interior breakpoints.
template <class F>
Quadrature integrate_pieces(F&& f, double a, double b, std::vector<double> breaks, double rel_tol) {
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  Quadrature total{0, 0};
  double prev = a;
  for (double x : breaks) {
    if (x <= prev) continue;
    if (x > b) break;
    const auto q = integrate(f, prev, x, rel_tol);
    total.value += q.value;
    total.error += q.error;
    prev = x;
  }
  return total;
}

struct TailQuadrature {
  double value;
  double remainder;
  bool converged;
};

/// Integrates a positive f over [x0, inf) panel by panel, stopping once the remainder
/// estimated from the local log-derivative drops below tol times the running sum.
/// The estimated remainder is included in `value`.
template <class F>
TailQuadrature integrate_tail(F&& f, double x0, double panel, double rel_tol, std::vector<double> breaks = {},
                              int max_panels = 20000) {
  std::sort(breaks.begin(), breaks.end());
  double sum = 0, x = x0;
  const double h = 1e-4 * panel;
  for (int k = 0; k < max_panels; ++k) {
    double b = x + panel;
    std::vector<double> inner;
    for (double bp : breaks)
      if (bp > x && bp < b) inner.push_back(bp);
    sum += integrate_pieces(f, x, b, inner, rel_tol * 1e-2).value;
    x = b;
    const double fx = f(x);
    if (!(fx > 0)) {
      bool later = false;
      for (double bp : breaks) later = later || bp > x;
      if (!later) return {sum, 0.0, true};
      continue;
    }
    const double fp = f(x + h), fm = f(x - h);
    if (!(fp > 0) || !(fm > 0)) continue;
    const double rate = (std::log(fp) - std::log(fm)) / (2 * h);
    if (rate < 0) {
      const double rem = fx / -rate;
      bool later = false;
      for (double bp : breaks) later = later || bp > x;
      if (!later && rem <= rel_tol * 1e-2 * sum) return {sum + rem, rem, true};
    }
  }
  return {sum, kInf, false};
}

}  // namespace morlicz

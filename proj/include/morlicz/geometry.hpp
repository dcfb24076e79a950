#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "numeric.hpp"

namespace morlicz {

class unsupported_geometry : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Ball {
  std::vector<double> center;
  double radius = 1;

  Ball() = default;
  Ball(std::vector<double> c, double r) : center(std::move(c)), radius(r) {
    if (center.empty()) throw domain_error("ball: dimension must be >= 1");
    if (!(radius > 0) || !std::isfinite(radius)) throw domain_error("ball: radius must be positive");
    for (double x : center)
      if (!std::isfinite(x)) throw domain_error("ball: center must be finite");
  }

  static Ball origin(int n, double r) { return Ball(std::vector<double>(static_cast<std::size_t>(n), 0.0), r); }
  /// Ball centered at (offset, 0, ..., 0).
  static Ball on_axis(int n, double offset, double r) {
    std::vector<double> c(static_cast<std::size_t>(n), 0.0);
    c[0] = offset;
    return Ball(std::move(c), r);
  }

  int dim() const { return static_cast<int>(center.size()); }
  double center_norm() const {
    double s = 0;
    for (double x : center) s += x * x;
    return std::sqrt(s);
  }
  bool at_origin() const { return center_norm() == 0; }
  bool operator==(const Ball&) const = default;
};

/// v_n = |B_1| in R^n, with v_0 = 1.
inline double unit_ball_volume(int n) {
  if (n < 0) throw domain_error("unit_ball_volume: negative dimension");
  return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1);
}

inline double ball_volume(int n, double r) {
  if (n < 1) throw domain_error("ball_volume: dimension must be >= 1");
  if (!(r >= 0)) throw domain_error("ball_volume: radius must be >= 0");
  return unit_ball_volume(n) * std::pow(r, n);
}

inline double ball_volume(const Ball& b) { return ball_volume(b.dim(), b.radius); }

inline double distance(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw domain_error("distance: dimension mismatch");
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s);
}

/// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
inline double incomplete_beta(double a, double b, double x) {
  if (!(a > 0) || !(b > 0)) throw domain_error("incomplete_beta: a, b must be positive");
  if (!(x >= 0 && x <= 1)) throw domain_error("incomplete_beta: x must lie in [0,1]");
  if (x == 0) return 0.0;
  if (x == 1) return 1.0;
  if (x > (a + 1) / (a + b + 2)) return 1.0 - incomplete_beta(b, a, 1 - x);
  const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta) / a;
  constexpr double tiny = 1e-300, eps = 1e-15;
  double f = 1, c = 1, d = 0;
  for (int i = 0; i <= 400; ++i) {
    const int m = i / 2;
    double num;
    if (i == 0)
      num = 1;
    else if (i % 2 == 0)
      num = (m * (b - m) * x) / ((a + 2.0 * m - 1) * (a + 2.0 * m));
    else
      num = -((a + m) * (a + b + m) * x) / ((a + 2.0 * m) * (a + 2.0 * m + 1));
    d = 1 + num * d;
    if (std::abs(d) < tiny) d = tiny;
    d = 1 / d;
    c = 1 + num / c;
    if (std::abs(c) < tiny) c = tiny;
    const double cd = c * d;
    f *= cd;
    if (std::abs(1 - cd) < eps) return front * (f - 1);
  }
  throw numeric_failure("incomplete_beta: continued fraction did not converge");
}

/// Volume of the cap of height h in an n-ball of radius r.
inline double cap_volume(int n, double r, double h) {
  if (h <= 0) return 0.0;
  if (h >= 2 * r) return ball_volume(n, r);
  if (h > r) return ball_volume(n, r) - cap_volume(n, r, 2 * r - h);
  const double x = h * (2 * r - h) / (r * r);
  return 0.5 * ball_volume(n, r) * incomplete_beta((n + 1) / 2.0, 0.5, x);
}

/// Volume of the intersection of two n-balls whose centers are d apart.
inline double lens_volume(int n, double r1, double r2, double d) {
  if (d >= r1 + r2) return 0.0;
  if (d <= std::abs(r1 - r2)) return ball_volume(n, std::min(r1, r2));
  if (r1 < r2) std::swap(r1, r2);
  // cap heights in factored form, exact for thin lenses
  const double s = r1 + r2 - d;
  const double h1 = s * (r2 - r1 + d) / (2 * d), h2 = s * (r1 - r2 + d) / (2 * d);
  return cap_volume(n, r1, h1) + cap_volume(n, r2, h2);
}

inline double intersection_volume(const Ball& a, const Ball& b) {
  if (a.dim() != b.dim()) throw domain_error("intersection_volume: dimension mismatch");
  const int n = a.dim();
  if (n > 3 && !(a.at_origin() && b.at_origin()))
    throw unsupported_geometry("intersection_volume: off-origin balls are supported only for n <= 3");
  return lens_volume(n, a.radius, b.radius, distance(a.center, b.center));
}

/// Fraction of the sphere |y - c| = s lying inside a ball of radius rho whose center is d away from c.
inline double sphere_fraction_inside(int n, double s, double d, double rho) {
  if (s <= 0) return d < rho ? 1.0 : 0.0;
  if (s + d <= rho) return 1.0;
  if (s >= d + rho || s <= d - rho) return 0.0;
  const double kappa = clamp_unit((s * s + d * d - rho * rho) / (2 * s * d));
  if (n == 1) return 0.5;
  const double half = 0.5 * incomplete_beta((n - 1) / 2.0, 0.5, std::max(0.0, 1 - kappa * kappa));
  return kappa >= 0 ? half : 1 - half;
}

}  // namespace morlicz

#pragma once

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "conditions.hpp"
#include "geometry.hpp"
#include "numeric.hpp"
#include "operators.hpp"
#include "orlicz.hpp"
#include "spaces.hpp"

namespace morlicz {

struct Bracket {
  double lower = 0;
  double upper = kInf;
  bool operator==(const Bracket&) const = default;
};

struct ProbeResult {
  std::string function_id;
  double source_norm = 0;
  Bracket target_strong, target_weak, ratio_strong, ratio_weak;
  double r_star = 0;  // radius of the best lower bound
  bool divergent = false;
  bool operator==(const ProbeResult&) const = default;
};

struct ProbeGrid {
  double cell_ratio = 1.03;    // growth of consecutive cell widths away from a breakpoint
  double min_cell = 1e-7;      // first cell width, relative to the segment
  double max_cell = 1.0 / 200;  // widest cell, relative to the segment
  double reach = 1e3;          // grid extends to reach × support extent
  double radii_per_decade = 16;
  double radius_split = 1e-3;  // split radius brackets that set the upper bound until r_{k+1}/r_k <= 1 + this
};

namespace detail {

/// Points of [a, b] graded geometrically toward both ends.
inline std::vector<double> graded_points(double a, double b, const ProbeGrid& g) {
  const double L = b - a;
  const double mid = a + L / 2;
  std::vector<double> left{a}, right{b};
  double w = g.min_cell * L;
  for (double x = a + w; x < mid; x += w) {
    left.push_back(x);
    w = std::min(w * g.cell_ratio, g.max_cell * L);
  }
  w = g.min_cell * L;
  for (double x = b - w; x > mid; x -= w) {
    right.push_back(x);
    w = std::min(w * g.cell_ratio, g.max_cell * L);
  }
  left.push_back(mid);
  left.insert(left.end(), right.rbegin(), right.rend());
  return left;
}

/// Majorant C(K|x|^{-γ} − T) of I_α f on the innermost cell |x| <= h of a singular radial power source (n = 1).
struct SingularCell {
  double C, K, gamma, T, h;

  double value(double x) const { return C * std::max(0.0, K * std::pow(x, -gamma) - T); }
  /// |x| at which the majorant drops to u
  double level_radius(double u) const { return std::pow(K / (u / C + T), 1 / gamma); }

  /// ∫_{|x|<min(r,h)} Ψ(g/ε)
  double strong_modular(const YoungFunction& psi, double r, double eps, const NumericConfig& cfg) const {
    const double m = std::min(r, h);
    if (std::isfinite(finite_range(psi))) return kInf;
    const double rate = 1 - gamma * growth_exponent(psi);
    if (!(rate > 0)) return kInf;
    auto g = [&](double y) { return evaluate(psi, value(m * std::exp(-y)) / eps) * std::exp(-y); };
    const auto q = integrate_tail(g, 0.0, std::clamp(2 / rate, 0.5, 40.0), cfg.quad_tol);
    if (!q.converged) return kInf;
    return 2 * m * (q.value + q.remainder);
  }

  /// sup_u Ψ(u/ε) |{|x| < min(r,h) : g > u}|
  double weak_modular(const YoungFunction& psi, double r, double eps) const {
    const double m = std::min(r, h);
    if (std::isfinite(finite_range(psi)) || gamma * growth_exponent(psi) > 1) return kInf;
    const double u0 = value(m);
    auto logw = [&](double lu) {
      const double u = std::exp(lu);
      return std::log(evaluate(psi, u / eps)) + std::log(2 * std::min(m, level_radius(u)));
    };
    const double x0 = std::log(u0);
    double best = logw(x0), bx = x0;
    for (double lu = x0; lu < x0 + 60; lu += 0.05)
      if (const double w = logw(lu); w > best) best = w, bx = lu;
    const auto e = golden_maximize(logw, std::max(x0, bx - 0.05), bx + 0.05, 1e-10);
    return std::exp(std::max(best, e.value));
  }
};

/// Piecewise-constant minorant and majorant of |I_α f| on cells, either along the line (n = 1) or on shells.
struct StepSandwich {
  bool radial;
  int n;
  std::vector<double> edges;  // cell i is [edges[i], edges[i+1]]
  std::vector<double> lower, upper;
  double extent;  // support lies in B_extent
  double reach;   // cells cover B_reach
  double mass;    // ‖f‖_1
  // when I_α f is unbounded at the origin, the innermost cell carries A|x|^{-γ} instead of a step
  std::optional<SingularCell> singular;

  double measure(std::size_t i, double r) const {
    const double a = edges[i], b = edges[i + 1];
    if (radial) {
      const double hi = std::min(b, r), lo = std::min(a, r);
      return hi > lo ? unit_ball_volume(n) * (std::pow(hi, n) - std::pow(lo, n)) : 0.0;
    }
    return std::max(0.0, std::min(b, r) - std::max(a, -r));
  }
};

inline double l1_mass(const TestFunction& f) {
  if (const auto* rp = std::get_if<RadialPower>(&f.variant()))
    return std::abs(rp->coef) * rp->n * unit_ball_volume(rp->n) * std::pow(rp->radius, rp->n - rp->beta) / (rp->n - rp->beta);
  double m = 0;
  for (const auto& a : f.atoms()) m += std::abs(a.value) * a.measure();
  return m;
}

inline StepSandwich sandwich(const TestFunction& f, const RieszParams& p, const NumericConfig& cfg, const ProbeGrid& g) {
  StepSandwich s;
  s.n = p.n;
  s.radial = f.is_radial();
  s.mass = l1_mass(f);
  const double tol = cfg.quad_tol * 1e-2;
  const auto* rp = std::get_if<RadialPower>(&f.variant());
  if (rp) {
    if (p.n > 1) throw unsupported_geometry("probe: radial power sources are supported only for n = 1");
    if (rp->beta < 0) throw unsupported_geometry("probe: radial power sources need beta >= 0");
  }
  if (!s.radial && p.n > 1) throw unsupported_geometry("probe: off-origin sources are supported only for n = 1");

  std::vector<double> special;
  std::vector<std::pair<double, Ball>> terms;
  if (rp) {
    special = {0.0, rp->radius};
    s.extent = rp->radius;
  } else {
    terms = f.terms();
    s.extent = 0;
    special.push_back(0.0);
    for (const auto& [c, b] : terms) {
      const double x = s.radial ? 0.0 : b.center[0];
      s.extent = std::max(s.extent, std::abs(x) + b.radius);
      for (double v : {x - b.radius, x, x + b.radius})
        if (!s.radial || v >= 0) special.push_back(v);
    }
  }
  s.reach = g.reach * s.extent;
  special.push_back(s.reach);
  if (!s.radial) special.push_back(-s.reach);
  std::sort(special.begin(), special.end());
  special.erase(std::unique(special.begin(), special.end()), special.end());
  for (std::size_t k = 0; k + 1 < special.size(); ++k) {
    auto pts = graded_points(special[k], special[k + 1], g);
    s.edges.insert(s.edges.end(), pts.begin(), pts.end() - 1);
  }
  s.edges.push_back(special.back());

  const std::size_t m = s.edges.size();
  auto at = [&](double x) {
    std::vector<double> pt(static_cast<std::size_t>(p.n), 0.0);
    pt[0] = x;
    return pt;
  };
  s.lower.resize(m - 1);
  s.upper.resize(m - 1);
  if (rp) {
    // symmetric decreasing in |x|, sign of the coefficient
    std::vector<double> v(m);
    for (std::size_t j = 0; j < m; ++j) v[j] = std::abs(riesz_eval(f, p, at(s.edges[j]), cfg));
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const bool right = s.edges[i] >= 0;
      s.lower[i] = right ? v[i + 1] : v[i];
      s.upper[i] = right ? v[i] : v[i + 1];
    }
    if (std::isinf(v[0])) {
      // I_α|y|^{-b} = K|x|^{α−b} with K = ∫_R |t|^{-b}|1−t|^{α−1} dt for b > α, minus the part
      // outside the support, which is at least 2(1 + h/ρ)^{α−1} ρ^{α−b}/(b − α) on |x| <= h.
      // The logarithmic case β = α uses |y|^{-β} ≤ ρ^{b−β}|y|^{-b} with b slightly above α.
      using boost::math::beta;
      const double a = p.alpha, rho = rp->radius, h = s.edges[1];
      const double b = rp->beta > a ? rp->beta : a + 0.01 * (1 - a);
      const double K = beta(1 - b, a) + beta(b - a, a) + beta(1 - b, b - a);
      const double T = 2 * std::pow(1 + h / rho, a - 1) * std::pow(rho, a - b) / (b - a);
      s.singular = SingularCell{std::abs(rp->coef) * std::pow(rho, b - rp->beta), K, b - a, T, h};
      s.upper[0] = 0;
    }
    return s;
  }
  // each term is unimodal about its center, which is a cell edge
  std::vector<std::vector<double>> tv(terms.size(), std::vector<double>(m));
  for (std::size_t k = 0; k < terms.size(); ++k)
    for (std::size_t j = 0; j < m; ++j) tv[k][j] = detail::riesz_ball(terms[k].second, p.alpha, at(s.edges[j]), tol);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    double lo = 0, hi = 0;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const double c = terms[k].first;
      const double a = tv[k][i], b = tv[k][i + 1];
      lo += c * (c > 0 ? std::min(a, b) : std::max(a, b));
      hi += c * (c > 0 ? std::max(a, b) : std::min(a, b));
    }
    s.lower[i] = lo > 0 ? lo : (hi < 0 ? -hi : 0.0);
    s.upper[i] = std::max(std::abs(lo), std::abs(hi));
  }
  return s;
}

struct Level {
  double value;
  double measure;
};

/// max_k v_k/Ψ⁻¹(N/M_k) over the level sets of a step function.
inline double weak_step_norm(std::vector<Level> lv, const YoungFunction& psi, double N) {
  std::sort(lv.begin(), lv.end(), [](const Level& a, const Level& b) { return a.value > b.value; });
  double cum = 0, best = 0;
  for (const auto& l : lv) {
    cum += l.measure;
    best = std::max(best, l.value / inverse(psi, N / cum));
  }
  return best;
}

/// Gauge of ε ↦ Σ Ψ(v/ε) m + extra(ε) against N; returns the side of the root requested.
template <class Extra>
double strong_step_norm(const std::vector<Level>& lv, const YoungFunction& psi, double N, bool upper_side,
                        Extra&& extra) {
  if (lv.empty()) return 0.0;
  auto F = [&](double x) {
    const double e = std::exp(x);
    double s = extra(e);
    for (const auto& l : lv) s += evaluate(psi, l.value / e) * l.measure;
    return std::log(s) - std::log(N);
  };
  double lo = std::log(weak_step_norm(lv, psi, N));
  double hi = lo + 1;
  double Flo = F(lo), Fhi = F(hi);
  while (Fhi > 0) {
    lo = hi;
    Flo = Fhi;
    hi += 4;
    Fhi = F(hi);
    if (hi > 700) return upper_side ? kInf : std::exp(lo);
  }
  if (!(Flo > 0)) return std::exp(lo);
  int side = 0;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    double x = hi - Fhi * (hi - lo) / (Fhi - Flo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double Fx = F(x);
    if (Fx > 0) {
      lo = x, Flo = Fx;
      if (side == -1) Fhi /= 2;
      side = -1;
    } else {
      hi = x, Fhi = Fx;
      if (side == 1) Flo /= 2;
      side = 1;
    }
  }
  return std::exp(upper_side ? hi : lo);
}

inline std::vector<Level> levels_of(const StepSandwich& s, const std::vector<double>& vals, double r) {
  std::vector<Level> out;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] <= 0) continue;
    const double m = s.measure(i, r);
    if (m > 0) out.push_back({vals[i], m});
  }
  return out;
}

inline double weak_step_modular(const std::vector<Level>& lv, const YoungFunction& psi, double eps) {
  std::vector<Level> sorted = lv;
  std::sort(sorted.begin(), sorted.end(), [](const Level& a, const Level& b) { return a.value > b.value; });
  double cum = 0, best = 0;
  for (const auto& l : sorted) {
    cum += l.measure;
    best = std::max(best, evaluate(psi, l.value / eps) * cum);
  }
  return best;
}

/// n v_n ∫_X^∞ Ψ(A (s − S)^{α−n}/ε) s^{n−1} ds, bounding the modular outside the grid.
inline double far_modular(const StepSandwich& s, const YoungFunction& psi, double alpha, double eps,
                          const NumericConfig& cfg) {
  if (s.mass == 0) return 0.0;
  const int n = s.n;
  const double e0 = inverse_exponent_at_zero(psi);
  const double rate = (n - alpha) / e0 - n;
  if (!(rate > 0)) return kInf;
  const double X = s.reach, S = s.extent;
  auto h = [&](double y) {
    const double r = X * std::exp(y);
    return evaluate(psi, s.mass * std::pow(r - S, alpha - n) / eps) * std::pow(r, n);
  };
  const auto q = integrate_tail(h, 0.0, std::clamp(2 / rate, 0.5, 40.0), cfg.quad_tol);
  if (!q.converged) return kInf;
  return n * unit_ball_volume(n) * (q.value + q.remainder);
}

}  // namespace detail

/// Two-sided bounds for ‖I_α f‖ in the central Morrey–Orlicz target and the ratio to ‖f‖ in the source.
inline ProbeResult empirical_ratio_probe(const ProblemSpec& problem, const TestFunction& f, const NumericConfig& cfg = {},
                                         std::string function_id = {}, bool homogeneous = true,
                                         const ProbeGrid& grid = {}) {
  problem.validate();
  if (f.dim() != problem.n) throw domain_error("probe: dimension mismatch");
  ProbeResult out;
  out.function_id = std::move(function_id);
  const SpaceSpec src(problem.phi, problem.lambda, problem.n, homogeneous);
  const auto sn = central_norm_detail(f, src, false, cfg);
  if (sn.value == 0) throw domain_error("probe: source norm is zero");
  out.source_norm = sn.value;
  out.divergent = sn.divergent;

  const RieszParams rp(problem.alpha, problem.n);
  const auto s = detail::sandwich(f, rp, cfg, grid);
  const YoungFunction& psi = problem.psi;
  const double mu = problem.mu;
  const int n = problem.n;
  auto norm_factor = [&](double r) { return std::pow(ball_volume(n, r), mu); };

  // candidate radii
  double rmin = kInf;
  for (double e : s.edges)
    if (std::abs(e) > 0) rmin = std::min(rmin, std::abs(e));
  std::vector<double> radii;
  const double lo = 1e-3 * std::max(rmin, 1e-12 * s.extent);
  const double r_floor = homogeneous ? 0.0 : 1.0;
  for (double r : LogGrid{lo, s.reach, grid.radii_per_decade}.points()) radii.push_back(r);
  for (const auto& [c, b] : f.is_radial_power() ? std::vector<std::pair<double, Ball>>{} : f.terms()) {
    const double x = b.center_norm();
    for (double v : {x - b.radius, x, x + b.radius})
      if (v > 0)
        for (double r : {v * (1 - 1e-9), v, v * (1 + 1e-9)}) radii.push_back(r);
  }
  if (const auto* p = std::get_if<RadialPower>(&f.variant())) radii.push_back(p->radius);
  if (!homogeneous) radii.push_back(1.0);
  radii.push_back(s.reach);
  std::erase_if(radii, [&](double r) { return r < r_floor || r > s.reach; });
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  if (radii.empty()) throw numeric_failure("probe: no admissible radii");

  auto none = [](double) { return 0.0; };
  double ls = 0, lw = 0, us = 0, uw = 0;
  auto lower_at = [&](double r) {
    const auto lv = detail::levels_of(s, s.lower, r);
    if (lv.empty()) return;
    const double N = norm_factor(r);
    const double st = detail::strong_step_norm(lv, psi, N, false, none);
    if (st > ls) ls = st, out.r_star = r;
    lw = std::max(lw, detail::weak_step_norm(lv, psi, N));
  };
  // upper bound on [a, b]: levels of the majorant on B_b against the normalization of B_a
  struct Span {
    double a, b, strong, weak;
  };
  // majorant modulars of the singular cell on B_r
  auto sing_strong = [&](double e, double r) { return s.singular ? s.singular->strong_modular(psi, r, e, cfg) : 0.0; };
  auto sing_weak = [&](double e, double r) { return s.singular ? s.singular->weak_modular(psi, r, e) : 0.0; };
  auto upper_norms = [&](double a, double b) -> std::pair<double, double> {
    const auto lv = detail::levels_of(s, s.upper, b);
    const double N = norm_factor(a);
    if (!s.singular) {
      if (lv.empty()) return {0.0, 0.0};
      return {detail::strong_step_norm(lv, psi, N, true, none), detail::weak_step_norm(lv, psi, N)};
    }
    auto strong = [&](double e) {
      double m = sing_strong(e, b);
      for (const auto& l : lv) m += detail::phi_times(psi, l.value / e, l.measure);
      return m / N;
    };
    auto weak = [&](double e) { return (detail::weak_step_modular(lv, psi, e) + sing_weak(e, b)) / N; };
    return {detail::gauge(strong, cfg.bisection_tol), detail::gauge(weak, cfg.bisection_tol)};
  };
  auto span = [&](double a, double b) {
    const auto [st, wk] = upper_norms(a, b);
    return Span{a, b, st, wk};
  };
  for (double r : radii) lower_at(r);
  // below the innermost radius a singular source is bounded by C K|x|^{-γ} cut there, whose central sup
  // sits on smaller radii; push the grid down until that bound no longer matters
  auto inner_bound = [&](double r0, bool weak) {
    const auto& sc = *s.singular;
    NumericConfig c = cfg;
    c.r_grid = LogGrid{r0 * 1e-6, r0 * 10, 16};
    return central_norm(TestFunction::radial_power(1, sc.gamma, r0, sc.C * sc.K), SpaceSpec(psi, mu, 1), weak, c);
  };
  if (s.singular && homogeneous) {
    for (int k = 0; k < 40 && inner_bound(radii.front(), false) > 1e-2 * ls; ++k) {
      auto more = LogGrid{radii.front() * 1e-4, radii.front(), grid.radii_per_decade}.points();
      more.pop_back();
      for (double r : more) lower_at(r);
      radii.insert(radii.begin(), more.begin(), more.end());
    }
  }
  // upper: every bracket [r_k, r_{k+1}], the initial ball, and the exterior of the grid
  {
    const double r0 = radii.front();
    double gmax = 0;
    for (std::size_t i = 0; i < s.upper.size(); ++i)
      if (s.measure(i, r0) > 0) gmax = std::max(gmax, s.upper[i]);
    if (!s.singular) {
      const double b0 = gmax / inverse(psi, std::pow(ball_volume(n, r0), mu - 1));
      if (homogeneous) us = uw = b0;
    } else if (homogeneous) {
      us = inner_bound(r0, false);
      uw = inner_bound(r0, true);
    }
  }
  std::vector<Span> spans;
  for (std::size_t k = 0; k + 1 < radii.size(); ++k) spans.push_back(span(radii[k], radii[k + 1]));
  // the coarse radius grid costs a factor (r_{k+1}/r_k)^{μ n/q}; split the spans that decide the bound
  for (int it = 0; it < 400 && !spans.empty(); ++it) {
    auto top_strong = std::max_element(spans.begin(), spans.end(), [](auto& x, auto& y) { return x.strong < y.strong; });
    auto top_weak = std::max_element(spans.begin(), spans.end(), [](auto& x, auto& y) { return x.weak < y.weak; });
    auto top = top_strong->b / top_strong->a > 1 + grid.radius_split ? top_strong : top_weak;
    if (top->b / top->a <= 1 + grid.radius_split) break;
    const double a = top->a, b = top->b, m = std::sqrt(a * b);
    lower_at(m);
    *top = span(a, m);
    spans.push_back(span(m, b));
  }
  for (const auto& sp : spans) {
    us = std::max(us, sp.strong);
    uw = std::max(uw, sp.weak);
  }
  {
    const auto lv = detail::levels_of(s, s.upper, s.reach);
    auto far = [&](double e) { return detail::far_modular(s, psi, problem.alpha, e, cfg) + sing_strong(e, s.reach); };
    const double t = detail::strong_step_norm(lv, psi, norm_factor(s.reach), true, far);
    us = std::max(us, t);
    uw = std::max(uw, t);
  }
  out.target_strong = {ls, us};
  out.target_weak = {lw, uw};
  out.ratio_strong = {ls / out.source_norm, us / out.source_norm};
  out.ratio_weak = {lw / out.source_norm, uw / out.source_norm};
  return out;
}

}  // namespace morlicz

#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "numeric.hpp"
#include "operators.hpp"
#include "orlicz.hpp"

namespace morlicz {

struct ProblemSpec {
  YoungFunction phi;
  YoungFunction psi;
  double lambda;
  double mu;
  double alpha;
  int n;

  /// Throws domain_error naming the offending field.
  void validate() const {
    if (n < 1) throw domain_error("n: dimension must be >= 1");
    if (!(alpha > 0 && alpha < n)) throw domain_error("alpha: must lie in (0, n)");
    if (!(lambda >= 0 && lambda < 1)) throw domain_error("lambda: must lie in [0, 1)");
    if (!(mu >= 0 && mu < 1)) throw domain_error("mu: must lie in [0, 1)");
    if (!phi.is_orlicz()) throw domain_error("phi: must be an Orlicz function (finite and strictly increasing)");
    if (!psi.is_orlicz()) throw domain_error("psi: must be an Orlicz function (finite and strictly increasing)");
  }

  /// Parameter range in which the sufficient conditions apply.
  bool sufficiency_domain() const {
    return (lambda > 0 && mu > 0 && lambda != mu) || (lambda == 0 && mu == 0);
  }

  bool operator==(const ProblemSpec&) const = default;
};

enum class ConditionId { NEC_A, NEC_B, UNBOUNDED_II, SUF_14, SUF_15, DELTA2_CONJ };
enum class Holds { holds, fails, inconclusive };
enum class Outcome { STRONG_BOUNDED, WEAK_BOUNDED, NOT_BOUNDED, INCONCLUSIVE };

inline const char* to_string(ConditionId id) {
  switch (id) {
    case ConditionId::NEC_A: return "NEC_A";
    case ConditionId::NEC_B: return "NEC_B";
    case ConditionId::UNBOUNDED_II: return "UNBOUNDED_II";
    case ConditionId::SUF_14: return "SUF_14";
    case ConditionId::SUF_15: return "SUF_15";
    default: return "DELTA2_CONJ";
  }
}

inline const char* to_string(Holds h) {
  switch (h) {
    case Holds::holds: return "holds";
    case Holds::fails: return "fails";
    default: return "inconclusive";
  }
}

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::STRONG_BOUNDED: return "STRONG_BOUNDED";
    case Outcome::WEAK_BOUNDED: return "WEAK_BOUNDED";
    case Outcome::NOT_BOUNDED: return "NOT_BOUNDED";
    default: return "INCONCLUSIVE";
  }
}

struct Witness {
  double u = 0;
  std::optional<double> r;
  std::string direction;  // "argmax", "u->0", "u->inf", "r->0", "r->inf", "t->inf", "integral"
  bool operator==(const Witness&) const = default;
};

struct GridSample {
  double u;
  std::optional<double> r;
  double ratio;
  bool operator==(const GridSample&) const = default;
};

struct ConditionReport {
  ConditionId id;
  Holds holds = Holds::inconclusive;
  std::optional<double> best_constant;
  Witness witness;
  std::string note;
  std::vector<GridSample> evidence;
  bool operator==(const ConditionReport&) const = default;
};

struct ConstantChain {
  double C0, c0, C3p, C3, C8, C9, C7, C6, c9, c7, c6;
  bool operator==(const ConstantChain&) const = default;
};

struct Verdict {
  Outcome outcome = Outcome::INCONCLUSIVE;
  std::vector<ConditionReport> reports;
  std::optional<double> constant_C6;
  std::optional<double> constant_c6;
  std::optional<ConstantChain> chain;
  bool operator==(const Verdict&) const = default;

  const ConditionReport& report(ConditionId id) const {
    for (const auto& r : reports)
      if (r.id == id) return r;
    throw std::out_of_range("verdict: no report for condition");
  }
};

namespace detail {

/// Sup of a log-ratio over a 1D log grid: refinement around the argmax and end classification.
struct LineScan {
  double best_x;
  double best_y;
  bool diverges_low;
  bool diverges_high;
  std::vector<double> xs, ys;
};

template <class LogRatio>
LineScan scan_line(LogRatio&& f, const LogGrid& grid, const NumericConfig& cfg, double far) {
  LineScan s;
  s.xs = grid.log_points();
  s.ys.resize(s.xs.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < s.xs.size(); ++i) {
    s.ys[i] = f(s.xs[i]);
    if (s.ys[i] > s.ys[best]) best = i;
  }
  s.best_x = s.xs[best];
  s.best_y = s.ys[best];
  if (best > 0 && best + 1 < s.xs.size()) {
    const auto e = golden_maximize(f, s.xs[best - 1], s.xs[best + 1], 1e-9);
    if (e.value > s.best_y) s.best_x = e.x, s.best_y = e.value;
  }
  const auto g = end_growth(s.xs, s.ys, cfg.slope_decades);
  s.diverges_low = end_diverges(f, s.xs.front(), s.ys.front(), g.growth_low, -1, cfg.slope_tol, far);
  s.diverges_high = end_diverges(f, s.xs.back(), s.ys.back(), g.growth_high, 1, cfg.slope_tol, far);
  return s;
}

inline void fill_line_report(ConditionReport& rep, const LineScan& s, const char* low, const char* high) {
  for (std::size_t i = 0; i < s.xs.size(); ++i) rep.evidence.push_back({std::exp(s.xs[i]), std::nullopt, std::exp(s.ys[i])});
  if (s.diverges_low || s.diverges_high || !std::isfinite(s.best_y)) {
    rep.holds = Holds::fails;
    if (s.diverges_low)
      rep.witness = {std::exp(s.xs.front()), std::nullopt, low};
    else if (s.diverges_high)
      rep.witness = {std::exp(s.xs.back()), std::nullopt, high};
    else
      rep.witness = {std::exp(s.best_x), std::nullopt, "argmax"};
    rep.note = "ratio unbounded";
    return;
  }
  rep.holds = Holds::holds;
  rep.best_constant = std::exp(s.best_y);
  rep.witness = {std::exp(s.best_x), std::nullopt, "argmax"};
}

inline constexpr double kConditionFar = 100 * kLn10;

}  // namespace detail

/// u^{α/n} Φ⁻¹(u^{λ−1}) <= C₁ Ψ⁻¹(u^{μ−1}).
inline ConditionReport check_necessary_a(const ProblemSpec& p, const NumericConfig& cfg = {}) {
  p.validate();
  ConditionReport rep;
  rep.id = ConditionId::NEC_A;
  auto f = [&](double x) {
    return p.alpha / p.n * x + log_inverse(p.phi, (p.lambda - 1) * x) - log_inverse(p.psi, (p.mu - 1) * x);
  };
  detail::fill_line_report(rep, detail::scan_line(f, cfg.check_grid, cfg, detail::kConditionFar), "u->0", "u->inf");
  return rep;
}

/// s_{Ψ⁻¹}(u^{μ−1}) <= C₂ u^{α/n} s_{Φ⁻¹}(u^{λ−1}).
inline ConditionReport check_necessary_b(const ProblemSpec& p, const NumericConfig& cfg = {}) {
  p.validate();
  ConditionReport rep;
  rep.id = ConditionId::NEC_B;
  bool diverged = false;
  auto f = [&](double x) {
    const auto sp = s_function(p.psi, std::exp((p.mu - 1) * x), cfg);
    const auto sf = s_function(p.phi, std::exp((p.lambda - 1) * x), cfg);
    if (sp.divergent || sf.divergent) {
      diverged = true;
      return sp.divergent ? kInf : -kInf;
    }
    return std::log(sp.value) - p.alpha / p.n * x - std::log(sf.value);
  };
  const auto s = detail::scan_line(f, cfg.check_grid, cfg, 30 * kLn10);
  detail::fill_line_report(rep, s, "u->0", "u->inf");
  if (diverged && rep.holds == Holds::holds) {
    rep.holds = Holds::inconclusive;
    rep.best_constant.reset();
    rep.note = "s-function divergent on the grid";
  }
  return rep;
}

/// liminf_{t→∞} Φ⁻¹(c t^λ)/Ψ⁻¹(t^μ) = ∞.
inline ConditionReport check_unbounded(const ProblemSpec& p, const NumericConfig& cfg = {},
                                       std::optional<double> c_override = std::nullopt) {
  p.validate();
  ConditionReport rep;
  rep.id = ConditionId::UNBOUNDED_II;
  if (p.mu == 0) {
    rep.holds = Holds::inconclusive;
    rep.note = "mu = 0: the admissible constant is undefined";
    return rep;
  }
  const double c =
      c_override.value_or(std::min(1.0, std::pow(unit_ball_volume(p.n), p.lambda / p.mu) / unit_ball_volume(p.n - 1)));
  if (!(c > 0)) throw domain_error("unbounded: constant c must be positive");
  auto f = [&](double x) { return log_inverse(p.phi, std::log(c) + p.lambda * x) - log_inverse(p.psi, p.mu * x); };
  LogGrid g{1.0, cfg.check_grid.hi, cfg.check_grid.per_decade};
  const auto xs = g.log_points();
  std::vector<double> ys;
  for (double x : xs) {
    ys.push_back(f(x));
    rep.evidence.push_back({std::exp(x), std::nullopt, std::exp(ys.back())});
  }
  const auto eg = end_growth(xs, ys, cfg.slope_decades);
  bool monotone = true;
  const double top = xs.back() - cfg.slope_decades * kLn10;
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] >= top && ys[i] < ys[i - 1]) monotone = false;
  const bool grows = end_diverges(f, xs.back(), ys.back(), eg.growth_high, 1, cfg.slope_tol, detail::kConditionFar);
  rep.witness = {std::exp(xs.back()), std::nullopt, "t->inf"};
  if (grows && monotone) {
    rep.holds = Holds::holds;
    rep.note = "ratio grows with log-log slope " + std::to_string(eg.growth_high);
  } else {
    rep.holds = Holds::fails;
    rep.note = "ratio does not grow toward t->inf";
  }
  return rep;
}

/// ∫_u^∞ t^{α/n} Φ⁻¹(t^{λ−1}) dt/t <= C₄ Ψ⁻¹(u^{μ−1}).
inline ConditionReport check_sufficient_14(const ProblemSpec& p, const NumericConfig& cfg = {}) {
  p.validate();
  ConditionReport rep;
  rep.id = ConditionId::SUF_14;
  const auto probe = tail_integral(p.phi, p.lambda, p.alpha, p.n, 1.0, cfg);
  if (!probe.convergent) {
    rep.holds = Holds::fails;
    rep.witness = {1.0, std::nullopt, "integral"};
    rep.note = "tail integral diverges";
    return rep;
  }
  auto f = [&](double x) {
    const auto t = tail_integral(p.phi, p.lambda, p.alpha, p.n, std::exp(x), cfg);
    if (!t.convergent) return kInf;
    return t.log_value - log_inverse(p.psi, (p.mu - 1) * x);
  };
  detail::fill_line_report(rep, detail::scan_line(f, cfg.check_grid, cfg, detail::kConditionFar), "u->0", "u->inf");
  return rep;
}

/// ∫_u^∞ t^{α/n} Φ⁻¹(r^λ/t) dt/t <= C₅ Ψ⁻¹(r^μ/u) for all u, r.
inline ConditionReport check_sufficient_15(const ProblemSpec& p, const NumericConfig& cfg = {}) {
  p.validate();
  ConditionReport rep;
  rep.id = ConditionId::SUF_15;
  if ((p.lambda == p.mu && p.lambda > 0) || (p.lambda == 0 && p.mu > 0)) {
    rep.holds = Holds::fails;
    rep.witness = {1.0, 1.0, "r->inf"};
    rep.note = p.lambda == p.mu ? "lambda = mu > 0 excludes the estimate" : "lambda = 0 < mu excludes the estimate";
    return rep;
  }
  const auto probe = scaled_tail_integral(p.phi, p.lambda, p.alpha, p.n, 1.0, 1.0, cfg);
  if (!probe.convergent) {
    rep.holds = Holds::fails;
    rep.witness = {1.0, 1.0, "integral"};
    rep.note = "tail integral diverges";
    return rep;
  }
  auto F = [&](double xu, double xr) {
    const auto t = scaled_tail_integral(p.phi, p.lambda, p.alpha, p.n, std::exp(xu), std::exp(xr), cfg);
    if (!t.convergent) return kInf;
    return t.log_value - log_inverse(p.psi, p.mu * xr - xu);
  };
  const auto ax = cfg.check_grid_2d.log_points();
  const std::size_t m = ax.size();
  std::vector<std::vector<double>> Z(m, std::vector<double>(m));
  std::size_t bi = 0, bj = 0;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) {
      Z[j][i] = F(ax[i], ax[j]);
      if (Z[j][i] > Z[bj][bi]) bi = i, bj = j;
    }
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t arg = 0;
    for (std::size_t j = 0; j < m; ++j)
      if (Z[j][i] > Z[arg][i]) arg = j;
    rep.evidence.push_back({std::exp(ax[i]), std::exp(ax[arg]), std::exp(Z[arg][i])});
  }
  // divergence along rows (u varies) and columns (r varies)
  const double far = detail::kConditionFar;
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<double> row(m), col(m);
    for (std::size_t l = 0; l < m; ++l) {
      row[l] = Z[k][l];
      col[l] = Z[l][k];
    }
    const auto gr = end_growth(ax, row, cfg.slope_decades);
    const auto gc = end_growth(ax, col, cfg.slope_decades);
    const double xr = ax[k], xu = ax[k];
    auto along_u = [&](double x) { return F(x, xr); };
    auto along_r = [&](double x) { return F(xu, x); };
    const struct {
      bool hit;
      double u, r;
      const char* dir;
    } cases[] = {
        {end_diverges(along_u, ax.front(), row.front(), gr.growth_low, -1, cfg.slope_tol, far), ax.front(), xr, "u->0"},
        {end_diverges(along_u, ax.back(), row.back(), gr.growth_high, 1, cfg.slope_tol, far), ax.back(), xr, "u->inf"},
        {end_diverges(along_r, ax.front(), col.front(), gc.growth_low, -1, cfg.slope_tol, far), xu, ax.front(), "r->0"},
        {end_diverges(along_r, ax.back(), col.back(), gc.growth_high, 1, cfg.slope_tol, far), xu, ax.back(), "r->inf"},
    };
    for (const auto& c : cases) {
      if (c.hit) {
        rep.holds = Holds::fails;
        rep.witness = {std::exp(c.u), std::exp(c.r), c.dir};
        rep.note = "ratio unbounded";
        return rep;
      }
    }
  }
  double bu = ax[bi], br = ax[bj], by = Z[bj][bi];
  const double h = ax[1] - ax[0];
  for (int round = 0; round < std::max(1, cfg.refinement_rounds); ++round) {
    const auto eu = golden_maximize([&](double x) { return F(x, br); }, bu - h, bu + h, 1e-9);
    if (eu.value > by) bu = eu.x, by = eu.value;
    const auto er = golden_maximize([&](double x) { return F(bu, x); }, br - h, br + h, 1e-9);
    if (er.value > by) br = er.x, by = er.value;
  }
  rep.holds = Holds::holds;
  rep.best_constant = std::exp(by);
  rep.witness = {std::exp(bu), std::exp(br), "argmax"};
  return rep;
}

/// Φ* ∈ Δ₂, by the numeric conjugate or by the upper index of Φ⁻¹.
inline ConditionReport delta2_conjugate(const ProblemSpec& p, const NumericConfig& cfg = {}) {
  p.validate();
  ConditionReport rep;
  rep.id = ConditionId::DELTA2_CONJ;
  const auto d = delta2_check_conjugate(p.phi, cfg);
  const auto idx = matuszewska_index(p.phi, cfg);
  const bool index_ok = !idx.divergent && idx.beta < 1 - cfg.slope_tol;
  std::string note = "numeric: ";
  note += d.applicable ? (d.satisfied ? "satisfied" : "not satisfied") : ("not applicable (" + d.reason + ")");
  note += "; index beta(inverse) = " + std::to_string(idx.beta);
  if (index_ok) note += ", beta(conjugate) = " + std::to_string(1 / (1 - idx.beta));
  rep.note = note;
  if (d.satisfied || index_ok) {
    rep.holds = Holds::holds;
    if (d.D2) rep.best_constant = *d.D2;
    else rep.best_constant = std::pow(2.0, 1 / (1 - idx.beta));
    rep.witness = {cfg.sup_grid.hi, std::nullopt, "argmax"};
  } else {
    rep.holds = Holds::fails;
    rep.witness = {d.growth_high >= d.growth_low ? cfg.sup_grid.hi : cfg.sup_grid.lo, std::nullopt,
                   d.growth_high >= d.growth_low ? "u->inf" : "u->0"};
  }
  return rep;
}

/// Explicit constant chain for given C₄, C₅ (clamped to >= 1 as the sufficient conditions require).
inline ConstantChain constant_chain(const ProblemSpec& p, double C4, double C5, const NumericConfig& cfg = {}) {
  const int n = p.n;
  const double a = p.alpha;
  C4 = std::max(1.0, C4);
  C5 = std::max(1.0, C5);
  ConstantChain k{};
  k.C0 = cfg.maximal_constant.value_or(std::pow(3.0, n));
  k.c0 = cfg.weak_maximal_constant.value_or(std::pow(3.0, n));
  k.C3p = std::pow(2.0, n - a + 1) * std::pow(unit_ball_volume(n), 1 - a / n);
  k.C3 = std::pow(2.0, a) / (n * std::log(2.0)) * k.C3p;
  k.C8 = std::pow(2.0, a) / (std::pow(2.0, a) - 1) * k.C3p;
  k.C9 = 2 * C5 * std::max(2 / std::log(2.0) * k.C0 * k.C8, k.C3);
  k.C7 = std::pow(2.0, n * (p.mu - p.lambda)) * k.C9;
  k.C6 = 2 * std::max(k.C7, std::pow(2.0, n - a) * k.C3 * C4);
  k.c9 = 2 * C5 * std::max(2 / std::log(2.0) * k.c0 * k.C8, k.C3);
  k.c7 = std::pow(2.0, n * (p.mu - p.lambda) + 1) * k.c9;
  k.c6 = 2 * std::max(k.c7, std::pow(2.0, n - a + 1) * k.C3 * C4);
  return k;
}

inline Verdict verdict(const ProblemSpec& p, const NumericConfig& cfg = {}) {
  p.validate();
  auto run = [&](auto fn) { return std::async(std::launch::async, fn); };
  auto fa = run([&] { return check_necessary_a(p, cfg); });
  auto fb = run([&] { return check_necessary_b(p, cfg); });
  auto fu = run([&] { return check_unbounded(p, cfg); });
  auto f14 = run([&] { return check_sufficient_14(p, cfg); });
  auto f15 = run([&] { return check_sufficient_15(p, cfg); });
  auto fd = run([&] { return delta2_conjugate(p, cfg); });
  Verdict v;
  v.reports = {fa.get(), fb.get(), fu.get(), f14.get(), f15.get(), fd.get()};
  const auto& a = v.reports[0];
  const auto& b = v.reports[1];
  const auto& u = v.reports[2];
  const auto& s14 = v.reports[3];
  const auto& s15 = v.reports[4];
  const auto& d2 = v.reports[5];
  const bool suff = s14.holds == Holds::holds && s15.holds == Holds::holds && p.sufficiency_domain();
  if (a.holds == Holds::fails || b.holds == Holds::fails || u.holds == Holds::holds)
    v.outcome = Outcome::NOT_BOUNDED;
  else if (suff && d2.holds == Holds::holds)
    v.outcome = Outcome::STRONG_BOUNDED;
  else if (suff)
    v.outcome = Outcome::WEAK_BOUNDED;
  else
    v.outcome = Outcome::INCONCLUSIVE;
  if (v.outcome == Outcome::STRONG_BOUNDED || v.outcome == Outcome::WEAK_BOUNDED) {
    v.chain = constant_chain(p, *s14.best_constant, *s15.best_constant, cfg);
    v.constant_c6 = v.chain->c6;
    if (v.outcome == Outcome::STRONG_BOUNDED) v.constant_C6 = v.chain->C6;
  }
  return v;
}

}  // namespace morlicz

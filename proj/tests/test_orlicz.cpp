#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gen.hpp"
#include "morlicz/orlicz.hpp"

using namespace morlicz;

namespace {

const double e = std::numbers::e;

/// Independent Legendre oracle: dense log-grid scan of w ↦ v·w − Φ(w) plus golden refinement.
double conjugate_oracle(const YoungFunction& phi, double v) {
  auto h = [&](double x) {
    const double w = std::exp(x);
    return v * w - evaluate(phi, w);
  };
  double bx = -20, by = h(bx);
  for (double x = -20; x <= 20; x += 0.01)
    if (const double y = h(x); y > by) bx = x, by = y;
  return std::max(0.0, golden_maximize(h, bx - 0.01, bx + 0.01, 1e-13).value);
}

double biconjugate(const YoungFunction& phi, double u) {
  auto h = [&](double x) {
    const double v = std::exp(x);
    return u * v - conjugate(phi, v);
  };
  double bx = -25, by = h(bx);
  for (double x = -25; x <= 25; x += 0.02)
    if (const double y = h(x); y > by) bx = x, by = y;
  return std::max(0.0, golden_maximize(h, bx - 0.02, bx + 0.02, 1e-13).value);
}

// exactly convex
std::vector<YoungFunction> young_kinds() {
  return {YoungFunction::power(1.5), YoungFunction::power(2), YoungFunction::power(3.5),
          YoungFunction::powerlog_plus(2, 0.2), YoungFunction::powerlog_plus(3, 0.1),
          YoungFunction::powerlog_sym(2, 0.2), YoungFunction::powerlog_sym(4, 0.1),
          YoungFunction::tabulated({{1, 0.5}, {2, 2}, {4, 8}}, 5.0)};
}

// only equivalent to Young functions: kinks or dips in the inverse
std::vector<YoungFunction> equivalent_kinds() {
  return {YoungFunction::powerlog_plus(2, 0.5), YoungFunction::powerlog_plus(2, 1),
          YoungFunction::powerlog_sym(2, 0.5), YoungFunction::powerlog_sym(4, -0.2)};
}

}  // namespace

TEST(Evaluate, ClosedForms) {
  EXPECT_DOUBLE_EQ(evaluate(YoungFunction::power(2), 3), 9);
  for (const auto& phi : young_kinds()) EXPECT_EQ(evaluate(phi, 0), 0);
  EXPECT_EQ(evaluate(YoungFunction::linear_cap(), 0.5), 0);
  EXPECT_TRUE(std::isinf(evaluate(YoungFunction::linear_cap(), 1.5)));
  EXPECT_THROW(evaluate(YoungFunction::power(2), -1), domain_error);
}

TEST(Evaluate, PowerLogPlusJumpPoint) {
  // the inverse u^{1/2}/(1+ln u) dips below its value at e on [1, e], so Φ jumps at √e/2
  const auto phi = YoungFunction::powerlog_plus(2, 1);
  const double u0 = std::sqrt(e) / 2;
  // the right limit is approached like a square root since the inverse is flat at e
  EXPECT_NEAR(evaluate(phi, u0 * (1 + 1e-14)), e, 1e-5);
  EXPECT_GT(evaluate(phi, u0 * (1 + 1e-14)), e);
  EXPECT_NEAR(evaluate(phi, u0), e / 4, 1e-9);
  EXPECT_NEAR(inverse(phi, e), u0, 1e-14);
}

TEST(Inverse, ClosedForms) {
  EXPECT_DOUBLE_EQ(inverse(YoungFunction::power(2), 4), 2);
  EXPECT_EQ(inverse(YoungFunction::linear_cap(), 0.5), 1);
  EXPECT_EQ(inverse(YoungFunction::power(2), 0), 0);
  EXPECT_THROW(inverse(YoungFunction::power(2), -1), domain_error);
}

TEST(Factories, RejectBadParameters) {
  EXPECT_THROW(YoungFunction::power(0.5), domain_error);
  EXPECT_THROW(YoungFunction::powerlog_plus(1, 0.5), domain_error);
  EXPECT_THROW(YoungFunction::powerlog_plus(2, 0), domain_error);
  EXPECT_THROW(YoungFunction::powerlog_sym(2, std::nan("")), domain_error);
  EXPECT_THROW(YoungFunction::tabulated({{1, 2}, {2, 2.5}}), domain_error);  // concave
  EXPECT_THROW(YoungFunction::tabulated({{1, 1}, {1, 2}}), domain_error);
  EXPECT_FALSE(YoungFunction::linear_cap().is_orlicz());
  EXPECT_FALSE(YoungFunction::tabulated({{1, 1}}, kInf).is_orlicz());
}

TEST(Conjugate, ClosedFormsAndOracle) {
  EXPECT_DOUBLE_EQ(conjugate(YoungFunction::power(2), 2), 1);
  EXPECT_EQ(conjugate(YoungFunction::power(1), 0.5), 0);
  EXPECT_TRUE(std::isinf(conjugate(YoungFunction::power(1), 2)));
  const double p = 3, pp = p / (p - 1);
  EXPECT_NEAR(conjugate(YoungFunction::power(3), 1), (p - 1) * std::pow(p, -pp), 1e-14);
  EXPECT_NEAR(conjugate_oracle(YoungFunction::power(3), 1), (p - 1) * std::pow(p, -pp), 1e-8);
  auto kinds = young_kinds();
  for (const auto& phi : equivalent_kinds()) kinds.push_back(phi);
  for (const auto& phi : kinds)
    for (double v : {0.05, 0.7, 1.0, 3.0})
      EXPECT_NEAR(conjugate(phi, v), conjugate_oracle(phi, v), 1e-8 * std::max(1.0, conjugate_oracle(phi, v)))
          << phi.name() << " v=" << v;
}

TEST(SFunction, ClosedForms) {
  for (double p : {1.5, 2.0, 4.0})
    for (double t : {1e-3, 0.3, 7.0, 1e4}) EXPECT_NEAR(s_function(YoungFunction::power(p), t).value, std::pow(t, 1 / p), 1e-12 * std::pow(t, 1 / p));
  const double p = 2, a = 0.5;
  EXPECT_NEAR(s_function(YoungFunction::powerlog_sym(p, a), 0.1).value, std::pow(0.1, 1 / p) * std::pow(1 + std::log(10.0), a), 1e-9);
  for (double t : {0.01, 0.2, 0.9})
    EXPECT_NEAR(s_function(YoungFunction::powerlog_plus(p, a), t).value, std::pow(t, 1 / p) * std::pow(1 - std::log(t), a), 1e-9);
  EXPECT_EQ(s_function(YoungFunction::powerlog_sym(3, 1), 1.0).value, 1.0);
}

TEST(Delta2, PowerAndExponential) {
  const auto d = delta2_check(YoungFunction::power(2));
  EXPECT_TRUE(d.satisfied);
  EXPECT_NEAR(*d.D2, 4, 1e-12);
  std::vector<std::pair<double, double>> knots;
  for (int k = 1; k <= 60; ++k) knots.push_back({0.5 * k, std::expm1(0.5 * k)});
  EXPECT_FALSE(delta2_check(YoungFunction::tabulated(knots, kInf)).satisfied);
  EXPECT_TRUE(delta2_check_conjugate(YoungFunction::powerlog_plus(2, 0.5)).satisfied);
  const auto c = delta2_check_conjugate(YoungFunction::power(3));
  EXPECT_NEAR(*c.D2, std::pow(2.0, 1.5), 1e-9);
}

TEST(Index, PowerAndPowerLog) {
  EXPECT_NEAR(matuszewska_index(YoungFunction::power(2)).beta, 0.5, 1e-9);
  for (double p : {2.0, 3.0}) {
    const double b = matuszewska_index(YoungFunction::powerlog_plus(p, 0.5)).beta;
    EXPECT_NEAR(b, 1 / p, 0.05 / p);
    EXPECT_NEAR(1 / (1 - b), p / (p - 1), 0.05 * p / (p - 1));
  }
}

TEST(Fundamental, ClosedForms) {
  EXPECT_NEAR(fundamental_function(YoungFunction::power(3), 8), 2, 1e-14);
  for (double a : {0.3, 0.5})
    for (double t : {0.01, 0.5, 1.0})
      EXPECT_NEAR(fundamental_function(YoungFunction::powerlog_plus(2, a), t), std::sqrt(t) * std::pow(1 + std::log(1 / t), a), 1e-12);
  // with a·p > 1 the inverse is monotone only past e^{a·p−1}
  const double a = 0.7, tm = std::exp(-(2 * a - 1));
  for (double t : {0.01, 0.5 * tm})
    EXPECT_NEAR(fundamental_function(YoungFunction::powerlog_plus(2, a), t), std::sqrt(t) * std::pow(1 + std::log(1 / t), a), 1e-12);
  EXPECT_NEAR(fundamental_function(YoungFunction::powerlog_plus(2, a), 1), fundamental_function(YoungFunction::powerlog_plus(2, a), tm), 1e-12);
}

// ---- properties over generated Young functions

TEST(Properties, MonotoneAndInverseConsistent) {
  gen::Gen g(11);
  for (int c = 0; c < 60; ++c) {
    const auto phi = g.orlicz();
    double prev = 0;
    for (double u : LogGrid{1e-4, 1e4, 8}.points()) {
      const double f = evaluate(phi, u);
      EXPECT_GE(f, prev * (1 - 1e-12)) << phi.name();
      prev = f;
      const double v = g.log_uniform(1e-4, 1e4);
      EXPECT_LE(evaluate(phi, inverse(phi, v)), v * (1 + 1e-9)) << phi.name();
      EXPECT_LE(u, inverse(phi, f) * (1 + 1e-9)) << phi.name();
    }
  }
}

TEST(Properties, MidpointConvex) {
  gen::Gen g(15);
  for (int c = 0; c < 60; ++c) {
    const auto phi = g.young();
    for (int k = 0; k < 40; ++k) {
      const double a = g.log_uniform(1e-3, 1e3), b = g.log_uniform(1e-3, 1e3);
      const double mid = evaluate(phi, 0.5 * (a + b));
      EXPECT_LE(mid, 0.5 * (evaluate(phi, a) + evaluate(phi, b)) * (1 + 1e-9)) << phi.name() << " " << a << " " << b;
    }
  }
}

TEST(Properties, DerivativeSandwich) {
  gen::Gen g(12);
  for (int c = 0; c < 40; ++c) {
    const auto phi = g.young();
    for (int k = 0; k < 30; ++k) {
      const double u = g.log_uniform(1e-3, 1e3), h = 1e-7 * u;
      const double d = (evaluate(phi, u + h) - evaluate(phi, u)) / h;
      EXPECT_LE(evaluate(phi, u), u * d * (1 + 1e-5)) << phi.name() << " u=" << u;
      EXPECT_LE(u * d, evaluate(phi, 2 * u) * (1 + 1e-5)) << phi.name() << " u=" << u;
    }
  }
}

TEST(Properties, ConjugateInverseProduct) {
  for (const auto& phi : young_kinds()) {
    for (double u : LogGrid{1e-8, 1e8, 2}.points()) {
      const double prod = inverse(phi, u) * conjugate_inverse(phi, u);
      EXPECT_LE(u, prod * (1 + 1e-9)) << phi.name() << " u=" << u;
      EXPECT_LE(prod, 2 * u * (1 + 1e-9)) << phi.name() << " u=" << u;
    }
  }
}

TEST(Properties, YoungInequality) {
  gen::Gen g(13);
  for (int c = 0; c < 40; ++c) {
    const auto phi = g.orlicz();
    for (int k = 0; k < 25; ++k) {
      const double u = g.log_uniform(1e-3, 1e3), v = g.log_uniform(1e-3, 1e3);
      EXPECT_LE(u * v, (evaluate(phi, u) + conjugate(phi, v)) * (1 + 1e-9)) << phi.name();
    }
  }
}

TEST(Properties, DoubleConjugate) {
  for (const auto& phi : young_kinds()) {
    for (double u : LogGrid{1e-2, 1e2, 2}.points()) {
      const double f = evaluate(phi, u);
      EXPECT_LE(std::abs(biconjugate(phi, u) - f) / std::max(1.0, f), 1e-6) << phi.name() << " u=" << u;
    }
  }
}

TEST(Properties, SFunctionSubmultiplicative) {
  gen::Gen g(14);
  NumericConfig cfg;
  cfg.sup_grid.per_decade = 64;
  for (int c = 0; c < 10; ++c) {
    const auto phi = g.orlicz();
    for (int k = 0; k < 6; ++k) {
      const double t1 = g.log_uniform(1e-3, 1e3), t2 = g.log_uniform(1e-3, 1e3);
      const auto s12 = s_function(phi, t1 * t2, cfg), s1 = s_function(phi, t1, cfg), s2 = s_function(phi, t2, cfg);
      if (s1.divergent || s2.divergent) continue;
      EXPECT_LE(s12.value, s1.value * s2.value * (1 + 1e-6)) << phi.name();
    }
  }
}

TEST(Properties, ConjugateConvexNondecreasing) {
  for (const auto& phi : young_kinds()) {
    const auto vs = LogGrid{1e-3, 1e3, 16}.points();
    std::vector<double> cs;
    for (double v : vs) cs.push_back(conjugate(phi, v));
    for (std::size_t i = 1; i < cs.size(); ++i) EXPECT_GE(cs[i], cs[i - 1]) << phi.name();
    for (std::size_t i = 1; i + 1 < cs.size(); ++i) {
      if (std::isinf(cs[i + 1])) break;
      // convexity on a nonuniform grid: the middle point lies below the chord
      const double w = (vs[i] - vs[i - 1]) / (vs[i + 1] - vs[i - 1]);
      EXPECT_LE(cs[i], (1 - w) * cs[i - 1] + w * cs[i + 1] + 1e-9 * std::max(1.0, cs[i])) << phi.name();
    }
  }
}

TEST(Properties, SFunctionDominatesSampledRatios) {
  gen::Gen g(16);
  for (int c = 0; c < 30; ++c) {
    const auto phi = g.orlicz();
    EXPECT_NEAR(s_function(phi, 1.0).value, 1.0, 1e-12) << phi.name();
    const double t = g.log_uniform(1e-3, 1e3);
    const auto s = s_function(phi, t);
    if (s.divergent) continue;
    for (int k = 0; k < 50; ++k) {
      const double u = g.log_uniform(1e-8, 1e8);
      EXPECT_GE(s.value * (1 + 1e-9), inverse(phi, t * u) / inverse(phi, u)) << phi.name() << " t=" << t << " s=" << u;
    }
  }
}

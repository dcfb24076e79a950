#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "morlicz/orlicz.hpp"
#include "morlicz/spaces.hpp"

namespace gen {

/// Seeded source for property tests; every case is reproducible from (seed, index).
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  morlicz::YoungFunction orlicz() {
    switch (integer(0, 3)) {
      case 0: return morlicz::YoungFunction::power(uniform(1.1, 5));
      case 1: return morlicz::YoungFunction::powerlog_plus(uniform(1.2, 5), uniform(0.1, 1.5));
      case 2: return morlicz::YoungFunction::powerlog_sym(uniform(1.2, 5), uniform(0, 1.5));
      default: return tabulated();
    }
  }

  /// Kinds whose inverse is concave everywhere, so Φ is a Young function and not only equivalent to one.
  morlicz::YoungFunction young() {
    const double p = uniform(1.2, 5), q = 1 / p;
    const double cap_plus = std::sqrt(1 - q) - (1 - q);
    switch (integer(0, 3)) {
      case 0: return morlicz::YoungFunction::power(uniform(1, 5));
      case 1: return morlicz::YoungFunction::powerlog_plus(p, uniform(0.01, 1) * cap_plus);
      case 2: return morlicz::YoungFunction::powerlog_sym(p, uniform(0, 1) * std::min(cap_plus, std::sqrt(q) - q));
      default: return tabulated();
    }
  }

  morlicz::YoungFunction tabulated() {
    std::vector<std::pair<double, double>> knots;
    double u = 0, v = 0, slope = uniform(0.1, 1);
    for (int i = 0; i < integer(2, 6); ++i) {
      const double du = uniform(0.2, 2);
      u += du;
      v += slope * du;
      knots.push_back({u, v});
      slope *= uniform(1.0, 3.0);
    }
    return morlicz::YoungFunction::tabulated(knots, slope);
  }

  /// Nested or disjoint origin/axis balls in dimension n.
  morlicz::TestFunction combo(int n) {
    const double r1 = log_uniform(0.1, 10);
    const double r2 = r1 * uniform(1.2, 4);
    std::vector<std::pair<double, morlicz::Ball>> terms{{uniform(0.5, 3), morlicz::Ball::origin(n, r1)},
                                                        {uniform(-0.5, 2), morlicz::Ball::origin(n, r2)}};
    if (n == 1) terms.push_back({uniform(0.2, 2), morlicz::Ball({r2 + uniform(1, 5)}, uniform(0.1, 1))});
    return morlicz::TestFunction::linear_combo(terms);
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace gen

#pragma once

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "conditions.hpp"
#include "probe.hpp"
#include "spaces.hpp"

namespace morlicz {

inline constexpr const char* kVersion = "0.1.0";

using json = nlohmann::json;

class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
  config_error(const std::string& path, const std::string& what) : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct Probe {
  std::string id;
  TestFunction f;
  bool operator==(const Probe&) const = default;
};

struct Scenario {
  std::string name;
  ProblemSpec problem{YoungFunction::power(2), YoungFunction::power(2), 0, 0, 0.5, 1};
  std::vector<Probe> probes;
  NumericConfig cfg;
  bool homogeneous = true;
};

struct Provenance {
  std::string config_hash;
  std::string version;
  NumericConfig cfg;
};

struct Report {
  std::string name;
  Verdict verdict;
  std::vector<ProbeResult> probes;
  Provenance provenance;
};

namespace io {

inline json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline json opt(const std::optional<double>& x) { return x ? num(*x) : json(nullptr); }

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

inline const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw config_error(path.empty() ? "<root>" : path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw config_error(join(path, key), "missing field");
  return *it;
}

inline double as_num(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::nan("");
  }
  throw config_error(path, "expected a number");
}

inline double get_num(const json& j, const std::string& key, const std::string& path) {
  return as_num(field(j, key, path), join(path, key));
}

inline double num_or(const json& j, const std::string& key, const std::string& path, double fallback) {
  return j.contains(key) ? get_num(j, key, path) : fallback;
}

inline std::optional<double> get_opt(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_num(j, key, path);
}

inline int get_int(const json& j, const std::string& key, const std::string& path) {
  const auto& v = field(j, key, path);
  if (!v.is_number_integer()) throw config_error(join(path, key), "expected an integer");
  return v.get<int>();
}

inline std::string get_str(const json& j, const std::string& key, const std::string& path) {
  const auto& v = field(j, key, path);
  if (!v.is_string()) throw config_error(join(path, key), "expected a string");
  return v.get<std::string>();
}

/// Runs a factory, reporting domain violations against the given path.
template <class F>
auto at_path(const std::string& path, F&& make) {
  try {
    return make();
  } catch (const domain_error& e) {
    throw config_error(path, e.what());
  }
}

inline std::vector<double> get_vec(const json& j, const std::string& path) {
  if (!j.is_array()) throw config_error(path, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_num(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace io

// ---- YoungFunction

inline json to_json(const YoungFunction& f) {
  json j{{"kind", f.name()}};
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, PowerKind>) {
          j["p"] = io::num(k.p);
        } else if constexpr (std::is_same_v<K, PowerLogPlusKind> || std::is_same_v<K, PowerLogSymKind>) {
          j["p"] = io::num(k.p);
          j["a"] = io::num(k.a);
        } else if constexpr (std::is_same_v<K, TabulatedKind>) {
          json knots = json::array();
          for (std::size_t i = 1; i < k.u.size(); ++i) knots.push_back(json::array({io::num(k.u[i]), io::num(k.v[i])}));
          j["knots"] = knots;
          j["right_slope"] = io::num(k.right_slope);
        }
      },
      f.kind());
  return j;
}

inline YoungFunction young_from_json(const json& j, const std::string& path) {
  const auto kind = io::get_str(j, "kind", path);
  return io::at_path(path, [&] {
    if (kind == "power") return YoungFunction::power(io::get_num(j, "p", path));
    if (kind == "powerlog_plus") return YoungFunction::powerlog_plus(io::get_num(j, "p", path), io::get_num(j, "a", path));
    if (kind == "powerlog_sym") return YoungFunction::powerlog_sym(io::get_num(j, "p", path), io::get_num(j, "a", path));
    if (kind == "linear_cap") return YoungFunction::linear_cap();
    if (kind == "tabulated") {
      const auto& ks = io::field(j, "knots", path);
      if (!ks.is_array()) throw config_error(io::join(path, "knots"), "expected an array of [u, v] pairs");
      std::vector<std::pair<double, double>> knots;
      for (std::size_t i = 0; i < ks.size(); ++i) {
        const auto v = io::get_vec(ks[i], path + ".knots[" + std::to_string(i) + "]");
        if (v.size() != 2) throw config_error(path + ".knots[" + std::to_string(i) + "]", "expected [u, v]");
        knots.push_back({v[0], v[1]});
      }
      return YoungFunction::tabulated(std::move(knots), io::get_opt(j, "right_slope", path));
    }
    throw config_error(io::join(path, "kind"), "unknown Young function kind '" + kind + "'");
  });
}

// ---- TestFunction

inline json to_json(const Ball& b) {
  json c = json::array();
  for (double x : b.center) c.push_back(io::num(x));
  return {{"center", c}, {"radius", io::num(b.radius)}};
}

inline Ball ball_from_json(const json& j, const std::string& path) {
  auto c = io::get_vec(io::field(j, "center", path), io::join(path, "center"));
  const double r = io::get_num(j, "radius", path);
  return io::at_path(path, [&] { return Ball(std::move(c), r); });
}

inline json to_json(const TestFunction& f) {
  json j{{"variant", f.variant_name()}};
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Indicator>) {
          j.update(to_json(k.ball));
        } else if constexpr (std::is_same_v<K, RadialPower>) {
          j["n"] = k.n;
          j["beta"] = io::num(k.beta);
          j["radius"] = io::num(k.radius);
          j["coef"] = io::num(k.coef);
        } else if constexpr (std::is_same_v<K, LinearCombo>) {
          json ts = json::array();
          for (const auto& [c, b] : k.terms) {
            json t = to_json(b);
            t["coef"] = io::num(c);
            ts.push_back(t);
          }
          j["terms"] = ts;
        } else {
          j["p"] = io::num(k.p);
          j["terms"] = k.terms;
          j["dilation"] = io::num(k.dilation);
        }
      },
      f.variant());
  return j;
}

inline TestFunction test_function_from_json(const json& j, const std::string& path) {
  const auto kind = io::get_str(j, "variant", path);
  if (kind == "indicator") {
    auto b = ball_from_json(j, path);
    return TestFunction::indicator(std::move(b));
  }
  if (kind == "radial_power") {
    const int n = io::get_int(j, "n", path);
    const double beta = io::get_num(j, "beta", path), radius = io::get_num(j, "radius", path);
    const double coef = io::num_or(j, "coef", path, 1.0);
    return io::at_path(path, [&] { return TestFunction::radial_power(n, beta, radius, coef); });
  }
  if (kind == "linear_combo") {
    const auto& ts = io::field(j, "terms", path);
    if (!ts.is_array()) throw config_error(io::join(path, "terms"), "expected an array");
    std::vector<std::pair<double, Ball>> terms;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const std::string p = path + ".terms[" + std::to_string(i) + "]";
      terms.push_back({io::get_num(ts[i], "coef", p), ball_from_json(ts[i], p)});
    }
    return io::at_path(path, [&] { return TestFunction::linear_combo(std::move(terms)); });
  }
  if (kind == "dyadic_tower") {
    const double p = io::get_num(j, "p", path);
    const int k = io::get_int(j, "terms", path);
    const double a = io::num_or(j, "dilation", path, 1.0);
    return io::at_path(path, [&] { return TestFunction::dyadic_tower(p, k, a); });
  }
  throw config_error(io::join(path, "variant"), "unknown test function variant '" + kind + "'");
}

// ---- ProblemSpec, NumericConfig

inline json to_json(const ProblemSpec& p) {
  return {{"phi", to_json(p.phi)}, {"psi", to_json(p.psi)}, {"lambda", io::num(p.lambda)},
          {"mu", io::num(p.mu)},   {"alpha", io::num(p.alpha)}, {"n", p.n}};
}

inline ProblemSpec problem_from_json(const json& j, const std::string& path) {
  ProblemSpec p{young_from_json(io::field(j, "phi", path), io::join(path, "phi")),
                young_from_json(io::field(j, "psi", path), io::join(path, "psi")),
                io::get_num(j, "lambda", path),
                io::get_num(j, "mu", path),
                io::get_num(j, "alpha", path),
                io::get_int(j, "n", path)};
  if (p.n < 1) throw config_error(io::join(path, "n"), "dimension must be >= 1");
  if (!(p.alpha > 0 && p.alpha < p.n)) throw config_error(io::join(path, "alpha"), "must lie in (0, n)");
  if (!(p.lambda >= 0 && p.lambda < 1)) throw config_error(io::join(path, "lambda"), "must lie in [0, 1)");
  if (!(p.mu >= 0 && p.mu < 1)) throw config_error(io::join(path, "mu"), "must lie in [0, 1)");
  if (!p.phi.is_orlicz()) throw config_error(io::join(path, "phi"), "must be an Orlicz function (finite, strictly increasing)");
  if (!p.psi.is_orlicz()) throw config_error(io::join(path, "psi"), "must be an Orlicz function (finite, strictly increasing)");
  return p;
}

inline json to_json(const LogGrid& g) { return {{"lo", io::num(g.lo)}, {"hi", io::num(g.hi)}, {"per_decade", io::num(g.per_decade)}}; }

inline LogGrid grid_from_json(const json& j, const std::string& path, LogGrid g) {
  g.lo = io::num_or(j, "lo", path, g.lo);
  g.hi = io::num_or(j, "hi", path, g.hi);
  g.per_decade = io::num_or(j, "per_decade", path, g.per_decade);
  if (!(g.lo > 0 && g.hi > g.lo && std::isfinite(g.hi))) throw config_error(path, "grid needs 0 < lo < hi < inf");
  if (!(g.per_decade > 0)) throw config_error(io::join(path, "per_decade"), "must be positive");
  return g;
}

inline json to_json(const NumericConfig& c) {
  return {{"bisection_tol", io::num(c.bisection_tol)},
          {"inverse_tol", io::num(c.inverse_tol)},
          {"quad_tol", io::num(c.quad_tol)},
          {"r_grid", to_json(c.r_grid)},
          {"sup_grid", to_json(c.sup_grid)},
          {"check_grid", to_json(c.check_grid)},
          {"check_grid_2d", to_json(c.check_grid_2d)},
          {"refinement_rounds", c.refinement_rounds},
          {"slope_tol", io::num(c.slope_tol)},
          {"slope_decades", io::num(c.slope_decades)},
          {"maximal_constant", io::opt(c.maximal_constant)},
          {"weak_maximal_constant", io::opt(c.weak_maximal_constant)}};
}

inline NumericConfig numeric_from_json(const json& j, const std::string& path) {
  NumericConfig c;
  if (!j.is_object()) throw config_error(path, "expected an object");
  auto positive = [&](const char* key, double& dst) {
    dst = io::num_or(j, key, path, dst);
    if (!(dst > 0)) throw config_error(io::join(path, key), "must be positive");
  };
  positive("bisection_tol", c.bisection_tol);
  positive("inverse_tol", c.inverse_tol);
  positive("quad_tol", c.quad_tol);
  positive("slope_tol", c.slope_tol);
  positive("slope_decades", c.slope_decades);
  for (auto [key, g] : {std::pair{"r_grid", &c.r_grid}, {"sup_grid", &c.sup_grid}, {"check_grid", &c.check_grid},
                        {"check_grid_2d", &c.check_grid_2d}})
    if (j.contains(key)) *g = grid_from_json(j.at(key), io::join(path, key), *g);
  if (j.contains("refinement_rounds")) {
    c.refinement_rounds = io::get_int(j, "refinement_rounds", path);
    if (c.refinement_rounds < 0) throw config_error(io::join(path, "refinement_rounds"), "must be >= 0");
  }
  c.maximal_constant = io::get_opt(j, "maximal_constant", path);
  c.weak_maximal_constant = io::get_opt(j, "weak_maximal_constant", path);
  for (const char* key : {"maximal_constant", "weak_maximal_constant"})
    if (auto v = io::get_opt(j, key, path); v && !(*v >= 1)) throw config_error(io::join(path, key), "must be >= 1");
  return c;
}

// ---- Verdict

inline json to_json(const ConditionReport& r) {
  json ev = json::array();
  for (const auto& s : r.evidence) ev.push_back({{"u", io::num(s.u)}, {"r", io::opt(s.r)}, {"ratio", io::num(s.ratio)}});
  return {{"condition_id", to_string(r.id)},
          {"holds", to_string(r.holds)},
          {"best_constant", io::opt(r.best_constant)},
          {"witness", {{"u", io::num(r.witness.u)}, {"r", io::opt(r.witness.r)}, {"direction", r.witness.direction}}},
          {"note", r.note},
          {"evidence", ev}};
}

template <class E, std::size_t N>
E enum_from(const std::string& s, const E (&all)[N], const std::string& path) {
  for (E e : all)
    if (s == to_string(e)) return e;
  throw config_error(path, "unknown value '" + s + "'");
}

inline ConditionReport condition_from_json(const json& j, const std::string& path) {
  static constexpr ConditionId ids[] = {ConditionId::NEC_A,  ConditionId::NEC_B,  ConditionId::UNBOUNDED_II,
                                        ConditionId::SUF_14, ConditionId::SUF_15, ConditionId::DELTA2_CONJ};
  static constexpr Holds hs[] = {Holds::holds, Holds::fails, Holds::inconclusive};
  ConditionReport r;
  r.id = enum_from(io::get_str(j, "condition_id", path), ids, io::join(path, "condition_id"));
  r.holds = enum_from(io::get_str(j, "holds", path), hs, io::join(path, "holds"));
  r.best_constant = io::get_opt(j, "best_constant", path);
  const auto& w = io::field(j, "witness", path);
  const std::string wp = io::join(path, "witness");
  r.witness = {io::get_num(w, "u", wp), io::get_opt(w, "r", wp), io::get_str(w, "direction", wp)};
  r.note = io::get_str(j, "note", path);
  const auto& ev = io::field(j, "evidence", path);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const std::string p = path + ".evidence[" + std::to_string(i) + "]";
    r.evidence.push_back({io::get_num(ev[i], "u", p), io::get_opt(ev[i], "r", p), io::get_num(ev[i], "ratio", p)});
  }
  return r;
}

inline json to_json(const ConstantChain& k) {
  return {{"C0", io::num(k.C0)}, {"c0", io::num(k.c0)}, {"C3_prime", io::num(k.C3p)}, {"C3", io::num(k.C3)},
          {"C8", io::num(k.C8)}, {"C9", io::num(k.C9)}, {"C7", io::num(k.C7)},        {"C6", io::num(k.C6)},
          {"c9", io::num(k.c9)}, {"c7", io::num(k.c7)}, {"c6", io::num(k.c6)}};
}

inline ConstantChain chain_from_json(const json& j, const std::string& path) {
  auto g = [&](const char* k) { return io::get_num(j, k, path); };
  return {g("C0"), g("c0"), g("C3_prime"), g("C3"), g("C8"), g("C9"), g("C7"), g("C6"), g("c9"), g("c7"), g("c6")};
}

inline json to_json(const Verdict& v) {
  json reps = json::array();
  for (const auto& r : v.reports) reps.push_back(to_json(r));
  return {{"outcome", to_string(v.outcome)},
          {"reports", reps},
          {"constant_C6", io::opt(v.constant_C6)},
          {"constant_c6", io::opt(v.constant_c6)},
          {"constant_chain", v.chain ? to_json(*v.chain) : json(nullptr)}};
}

inline Verdict verdict_from_json(const json& j, const std::string& path) {
  static constexpr Outcome os[] = {Outcome::STRONG_BOUNDED, Outcome::WEAK_BOUNDED, Outcome::NOT_BOUNDED,
                                   Outcome::INCONCLUSIVE};
  Verdict v;
  v.outcome = enum_from(io::get_str(j, "outcome", path), os, io::join(path, "outcome"));
  const auto& reps = io::field(j, "reports", path);
  for (std::size_t i = 0; i < reps.size(); ++i)
    v.reports.push_back(condition_from_json(reps[i], path + ".reports[" + std::to_string(i) + "]"));
  v.constant_C6 = io::get_opt(j, "constant_C6", path);
  v.constant_c6 = io::get_opt(j, "constant_c6", path);
  if (j.contains("constant_chain") && !j.at("constant_chain").is_null())
    v.chain = chain_from_json(j.at("constant_chain"), io::join(path, "constant_chain"));
  return v;
}

// ---- Scenario and Report

inline json to_json(const Scenario& s) {
  json probes = json::array();
  for (const auto& p : s.probes) {
    json f = to_json(p.f);
    f["id"] = p.id;
    probes.push_back(f);
  }
  return {{"name", s.name},
          {"problem", to_json(s.problem)},
          {"probes", probes},
          {"numeric", to_json(s.cfg)},
          {"homogeneous", s.homogeneous}};
}

Scenario preset(const std::string& name);

inline Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw config_error("<root>", "expected an object");
  Scenario s;
  const bool from_preset = j.contains("preset");
  if (from_preset) {
    const auto name = io::get_str(j, "preset", "");
    try {
      s = preset(name);
    } catch (const domain_error& e) {
      throw config_error("preset", e.what());
    }
  }
  if (j.contains("name")) s.name = io::get_str(j, "name", "");
  else if (!from_preset) throw config_error("name", "missing field");
  if (j.contains("problem")) s.problem = problem_from_json(j.at("problem"), "problem");
  else if (!from_preset) throw config_error("problem", "missing field");
  if (j.contains("numeric")) s.cfg = numeric_from_json(j.at("numeric"), "numeric");
  if (j.contains("homogeneous")) {
    if (!j.at("homogeneous").is_boolean()) throw config_error("homogeneous", "expected a boolean");
    s.homogeneous = j.at("homogeneous").get<bool>();
  }
  if (j.contains("probes")) {
    const auto& ps = j.at("probes");
    if (!ps.is_array()) throw config_error("probes", "expected an array");
    s.probes.clear();
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string path = "probes[" + std::to_string(i) + "]";
      auto f = test_function_from_json(ps[i], path);
      if (f.dim() != s.problem.n) throw config_error(path, "dimension does not match problem.n");
      std::string id = ps[i].contains("id") ? io::get_str(ps[i], "id", path) : "p" + std::to_string(i) + "_" + f.variant_name();
      s.probes.push_back({std::move(id), std::move(f)});
    }
  }
  return s;
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string config_hash(const Scenario& s) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(to_json(s).dump()));
  return buf;
}

inline json to_json(const ProbeResult& p) {
  auto br = [](const Bracket& b) { return json{{"lower", io::num(b.lower)}, {"upper", io::num(b.upper)}}; };
  return {{"function_id", p.function_id},         {"source_norm", io::num(p.source_norm)},
          {"target_strong", br(p.target_strong)}, {"target_weak", br(p.target_weak)},
          {"ratio_strong", br(p.ratio_strong)},   {"ratio_weak", br(p.ratio_weak)},
          {"r_star", io::num(p.r_star)},          {"divergent", p.divergent}};
}

inline ProbeResult probe_result_from_json(const json& j, const std::string& path) {
  auto br = [&](const char* k) {
    const auto& b = io::field(j, k, path);
    const std::string p = io::join(path, k);
    return Bracket{io::get_num(b, "lower", p), io::get_num(b, "upper", p)};
  };
  ProbeResult r;
  r.function_id = io::get_str(j, "function_id", path);
  r.source_norm = io::get_num(j, "source_norm", path);
  r.target_strong = br("target_strong");
  r.target_weak = br("target_weak");
  r.ratio_strong = br("ratio_strong");
  r.ratio_weak = br("ratio_weak");
  r.r_star = io::get_num(j, "r_star", path);
  r.divergent = io::field(j, "divergent", path).get<bool>();
  return r;
}

inline json to_json(const Report& r) {
  json probes = json::array();
  for (const auto& p : r.probes) probes.push_back(to_json(p));
  return {{"name", r.name},
          {"verdict", to_json(r.verdict)},
          {"probes", probes},
          {"provenance",
           {{"config_hash", r.provenance.config_hash}, {"version", r.provenance.version}, {"numeric", to_json(r.provenance.cfg)}}}};
}

inline Report report_from_json(const json& j) {
  Report r;
  r.name = io::get_str(j, "name", "");
  r.verdict = verdict_from_json(io::field(j, "verdict", ""), "verdict");
  const auto& ps = io::field(j, "probes", "");
  for (std::size_t i = 0; i < ps.size(); ++i) r.probes.push_back(probe_result_from_json(ps[i], "probes[" + std::to_string(i) + "]"));
  const auto& pv = io::field(j, "provenance", "");
  r.provenance = {io::get_str(pv, "config_hash", "provenance"), io::get_str(pv, "version", "provenance"),
                  numeric_from_json(io::field(pv, "numeric", "provenance"), "provenance.numeric")};
  return r;
}

inline bool operator==(const Provenance& a, const Provenance& b) {
  return a.config_hash == b.config_hash && a.version == b.version && to_json(a.cfg) == to_json(b.cfg);
}

inline bool operator==(const Report& a, const Report& b) {
  return a.name == b.name && a.verdict == b.verdict && a.probes == b.probes && a.provenance == b.provenance;
}

// ---- presets

namespace detail {

inline std::vector<Probe> indicator_family(int n, const std::vector<double>& radii) {
  std::vector<Probe> out;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "ball_%g", radii[i]);
    out.push_back({id, TestFunction::indicator(Ball::origin(n, radii[i]))});
  }
  return out;
}

inline std::vector<Probe> default_family(int n) {
  auto out = indicator_family(n, {1e-3, 1e-2, 1e-1, 1.0, 10.0, 1e2, 1e3});
  out.push_back({"combo_nested", TestFunction::linear_combo({{1.0, Ball::origin(n, 1)}, {0.5, Ball::origin(n, 3)}})});
  if (n == 1)
    out.push_back({"combo_offset", TestFunction::linear_combo({{1.0, Ball({2.0}, 0.5)}, {-0.5, Ball({-1.0}, 1)}})});
  else
    out.push_back({"combo_signed", TestFunction::linear_combo({{2.0, Ball::origin(n, 0.5)}, {-0.5, Ball::origin(n, 2)}})});
  return out;
}

}  // namespace detail

inline std::vector<std::string> preset_names() {
  return {"example1", "example2", "example3", "ks_counterexample", "classical_hls", "spanne_power", "equal_lambda_power"};
}

inline Scenario preset(const std::string& name) {
  Scenario s;
  s.name = name;
  auto P = [](double p) { return YoungFunction::power(p); };
  if (name == "example1") {
    s.problem = {P(2), P(4), 0.3, 0.6, 0.25, 1};
  } else if (name == "example2") {
    s.problem = {YoungFunction::powerlog_plus(2, 0.5), P(4), 0.3, 0.6, 0.25, 1};
  } else if (name == "example3") {
    s.problem = {YoungFunction::powerlog_sym(2, 0.5), YoungFunction::powerlog_sym(4, -0.2), 0.3, 0.6, 0.25, 1};
  } else if (name == "ks_counterexample") {
    s.problem = {P(2), P(20.0 / 7), 0.5, 4.0 / 7, 0.1, 1};
    for (double R : {10.0, 1e2, 1e3, 1e4}) {
      char id[32];
      std::snprintf(id, sizeof id, "shifted_%g", R);
      s.probes.push_back({id, TestFunction::indicator(Ball({R}, 1))});
    }
    return s;
  } else if (name == "classical_hls") {
    s.problem = {P(1.5), P(6), 0.0, 0.0, 0.5, 1};
  } else if (name == "spanne_power") {
    s.problem = {P(2), P(6), 0.2, 0.6, 1.0, 3};
  } else if (name == "equal_lambda_power") {
    s.problem = {P(2), P(4), 0.5, 0.5, 0.25, 1};
  } else {
    throw domain_error("unknown preset '" + name + "'");
  }
  s.probes = detail::default_family(s.problem.n);
  return s;
}

// ---- loading, running, writing

inline Scenario parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') ++line, col = 1;
      else ++col;
    }
    throw config_error("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
  return scenario_from_json(j);
}

inline Scenario load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

inline Report run_scenario(const Scenario& s, bool with_probes = true) {
  s.problem.validate();
  if (with_probes && s.probes.empty()) throw domain_error("scenario: probe family is empty");
  Report r;
  r.name = s.name;
  r.provenance = {config_hash(s), kVersion, s.cfg};
  std::vector<std::future<ProbeResult>> jobs;
  if (with_probes)
    for (const auto& p : s.probes)
      jobs.push_back(std::async(std::launch::async,
                                [&] { return empirical_ratio_probe(s.problem, p.f, s.cfg, p.id, s.homogeneous); }));
  r.verdict = verdict(s.problem, s.cfg);
  for (auto& j : jobs) r.probes.push_back(j.get());
  return r;
}

inline std::string fmt_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// CSV columns carry the certified lower bounds; the JSON report has both sides.
inline std::string report_csv(const Report& r) {
  std::string out = "function_id,source_norm,target_strong,target_weak,ratio\n";
  for (const auto& p : r.probes)
    out += p.function_id + "," + fmt_num(p.source_norm) + "," + fmt_num(p.target_strong.lower) + "," +
           fmt_num(p.target_weak.lower) + "," + fmt_num(p.ratio_strong.lower) + "\n";
  return out;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

inline void write_report(const Report& r, const std::string& path, const std::string& format) {
  if (format == "json")
    write_text(path, to_json(r).dump(2) + "\n");
  else if (format == "csv")
    write_text(path, report_csv(r));
  else
    throw config_error("format", "expected json or csv");
}

}  // namespace morlicz

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "morlicz/scenario.hpp"

using namespace morlicz;

namespace {

struct Common {
  std::string config;
  std::string preset;
  std::string out;
  std::string format = "json";
  bool non_homogeneous = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "scenario JSON file");
  app->add_option("--preset", c.preset, "named preset scenario");
  app->add_option("--out", c.out, "output path (stdout when omitted)");
  app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_flag("--non-homogeneous", c.non_homogeneous, "restrict the central sup to radii r > 1");
}

Scenario scenario_of(const Common& c) {
  if (c.config.empty() == c.preset.empty()) throw config_error("exactly one of --config and --preset is required");
  Scenario s;
  if (!c.config.empty()) {
    s = load_config(c.config);
  } else {
    try {
      s = preset(c.preset);
    } catch (const domain_error& e) {
      throw config_error("preset", e.what());
    }
  }
  if (c.non_homogeneous) s.homogeneous = false;
  return s;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty())
    std::cout << text;
  else
    write_text(c.out, text);
}

std::string table_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
    out += "\n";
  }
  return out;
}

int cmd_norm(const Common& c) {
  const auto s = scenario_of(c);
  const SpaceSpec src(s.problem.phi, s.problem.lambda, s.problem.n, s.homogeneous);
  json rows = json::array();
  std::vector<std::vector<std::string>> csv;
  for (const auto& p : s.probes) {
    const auto strong = central_norm_detail(p.f, src, false, s.cfg);
    const auto weak = central_norm_detail(p.f, src, true, s.cfg);
    rows.push_back({{"function_id", p.id},
                    {"strong", io::num(strong.value)},
                    {"weak", io::num(weak.value)},
                    {"r_star", io::num(strong.r_star)},
                    {"divergent", strong.divergent}});
    csv.push_back({p.id, fmt_num(strong.value), fmt_num(weak.value), fmt_num(strong.r_star)});
  }
  if (c.format == "csv")
    emit(c, table_csv({"function_id", "strong", "weak", "r_star"}, csv));
  else
    emit(c, json{{"name", s.name}, {"space", {{"phi", to_json(s.problem.phi)}, {"lambda", s.problem.lambda}}}, {"norms", rows}}
                    .dump(2) + "\n");
  return 0;
}

int cmd_riesz(const Common& c, const std::vector<double>& at) {
  const auto s = scenario_of(c);
  const RieszParams rp(s.problem.alpha, s.problem.n);
  json rows = json::array();
  std::vector<std::vector<std::string>> csv;
  for (const auto& p : s.probes) {
    for (double x : at) {
      std::vector<double> pt(static_cast<std::size_t>(s.problem.n), 0.0);
      pt[0] = x;
      const double v = riesz_eval(p.f, rp, pt, s.cfg);
      rows.push_back({{"function_id", p.id}, {"x", io::num(x)}, {"value", io::num(v)}});
      csv.push_back({p.id, fmt_num(x), fmt_num(v)});
    }
  }
  if (c.format == "csv")
    emit(c, table_csv({"function_id", "x", "value"}, csv));
  else
    emit(c, json{{"name", s.name}, {"alpha", s.problem.alpha}, {"values", rows}}.dump(2) + "\n");
  return 0;
}

int cmd_dilation(const Common& c, const std::vector<double>& factors) {
  const auto s = scenario_of(c);
  const SpaceSpec src(s.problem.phi, s.problem.lambda, s.problem.n, s.homogeneous);
  json rows = json::array();
  std::vector<std::vector<std::string>> csv;
  for (double a : factors) {
    const auto d = dilation_norm(src, a, s.cfg);
    rows.push_back({{"a", io::num(a)}, {"formula", io::num(d.formula)}, {"empirical", io::num(d.empirical)}});
    csv.push_back({fmt_num(a), fmt_num(d.formula), fmt_num(d.empirical)});
  }
  if (c.format == "csv")
    emit(c, table_csv({"a", "formula", "empirical"}, csv));
  else
    emit(c, json{{"name", s.name}, {"dilation", rows}}.dump(2) + "\n");
  return 0;
}

int cmd_check(const Common& c) {
  const auto s = scenario_of(c);
  const auto v = verdict(s.problem, s.cfg);
  if (c.format == "csv") {
    std::vector<std::vector<std::string>> csv;
    for (const auto& r : v.reports)
      csv.push_back({to_string(r.id), to_string(r.holds), r.best_constant ? fmt_num(*r.best_constant) : "",
                     r.witness.direction});
    emit(c, "outcome," + std::string(to_string(v.outcome)) + "\n" +
                table_csv({"condition_id", "holds", "best_constant", "witness"}, csv));
  } else {
    emit(c, json{{"name", s.name}, {"problem", to_json(s.problem)}, {"verdict", to_json(v)}}.dump(2) + "\n");
  }
  return 0;
}

int cmd_scenario(const Common& c) {
  const auto s = scenario_of(c);
  const auto r = run_scenario(s);
  if (c.out.empty())
    std::cout << (c.format == "csv" ? report_csv(r) : to_json(r).dump(2) + "\n");
  else
    write_report(r, c.out, c.format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Central Morrey-Orlicz toolkit: norms, Riesz potentials and boundedness checks"};
  app.require_subcommand(1);
  Common norm_c, riesz_c, dil_c, check_c, scen_c;
  std::vector<double> at{0.0, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> factors{0.5, 2.0};

  auto* norm = app.add_subcommand("norm", "central norms of the probe functions in the source space");
  add_common(norm, norm_c);
  auto* riesz = app.add_subcommand("riesz", "Riesz potential of the probe functions along the first axis");
  add_common(riesz, riesz_c);
  riesz->add_option("--at", at, "evaluation points");
  auto* dil = app.add_subcommand("dilation", "dilation operator norm on the source space");
  add_common(dil, dil_c);
  dil->add_option("--a", factors, "dilation factors")->check(CLI::PositiveNumber);
  auto* check = app.add_subcommand("check", "boundedness verdict");
  add_common(check, check_c);
  auto* scen = app.add_subcommand("scenario", "verdict plus empirical probes");
  add_common(scen, scen_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*norm) return cmd_norm(norm_c);
    if (*riesz) return cmd_riesz(riesz_c, at);
    if (*dil) return cmd_dilation(dil_c, factors);
    if (*check) return cmd_check(check_c);
    return cmd_scenario(scen_c);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
}

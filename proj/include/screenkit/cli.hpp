// Copyright 2026 The screenkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "screenkit/applications/bundling.hpp"
#include "screenkit/applications/competitive.hpp"
#include "screenkit/generators.hpp"
#include "screenkit/io.hpp"
#include "screenkit/parallel.hpp"
#include "screenkit/solver.hpp"
#include "screenkit/theorems.hpp"
#include "screenkit/validation.hpp"

namespace screenkit::cli {

enum class Format { json, csv, table };

struct RunConfig {
  std::string command;
  std::string instance;
  std::vector<std::string> inputs;  // result files for report
  std::string mode = "joint";
  std::size_t random = 0;
  std::uint64_t seed = 0;
  std::size_t coordinate = 0;
  bool strict = false;
  bool converse = false;
  bool certify = false;
  bool timing = false;
  std::string out;
  Format format = Format::json;
};

// One line of every tabular output. Empty optionals print as blank cells.
struct ReportRow {
  std::string instance_id;
  std::string mode;
  std::optional<double> value;
  std::optional<double> gap;
  std::optional<bool> y0_as;
  std::string assumptions;
  std::optional<double> runtime_ms;
  std::optional<bool> pass;
};

inline const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols{"instance_id", "mode", "value", "gap", "y0_as", "assumptions", "runtime_ms"};
  return cols;
}

enum Exit : int { kOk = 0, kFailure = 1, kGuard = 2, kInvalid = 3 };

namespace detail {

inline std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::vector<std::string> cells(const ReportRow& r) {
  return {r.instance_id,
          r.mode,
          r.value ? number(*r.value) : "",
          r.gap ? number(*r.gap) : "",
          r.y0_as ? (*r.y0_as ? "true" : "false") : "",
          r.assumptions,
          r.runtime_ms ? number(*r.runtime_ms) : ""};
}

// Ids of the assumption checks that fail, or "pass".
inline std::string assumption_summary(const ValidationReport& rep) {
  std::string out;
  for (const auto& e : rep.entries) {
    if (e.pass) continue;
    if (!out.empty()) out += ',';
    out += e.id;
  }
  return out.empty() ? "pass" : out;
}

inline Json row_json(const ReportRow& r) {
  Json j;
  j["instance_id"] = r.instance_id;
  j["mode"] = r.mode;
  j["value"] = r.value ? Json(*r.value) : Json(nullptr);
  j["gap"] = r.gap ? Json(*r.gap) : Json(nullptr);
  j["y0_as"] = r.y0_as ? Json(*r.y0_as) : Json(nullptr);
  j["assumptions"] = r.assumptions;
  if (r.runtime_ms) j["runtime_ms"] = *r.runtime_ms;
  if (r.pass) j["pass"] = *r.pass;
  return j;
}

inline ReportRow row_from_json(const Json& j) {
  ReportRow r;
  auto opt_num = [&](const char* k) -> std::optional<double> {
    if (!j.contains(k) || j.at(k).is_null()) return std::nullopt;
    return j.at(k).get<double>();
  };
  auto opt_bool = [&](const char* k) -> std::optional<bool> {
    if (!j.contains(k) || j.at(k).is_null()) return std::nullopt;
    return j.at(k).get<bool>();
  };
  r.instance_id = j.value("instance_id", "");
  r.mode = j.value("mode", "");
  r.value = opt_num("value");
  r.gap = opt_num("gap");
  r.y0_as = opt_bool("y0_as");
  r.assumptions = j.value("assumptions", "");
  r.runtime_ms = opt_num("runtime_ms");
  r.pass = opt_bool("pass");
  return r;
}

inline std::string csv_table(const std::vector<ReportRow>& rows) {
  std::string out = csv_row(report_columns());
  for (const auto& r : rows) out += csv_row(cells(r));
  return out;
}

inline std::string pretty_table(const std::vector<ReportRow>& rows) {
  std::vector<std::vector<std::string>> grid{report_columns()};
  for (const auto& r : rows) grid.push_back(cells(r));
  std::vector<std::size_t> width(report_columns().size(), 0);
  for (const auto& line : grid)
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  std::ostringstream os;
  for (const auto& line : grid) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      os << std::left << std::setw(static_cast<int>(width[c])) << line[c];
      os << (c + 1 == line.size() ? "\n" : "  ");
    }
  }
  return os.str();
}

inline Json mechanism_json(const ScreeningInstance& inst, const Mechanism& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < inst.dist.size(); ++i) {
    const auto type = inst.dist.support[i];
    out.push_back({{"a", type.a},
                   {"b", type.b},
                   {"x", inst.productive.x_grid[m.x[i]]},
                   {"y", inst.costly.y_set[m.y[i]]},
                   {"t", m.t[i]}});
  }
  return out;
}

inline Json line_json(const OneDimInstance& line, const LineSolution& sol) {
  Vec xs;
  for (std::size_t k : sol.x) xs.push_back(line.x_grid[k]);
  return Json{{"theta", line.theta}, {"x", xs}, {"x_index", sol.x}, {"t", sol.t},
              {"value", sol.value},  {"certificate", sol.certificate}};
}

inline std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Output of one command before formatting.
struct Outcome {
  Json document = Json::object();
  std::vector<ReportRow> rows;
  int code = kOk;
};

inline std::string render(const RunConfig& cfg, Outcome& oc) {
  switch (cfg.format) {
    case Format::csv:
      return csv_table(oc.rows);
    case Format::table:
      return pretty_table(oc.rows);
    case Format::json:
      break;
  }
  Json rows = Json::array();
  for (const auto& r : oc.rows) rows.push_back(row_json(r));
  oc.document["command"] = cfg.command;
  oc.document["rows"] = rows;
  return oc.document.dump(2) + "\n";
}

inline Outcome solve(const RunConfig& cfg) {
  Outcome oc;
  const ScreeningInstance inst = load_instance(read_json_file(cfg.instance));
  check_structure(inst);
  const ValidationReport rep = validate_instance(inst);
  ReportRow row;
  row.instance_id = stem(cfg.instance);
  row.mode = cfg.mode;
  row.assumptions = assumption_summary(rep);
  oc.document["assumptions"] = row.assumptions;
  if (cfg.strict && !rep.required_pass()) {
    oc.code = kInvalid;
    oc.rows.push_back(row);
    return oc;
  }
  const Stopwatch clock;
  if (cfg.mode == "joint") {
    const JointSolution sol = solve_joint(inst);
    row.value = sol.value;
    row.y0_as = std::all_of(sol.mechanism.y.begin(), sol.mechanism.y.end(),
                            [&](std::size_t y) { return y == inst.costly.y0_index; });
    oc.document["value"] = sol.value;
    oc.document["certificate"] = sol.certificate;
    oc.document["mechanism"] = mechanism_json(inst, sol.mechanism);
  } else {
    const Marginal marg = productive_marginal(inst);
    const LineSolution sol = cfg.mode == "downward1d" ? solve_downward_1d(marg.line) : solve_full_1d(marg.line);
    row.value = sol.value;
    row.y0_as = true;
    oc.document["value"] = sol.value;
    oc.document["certificate"] = sol.certificate;
    oc.document["mechanism"] = line_json(marg.line, sol);
  }
  if (cfg.timing) row.runtime_ms = clock.ms();
  oc.rows.push_back(row);
  return oc;
}

inline ReportRow theorem_row(const std::string& id, const TheoremReport& rep) {
  ReportRow row;
  row.instance_id = id;
  row.mode = "verify";
  row.value = rep.v_joint;
  row.gap = rep.gap;
  row.y0_as = rep.y0_almost_surely;
  row.assumptions = assumption_summary(rep.assumption_status);
  row.pass = !rep.asserted || rep.pass;
  return row;
}

inline ReportRow converse_row(const std::string& id, const ConverseArtifacts& art) {
  ReportRow row;
  row.instance_id = id;
  row.mode = "converse";
  row.value = art.menu_value;
  row.gap = art.margin;
  row.y0_as = false;
  row.assumptions = "eps=" + number(art.eps_star);
  row.pass = art.certified;
  return row;
}

inline ConverseArtifacts converse_for(const Vec& theta_a, const std::vector<Point>& theta_b,
                                      const JointDistribution& dist, std::size_t coordinate) {
  const std::size_t dim = theta_b.front().size();
  return converse_construct(theta_a, theta_b, dist, {0.0, 0.5, 1.0}, {Point(dim, 0.0), Point(dim, 1.0)}, 0,
                            coordinate);
}

inline Outcome verify(const RunConfig& cfg) {
  Outcome oc;
  if (cfg.instance.empty() && cfg.random == 0) throw ParseError("verify needs --instance or --random N");
  if (!cfg.instance.empty()) {
    const ScreeningInstance inst = load_instance(read_json_file(cfg.instance));
    const Stopwatch clock;
    ReportRow row;
    if (cfg.converse) {
      const ConverseArtifacts art = converse_construct(inst.productive.theta_a, inst.costly.theta_b, inst.dist,
                                                       inst.productive.x_grid, inst.costly.y_set,
                                                       inst.costly.y0_index, cfg.coordinate);
      row = converse_row(stem(cfg.instance), art);
      oc.document["eps_star"] = art.eps_star;
      oc.document["menu"] = Json::array();
      for (const auto& o : art.menu) oc.document["menu"].push_back({{"x", o.x}, {"y", o.y}, {"t", o.t}});
      oc.document["certified"] = art.certified;
    } else {
      const TheoremReport rep = verify_theorem1(inst);
      row = theorem_row(stem(cfg.instance), rep);
      oc.document["asserted"] = rep.asserted;
      oc.document["v_productive"] = rep.v_productive;
    }
    if (cfg.timing) row.runtime_ms = clock.ms();
    oc.rows.push_back(row);
  } else {
    const std::function<ReportRow(std::size_t)> job = [&](std::size_t k) {
      const Stopwatch clock;
      const std::string id = "random-" + std::to_string(k);
      ReportRow row;
      if (cfg.converse) {
        const TypeSpace ts = converse_suite_types(cfg.seed, k);
        row = converse_row(id, converse_for(ts.theta_a, ts.theta_b, ts.dist, 0));
      } else {
        row = theorem_row(id, verify_theorem1(suite_instance(cfg.seed, k)));
      }
      if (cfg.timing) row.runtime_ms = clock.ms();
      return row;
    };
    oc.rows = parallel_map(cfg.random, job);
  }
  std::size_t passed = 0;
  for (const auto& r : oc.rows) passed += r.pass.value_or(true) ? 1 : 0;
  oc.document["passed"] = passed;
  oc.document["total"] = oc.rows.size();
  if (passed != oc.rows.size()) oc.code = kFailure;
  return oc;
}

inline Outcome competitive(const RunConfig& cfg) {
  Outcome oc;
  const CompetitiveParams p = cfg.instance.empty() ? CompetitiveParams{} : competitive_from_json(read_json_file(cfg.instance));
  const Stopwatch clock;
  const CompetitiveResult res = competitive_separating(p);
  auto offer = [](const CompetitiveOffer& o) { return Json{{"x", o.x}, {"y", o.y}, {"w", o.w}}; };
  oc.document["low"] = offer(res.set.low);
  oc.document["high"] = offer(res.set.high);
  oc.document["high_payoff"] = res.high_payoff;
  oc.document["best_y0_payoff"] = res.best_y0_payoff;
  oc.document["improvement"] = res.improvement;
  oc.document["self_selection"] = res.self_selection;
  oc.document["zero_profit"] = res.zero_profit;
  ReportRow row;
  row.instance_id = cfg.instance.empty() ? "default" : stem(cfg.instance);
  row.mode = "competitive";
  row.value = res.high_payoff;
  row.gap = res.improvement;
  row.y0_as = !res.y_positive;
  row.assumptions = "pass";
  if (cfg.timing) row.runtime_ms = clock.ms();
  oc.rows.push_back(row);
  return oc;
}

inline Outcome bundling(const RunConfig& cfg) {
  Outcome oc;
  if (cfg.instance.empty()) throw ParseError("bundling needs --instance");
  const BundleInstance b = bundle_from_json(read_json_file(cfg.instance));
  const Stopwatch clock;
  const BundlingSolution sol = solve_bundling(b);
  Json menu = Json::array();
  for (const auto& qp : sol.menu) menu.push_back({{"quality", qp.quality}, {"price", qp.price}});
  oc.document["menu"] = menu;
  oc.document["value"] = sol.value;
  ReportRow row;
  row.instance_id = stem(cfg.instance);
  row.mode = "bundling";
  row.value = sol.value;
  row.y0_as = true;
  row.assumptions = "pass";
  if (cfg.certify) {
    const BundlingCertificate cert = certify_bundling(b);
    oc.document["certificate"] = Json{{"menu_value", cert.menu_value}, {"brute_value", cert.brute_value},
                                      {"tolerance", cert.tolerance},   {"mechanisms", cert.mechanisms},
                                      {"pass", cert.pass}};
    row.gap = cert.menu_value - cert.brute_value;
    row.pass = cert.pass;
    if (!cert.pass) oc.code = kFailure;
  }
  if (cfg.timing) row.runtime_ms = clock.ms();
  oc.rows.push_back(row);
  return oc;
}

// Random instances solved in the chosen mode; gap is measured against the
// productive-only full-IC optimum.
inline Outcome sweep(const RunConfig& cfg) {
  Outcome oc;
  if (cfg.random == 0) throw ParseError("sweep needs --random N");
  const std::function<ReportRow(std::size_t)> job = [&](std::size_t k) {
    const Stopwatch clock;
    const ScreeningInstance inst = suite_instance(cfg.seed, k);
    const Marginal marg = productive_marginal(inst);
    const double baseline = solve_full_1d(marg.line).value;
    ReportRow row;
    row.instance_id = "random-" + std::to_string(k);
    row.mode = cfg.mode;
    row.assumptions = assumption_summary(validate_instance(inst));
    if (cfg.mode == "joint") {
      const JointSolution sol = solve_joint(inst);
      row.value = sol.value;
      row.y0_as = sol.all_optima_y0;
    } else {
      row.value = cfg.mode == "downward1d" ? solve_downward_1d(marg.line).value : baseline;
      row.y0_as = true;
    }
    row.gap = *row.value - baseline;
    if (cfg.timing) row.runtime_ms = clock.ms();
    return row;
  };
  oc.rows = parallel_map(cfg.random, job);
  return oc;
}

inline Outcome report(const RunConfig& cfg) {
  Outcome oc;
  for (const auto& path : cfg.inputs) {
    const Json doc = read_json_file(path);
    if (!doc.is_object() || !doc.contains("rows") || !doc.at("rows").is_array())
      throw ParseError(path + ": not a result file");
    for (const auto& r : doc.at("rows")) oc.rows.push_back(row_from_json(r));
  }
  double max_gap = 0.0;
  std::size_t passed = 0, judged = 0;
  for (const auto& r : oc.rows) {
    if (r.gap) max_gap = std::max(max_gap, std::abs(*r.gap));
    if (r.pass) ++judged, passed += *r.pass ? 1 : 0;
  }
  oc.document["max_abs_gap"] = max_gap;
  oc.document["pass_rate"] = judged ? static_cast<double>(passed) / static_cast<double>(judged) : 1.0;
  return oc;
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Screening mechanism solver and verifier", "screenkit"};
  app.require_subcommand(1, 1);
  const std::map<std::string, Format> formats{{"json", Format::json}, {"csv", Format::csv}, {"table", Format::table}};

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Write output to this path");
    sub->add_option("--format", cfg.format, "json, csv or table")
        ->transform(CLI::CheckedTransformer(formats).description(""))
        ->option_text("FORMAT:{json,csv,table}");
    sub->add_flag("--timing", cfg.timing, "Record wall-clock runtimes");
  };
  auto seeded = [&](CLI::App* sub) {
    sub->add_option("--random", cfg.random, "Number of seeded random instances");
    sub->add_option("--seed", cfg.seed, "64-bit seed");
  };
  const std::vector<std::string> modes{"downward1d", "full1d", "joint"};

  auto* solve = app.add_subcommand("solve", "Solve one instance");
  solve->add_option("--instance", cfg.instance, "Instance file")->required()->check(CLI::ExistingFile);
  solve->add_option("--mode", cfg.mode, "downward1d, full1d or joint")->check(CLI::IsMember(modes));
  solve->add_flag("--strict", cfg.strict, "Refuse instances failing a required assumption");
  common(solve);

  auto* verify = app.add_subcommand("verify", "Check the productive-only optimality claim");
  verify->add_option("--instance", cfg.instance, "Instance file")->check(CLI::ExistingFile);
  verify->add_flag("--converse", cfg.converse, "Build and certify the three-option menu");
  verify->add_option("--coordinate", cfg.coordinate, "Cost coordinate used by --converse");
  seeded(verify);
  common(verify);

  auto* converse = app.add_subcommand("converse", "Same as verify --converse");
  converse->add_option("--instance", cfg.instance, "Instance file")->check(CLI::ExistingFile);
  converse->add_option("--coordinate", cfg.coordinate, "Cost coordinate");
  seeded(converse);
  common(converse);

  auto* competitive = app.add_subcommand("competitive", "Pareto-optimal separating offers");
  competitive->add_option("--instance", cfg.instance, "Parameter file")->check(CLI::ExistingFile);
  common(competitive);

  auto* bundling = app.add_subcommand("bundling", "Grand-bundle quality menu");
  bundling->add_option("--instance", cfg.instance, "Bundle file")->required()->check(CLI::ExistingFile);
  bundling->add_flag("--certify", cfg.certify, "Compare against every probabilistic bundling");
  common(bundling);

  auto* sweep = app.add_subcommand("sweep", "Solve a seeded batch of random instances");
  sweep->add_option("--mode", cfg.mode, "downward1d, full1d or joint")->check(CLI::IsMember(modes));
  seeded(sweep);
  common(sweep);

  auto* report = app.add_subcommand("report", "Merge result files into one table");
  report->add_option("inputs", cfg.inputs, "JSON result files")->check(CLI::ExistingFile);
  common(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kFailure;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  if (cfg.command == "converse") cfg.converse = true;

  detail::Outcome oc;
  try {
    if (cfg.command == "solve") oc = detail::solve(cfg);
    else if (cfg.command == "verify" || cfg.command == "converse") oc = detail::verify(cfg);
    else if (cfg.command == "competitive") oc = detail::competitive(cfg);
    else if (cfg.command == "bundling") oc = detail::bundling(cfg);
    else if (cfg.command == "sweep") oc = detail::sweep(cfg);
    else oc = detail::report(cfg);
  } catch (const SizeGuardExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kGuard;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }

  const std::string text = detail::render(cfg, oc);
  if (cfg.out.empty()) {
    out << text;
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << cfg.out << "\n";
      return kFailure;
    }
    file << text;
  }
  return oc.code;
}

}  // namespace screenkit::cli

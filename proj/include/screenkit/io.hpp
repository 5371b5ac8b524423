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

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "screenkit/applications/bundling.hpp"
#include "screenkit/applications/competitive.hpp"
#include "screenkit/applications/instances.hpp"
#include "screenkit/common.hpp"
#include "screenkit/model.hpp"

namespace screenkit {

using Json = nlohmann::json;

class ParseError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw ParseError(std::string("missing field '") + name + "'");
  return j.at(name);
}

template <typename T>
T read_as(const Json& j, const char* name) {
  try {
    return field(j, name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("field '") + name + "': " + e.what());
  }
}

template <typename T>
T read_or(const Json& j, const char* name, T fallback) {
  return j.contains(name) ? read_as<T>(j, name) : fallback;
}

// Points may be written as scalars when one-dimensional.
inline std::vector<Point> read_points(const Json& j, const char* name) {
  std::vector<Point> out;
  const Json& arr = field(j, name);
  if (!arr.is_array()) throw ParseError(std::string("field '") + name + "' must be an array");
  for (const auto& e : arr) {
    if (e.is_number()) {
      out.push_back({e.get<double>()});
    } else if (e.is_array()) {
      out.push_back(e.get<Point>());
    } else {
      throw ParseError(std::string("field '") + name + "' holds a non-numeric point");
    }
  }
  return out;
}

inline JointDistribution read_distribution(const Json& j) {
  JointDistribution d;
  for (const auto& pair : field(j, "support")) {
    if (!pair.is_array() || pair.size() != 2) throw ParseError("support entries must be [a, b] index pairs");
    d.support.push_back({pair[0].get<std::size_t>(), pair[1].get<std::size_t>()});
  }
  d.prob = read_as<Vec>(j, "prob");
  return d;
}

inline void write_distribution(Json& j, const JointDistribution& d) {
  Json support = Json::array();
  for (const auto& s : d.support) support.push_back({s.a, s.b});
  j["support"] = support;
  j["prob"] = d.prob;
}

}  // namespace detail

inline ScreeningInstance instance_from_json(const Json& j) {
  ScreeningInstance inst;
  inst.productive.theta_a = detail::read_as<Vec>(j, "theta_a");
  inst.productive.x_grid = detail::read_as<Vec>(j, "x_grid");
  inst.productive.u_a = detail::read_as<Table>(j, "u_a");
  inst.productive.v_a = detail::read_as<Table>(j, "v_a");
  inst.costly.theta_b = detail::read_points(j, "theta_b");
  inst.costly.y_set = detail::read_points(j, "y_set");
  inst.costly.y0_index = detail::read_as<std::size_t>(j, "y0_index");
  inst.costly.u_b = detail::read_as<Table>(j, "u_b");
  inst.costly.v_b = detail::read_as<Table>(j, "v_b");
  inst.dist = detail::read_distribution(j);
  return inst;
}

inline Json instance_to_json(const ScreeningInstance& inst) {
  Json j;
  j["theta_a"] = inst.productive.theta_a;
  j["x_grid"] = inst.productive.x_grid;
  j["u_a"] = inst.productive.u_a;
  j["v_a"] = inst.productive.v_a;
  j["theta_b"] = inst.costly.theta_b;
  j["y_set"] = inst.costly.y_set;
  j["y0_index"] = inst.costly.y0_index;
  j["u_b"] = inst.costly.u_b;
  j["v_b"] = inst.costly.v_b;
  detail::write_distribution(j, inst.dist);
  return j;
}

inline CompetitiveParams competitive_from_json(const Json& j) {
  CompetitiveParams p;
  p.theta_low = detail::read_or(j, "theta_low", p.theta_low);
  p.theta_high = detail::read_or(j, "theta_high", p.theta_high);
  p.a_low = detail::read_or(j, "a_low", p.a_low);
  p.a_high = detail::read_or(j, "a_high", p.a_high);
  p.b_low = detail::read_or(j, "b_low", p.b_low);
  p.b_high = detail::read_or(j, "b_high", p.b_high);
  p.coarse_step = detail::read_or(j, "coarse_step", p.coarse_step);
  p.fine_step = detail::read_or(j, "fine_step", p.fine_step);
  return p;
}

inline Json competitive_to_json(const CompetitiveParams& p) {
  return Json{{"kind", "competitive"},  {"theta_low", p.theta_low}, {"theta_high", p.theta_high},
              {"a_low", p.a_low},       {"a_high", p.a_high},       {"b_low", p.b_low},
              {"b_high", p.b_high},     {"coarse_step", p.coarse_step}, {"fine_step", p.fine_step}};
}

inline BundleInstance bundle_from_json(const Json& j) {
  BundleInstance b;
  b.goods = detail::read_as<std::size_t>(j, "goods");
  b.values = detail::read_as<std::vector<Vec>>(j, "values");
  b.prob = detail::read_as<Vec>(j, "prob");
  b.quality_grid = detail::read_as<Vec>(j, "quality_grid");
  b.cost = detail::read_as<Vec>(j, "cost");
  return b;
}

inline Json bundle_to_json(const BundleInstance& b) {
  return Json{{"kind", "bundling"},          {"goods", b.goods}, {"values", b.values}, {"prob", b.prob},
              {"quality_grid", b.quality_grid}, {"cost", b.cost}};
}

inline RegulationParams regulation_from_json(const Json& j) {
  RegulationParams r;
  r.theta_a = detail::read_or(j, "theta_a", r.theta_a);
  r.theta_b = detail::read_or(j, "theta_b", r.theta_b);
  r.x_grid = detail::read_or(j, "x_grid", r.x_grid);
  r.beta = detail::read_or(j, "beta", r.beta);
  r.delta = detail::read_or(j, "delta", r.delta);
  r.lambda = detail::read_or(j, "lambda", r.lambda);
  r.effort_cost = detail::read_or(j, "effort_cost", r.effort_cost);
  r.max_level = detail::read_or(j, "max_level", r.max_level);
  if (j.contains("support")) r.dist = detail::read_distribution(j);
  return r;
}

inline LaborParams labor_from_json(const Json& j) {
  LaborParams l;
  l.theta_a = detail::read_or(j, "theta_a", l.theta_a);
  if (j.contains("theta_b")) l.theta_b = detail::read_points(j, "theta_b");
  l.x_grid = detail::read_or(j, "x_grid", l.x_grid);
  l.rho = detail::read_or(j, "rho", l.rho);
  l.kappa = detail::read_or(j, "kappa", l.kappa);
  if (j.contains("support")) l.dist = detail::read_distribution(j);
  return l;
}

inline CostlyProductionParams costly_production_from_json(const Json& j) {
  CostlyProductionParams c;
  c.theta_a = detail::read_or(j, "theta_a", c.theta_a);
  c.theta_b = detail::read_or(j, "theta_b", c.theta_b);
  c.cost_a = detail::read_or(j, "cost_a", c.cost_a);
  c.cost_b = detail::read_or(j, "cost_b", c.cost_b);
  if (j.contains("support")) c.dist = detail::read_distribution(j);
  return c;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// Instance file or an application parameter file carrying "kind".
inline ScreeningInstance load_instance(const Json& j) {
  const std::string kind = j.is_object() && j.contains("kind") ? j.at("kind").get<std::string>() : "instance";
  if (kind == "instance") return instance_from_json(j);
  if (kind == "regulation") return make_regulation_instance(regulation_from_json(j));
  if (kind == "labor") return make_labor_instance(labor_from_json(j));
  if (kind == "costly_production") return make_costly_production_instance(costly_production_from_json(j));
  if (kind == "bundling") return bundling_reduce(bundle_from_json(j));
  throw ParseError("kind '" + kind + "' does not describe a screening instance");
}

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) line += ',';
    line += csv_escape(fields[k]);
  }
  return line + "\r\n";
}

}  // namespace screenkit

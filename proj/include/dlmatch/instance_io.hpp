#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dlmatch/departures.hpp"
#include "dlmatch/graph.hpp"

namespace dlmatch {

using Json = nlohmann::ordered_json;

struct InstanceFile {
  OnlineInstance instance;
  std::optional<DepartureModel> departure_model;
};

inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(Integer(j.get<long>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw InvalidInput("expected a rational as \"num/den\" or an integer");
}

inline Json rational_to_json(const Rational& r) { return to_string(r); }

namespace detail {

inline void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
  if (!j.is_object()) throw InvalidInput(what + " must be a JSON object");
  for (const auto& item : j.items())
    if (!allowed.count(item.key())) throw InvalidInput("unknown field '" + item.key() + "' in " + what);
}

inline int int_field(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer())
    throw InvalidInput(std::string("missing or non-integer field '") + key + "'");
  return j.at(key).get<int>();
}

}  // namespace detail

inline DepartureModel departure_model_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw InvalidInput("departure_model needs a string 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "deterministic") {
    detail::reject_unknown(j, {"kind", "d"}, "departure_model");
    return DepartureModel::deterministic(detail::int_field(j, "d"));
  }
  if (kind == "geometric") {
    detail::reject_unknown(j, {"kind", "delta"}, "departure_model");
    if (!j.contains("delta")) throw InvalidInput("geometric model needs 'delta'");
    return DepartureModel::geometric(rational_from_json(j.at("delta")));
  }
  if (kind == "explicit") {
    detail::reject_unknown(j, {"kind", "offsets"}, "departure_model");
    return DepartureModel::explicit_list(j.at("offsets").get<std::vector<int>>());
  }
  if (kind == "categorical") {
    detail::reject_unknown(j, {"kind", "values"}, "departure_model");
    std::vector<std::pair<int, Rational>> cats;
    for (const auto& e : j.at("values")) {
      if (!e.is_array() || e.size() != 2) throw InvalidInput("categorical entries are [offset, probability]");
      cats.emplace_back(e.at(0).get<int>(), rational_from_json(e.at(1)));
    }
    return DepartureModel::categorical(std::move(cats));
  }
  throw InvalidInput("unknown departure model kind '" + kind + "'");
}

inline Json departure_model_to_json(const DepartureModel& m) {
  Json j;
  switch (m.kind) {
    case DepartureModel::Kind::Deterministic:
      j["kind"] = "deterministic";
      j["d"] = m.d;
      break;
    case DepartureModel::Kind::Geometric:
      j["kind"] = "geometric";
      j["delta"] = rational_to_json(m.delta);
      break;
    case DepartureModel::Kind::Explicit:
      j["kind"] = "explicit";
      j["offsets"] = m.offsets;
      break;
    case DepartureModel::Kind::Categorical:
      j["kind"] = "categorical";
      j["values"] = Json::array();
      for (const auto& [v, p] : m.categories) j["values"].push_back(Json::array({v, rational_to_json(p)}));
      break;
  }
  return j;
}

/// {"n", "d", "edges": [[i, j, w]], "sigma"?, "departures"?, "roles"?,
/// "departure_model"?}. Roles are "S"/"B" strings.
inline InstanceFile instance_from_json(const Json& j) {
  detail::reject_unknown(j, {"n", "d", "edges", "sigma", "departures", "roles", "departure_model"}, "instance");
  const int n = detail::int_field(j, "n");
  if (n < 0) throw InvalidInput("negative n");
  InstanceFile out;
  auto& inst = out.instance;
  inst.graph = WeightedGraph(n);
  inst.deadline = detail::int_field(j, "d");
  if (!j.contains("edges") || !j.at("edges").is_array()) throw InvalidInput("missing 'edges' array");
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 3 || !e.at(0).is_number_integer() || !e.at(1).is_number_integer())
      throw InvalidInput("edges are [i, j, weight]");
    inst.graph.set_weight(e.at(0).get<int>(), e.at(1).get<int>(), rational_from_json(e.at(2)));
  }
  inst.sigma = j.contains("sigma") ? ArrivalOrder(j.at("sigma").get<std::vector<int>>()) : ArrivalOrder::identity(n);
  if (j.contains("departures")) inst.departures = j.at("departures").get<std::vector<int>>();
  if (j.contains("roles")) {
    std::vector<Role> roles;
    for (const auto& r : j.at("roles")) {
      const auto s = r.get<std::string>();
      if (s == "S") roles.push_back(Role::Seller);
      else if (s == "B") roles.push_back(Role::Buyer);
      else throw InvalidInput("roles are \"S\" or \"B\"");
    }
    inst.roles = std::move(roles);
  }
  if (j.contains("departure_model")) out.departure_model = departure_model_from_json(j.at("departure_model"));
  inst.validate();
  return out;
}

inline Json instance_to_json(const OnlineInstance& inst, const std::optional<DepartureModel>& model = std::nullopt) {
  Json j;
  j["n"] = inst.size();
  j["d"] = inst.deadline;
  j["edges"] = Json::array();
  for (const auto& e : inst.graph.edges()) j["edges"].push_back(Json::array({e.i, e.j, rational_to_json(e.weight)}));
  j["sigma"] = inst.sigma.slots();
  if (inst.departures) j["departures"] = *inst.departures;
  if (inst.roles) {
    j["roles"] = Json::array();
    for (Role r : *inst.roles) j["roles"].push_back(r == Role::Seller ? "S" : "B");
  }
  if (model) j["departure_model"] = departure_model_to_json(*model);
  return j;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("bad JSON in '" + path + "': " + e.what());
  }
}

inline InstanceFile load_instance(const std::string& path) {
  try {
    return instance_from_json(read_json_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("bad instance file '" + path + "': " + e.what());
  }
}

}  // namespace dlmatch

#include "noshlab/scenario_json.hpp"

#include "noshlab/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace noshlab::dgp {

using nlohmann::json;

namespace {

json triple_to_json(const ModifierTriple& t) { return json{{"u", t.u}, {"v", t.v}, {"uv", t.uv}}; }

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw InputError("unknown key '" + key + "' in " + where);
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw InputError("missing key '" + key + "' in " + where);
  return obj.at(key);
}

double number(const json& obj, const std::string& key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) throw InputError("'" + key + "' in " + where + " must be a number");
  return v.get<double>();
}

ModifierTriple triple_from_json(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw InputError(where + " must be an object with keys u, v, uv");
  reject_unknown(obj, {"u", "v", "uv"}, where);
  return {number(obj, "u", where), number(obj, "v", where), number(obj, "uv", where)};
}

}  // namespace

std::string scenario_to_json(const ScenarioConfig& c) {
  json delta_x = json::object();
  json delta_y = json::object();
  for (int k = kFirstPair; k < kFirstPair + kPairs; ++k) {
    delta_x["k" + std::to_string(k)] = triple_to_json(c.dx(k));
    delta_y["k" + std::to_string(k)] = triple_to_json(c.dy(k));
  }
  json doc = {
      {"n", c.n},
      {"gamma", c.gamma},
      {"rho", c.rho},
      {"rho_power", c.rho_power},
      {"tau", c.tau},
      {"phi", c.phi},
      {"delta_x", delta_x},
      {"delta_y", delta_y},
      {"theta_x", {{"k4", triple_to_json(c.theta_x4)}, {"k6", triple_to_json(c.theta_x6)}}},
      {"theta_y", {{"k5", triple_to_json(c.theta_y5)}, {"k6", triple_to_json(c.theta_y6)}}},
      {"error_dist", std::string(to_string(c.error_dist))},
  };
  return doc.dump(2) + "\n";
}

ScenarioConfig scenario_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("scenario JSON does not parse: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("scenario JSON must be an object");
  reject_unknown(doc, {"n", "gamma", "rho", "rho_power", "tau", "phi", "delta_x", "delta_y", "theta_x", "theta_y",
                       "error_dist"},
                 "scenario");

  ScenarioConfig c;
  const json& n = require(doc, "n", "scenario");
  if (!n.is_number_integer() || n.get<long long>() < 2) throw InputError("'n' must be an integer >= 2");
  c.n = n.get<std::size_t>();
  c.gamma = number(doc, "gamma", "scenario");
  c.rho = number(doc, "rho", "scenario");
  if (doc.contains("rho_power")) {
    const json& p = doc.at("rho_power");
    if (!p.is_number_integer()) throw InputError("'rho_power' must be an integer");
    c.rho_power = p.get<int>();
  }
  c.tau = number(doc, "tau", "scenario");
  c.phi = number(doc, "phi", "scenario");

  for (const char* block : {"delta_x", "delta_y"}) {
    const json& obj = require(doc, block, "scenario");
    if (!obj.is_object()) throw InputError(std::string(block) + " must be an object");
    reject_unknown(obj, {"k3", "k4", "k5", "k6"}, block);
    auto& target = std::string_view(block) == "delta_x" ? c.delta_x : c.delta_y;
    for (int k = kFirstPair; k < kFirstPair + kPairs; ++k) {
      const std::string key = "k" + std::to_string(k);
      target[static_cast<std::size_t>(k - kFirstPair)] =
          triple_from_json(require(obj, key, block), std::string(block) + "." + key);
    }
  }

  const json& tx = require(doc, "theta_x", "scenario");
  reject_unknown(tx, {"k4", "k6"}, "theta_x");
  c.theta_x4 = triple_from_json(require(tx, "k4", "theta_x"), "theta_x.k4");
  c.theta_x6 = triple_from_json(require(tx, "k6", "theta_x"), "theta_x.k6");
  const json& ty = require(doc, "theta_y", "scenario");
  reject_unknown(ty, {"k5", "k6"}, "theta_y");
  c.theta_y5 = triple_from_json(require(ty, "k5", "theta_y"), "theta_y.k5");
  c.theta_y6 = triple_from_json(require(ty, "k6", "theta_y"), "theta_y.k6");

  const json& dist = require(doc, "error_dist", "scenario");
  if (!dist.is_string()) throw InputError("'error_dist' must be a string");
  c.error_dist = parse_error_dist(dist.get<std::string>());

  c.validate();
  return c;
}

ScenarioConfig load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return scenario_from_json(buffer.str());
}

ScenarioConfig resolve_scenario(std::string_view id_or_path) {
  if (id_or_path.size() == 1 && id_or_path[0] >= '0' && id_or_path[0] <= '9') {
    return builtin_scenario(id_or_path[0] - '0');
  }
  return load_scenario_file(std::filesystem::path(std::string(id_or_path)));
}

}  // namespace noshlab::dgp

#include "config.hpp"

#include <fstream>

#include "strip/error.hpp"

namespace cli {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw strip::Error(strip::ErrorKind::Config, msg); }

bool compatible(const json& d, const json& u) {
  if (d.is_number() && u.is_number()) return !d.is_number_integer() || u.is_number_integer();
  if (d.is_null() || u.is_null()) return true;
  if (d.is_array() && u.is_number()) return true;  // scalar shorthand for a per-site list
  if (d.is_number() && u.is_array()) return true;
  return d.type() == u.type();
}

}  // namespace

json merge_config(const json& defaults, const json& user, const std::string& where) {
  if (!user.is_object()) fail("expected an object at '" + (where.empty() ? std::string("/") : where) + "'");
  json out = defaults;
  for (const auto& [key, value] : user.items()) {
    const std::string path = where + "/" + key;
    if (!defaults.contains(key)) fail("unknown key '" + path + "'");
    const json& d = defaults.at(key);
    if (!compatible(d, value)) fail("wrong type for '" + path + "'");
    if (d.is_object() && d.contains("type") && value.is_object() && value.contains("type")) {
      // a model block of another type starts from that type's defaults
      const json& t = value.at("type");
      if (t != "geometric" && t != "log-gamma") fail("'" + path + "/type' must be 'geometric' or 'log-gamma'");
      out[key] = merge_config(default_model(t.get<std::string>()), value, path);
    } else if (d.is_object() && value.is_object() && !d.empty()) {
      out[key] = merge_config(d, value, path);
    }
    else {
      out[key] = value;
    }
  }
  return out;
}

json load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail("cannot open config '" + path + "'");
  try {
    return json::parse(is, nullptr, true, true);
  } catch (const json::exception& e) {
    fail("malformed config '" + path + "': " + e.what());
  }
}

json default_model(const std::string& type) {
  if (type == "log-gamma") return {{"type", "log-gamma"}, {"N", 3}, {"alpha", 1.0}, {"u", 0.5}, {"v", 0.5}};
  return {{"type", "geometric"}, {"N", 4}, {"a", 0.4}, {"c1", 0.9}, {"c2", 0.9}};
}

strip::ModelParams model_from_json(const json& j) {
  if (!j.is_object()) fail("model must be an object");
  const std::string type = j.value("type", "geometric");
  if (type != "geometric" && type != "log-gamma") fail("model.type must be 'geometric' or 'log-gamma'");
  const json m = merge_config(default_model(type), j, "/model");
  const bool geo = type == "geometric";
  const json& n = m.at("N");
  if (!n.is_number_integer() || n.get<long>() < 1 || n.get<long>() > 100000) fail("model.N must be a positive integer");
  const int N = n.get<int>();
  const json& bulk = m.at(geo ? "a" : "alpha");
  const double b1 = m.at(geo ? "c1" : "u").get<double>(), b2 = m.at(geo ? "c2" : "v").get<double>();
  strip::ModelParams p =
      geo ? strip::ModelParams::geometric(N, 0.5, b1, b2) : strip::ModelParams::log_gamma(N, 1.0, b1, b2);
  if (bulk.is_number()) {
    p.bulk.assign(static_cast<std::size_t>(N), bulk.get<double>());
  } else {
    if (bulk.size() != static_cast<std::size_t>(N)) fail("model bulk list must have N entries");
    p.bulk.clear();
    for (const auto& x : bulk) {
      if (!x.is_number()) fail("model bulk list must hold numbers");
      p.bulk.push_back(x.get<double>());
    }
  }
  return strip::validate_params(p);
}

}  // namespace cli

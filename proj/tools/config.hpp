#pragma once

#include <json.hpp>
#include <string>

#include "strip/params.hpp"

namespace cli {

using json = nlohmann::ordered_json;

// Overlays `user` onto `defaults`.  Keys absent from the defaults are
// rejected, nested objects are merged recursively, and a value whose JSON
// type disagrees with the default is an error (integers may stand in for
// floats).  Throws strip::Error(Config).
json merge_config(const json& defaults, const json& user, const std::string& where = "");

json load_config(const std::string& path);

// {"type": "geometric", "N": 4, "a": 0.4 | [...], "c1": .., "c2": ..}
// {"type": "log-gamma", "N": 3, "alpha": 1.0 | [...], "u": .., "v": ..}
strip::ModelParams model_from_json(const json& j);
json default_model(const std::string& type);

}  // namespace cli

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "config.hpp"

namespace cli {

constexpr int kExitPass = 0;
constexpr int kExitScientific = 2;
constexpr int kExitConfig = 3;

struct Report {
  bool pass = true;
  json results = json::object();
  std::vector<std::string> failures;
};

struct Command {
  std::string name;
  std::string help;
  std::function<json()> defaults;
  std::function<void(const json&)> validate;  // throws on a bad config
  std::function<Report(const json&, const std::string& out)> run;
};

const std::vector<Command>& commands();

}  // namespace cli

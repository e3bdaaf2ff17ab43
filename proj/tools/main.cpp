// strip: command-line driver for the identity checks, stationarity tests,
// the matrix product checks, the KPZ limit diagnostics and plain simulation.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "commands.hpp"
#include "config.hpp"
#include "strip/error.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::optional<int> threads;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  sub->add_option("--seed", f.seed, "master seed (overrides the config)");
  sub->add_option("--out", f.out, "output directory")->capture_default_str();
  sub->add_option("--threads", f.threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary measures of open LPP and log-gamma polymers on a strip"};
  app.require_subcommand(1);
  Flags flags;
  std::string which;
  for (const auto& c : cli::commands()) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_flags(sub, flags);
    sub->callback([&which, name = c.name] { which = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitConfig;
  }

  const cli::Command* cmd = nullptr;
  for (const auto& c : cli::commands())
    if (c.name == which) cmd = &c;

  cli::json resolved;
  try {
    cli::json user = flags.config.empty() ? cli::json::object() : cli::load_config(flags.config);
    resolved = cli::merge_config(cmd->defaults(), user);
    if (flags.seed) resolved["seed"] = *flags.seed;
    if (flags.threads) resolved["threads"] = *flags.threads;
    if (resolved["threads"].get<int>() <= 0)
      resolved["threads"] = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    cmd->validate(resolved);
    std::filesystem::create_directories(flags.out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return cli::kExitConfig;
  }

  try {
    cli::Report rep = cmd->run(resolved, flags.out);
    cli::json doc = {{"command", cmd->name}, {"seed", resolved["seed"]}, {"config", resolved},
                     {"status", rep.pass ? "pass" : "fail"}, {"results", rep.results}};
    std::ofstream(std::filesystem::path(flags.out) / "report.json") << doc.dump(2) << '\n';
    for (const auto& line : rep.failures) std::fprintf(stderr, "FAIL %s\n", line.c_str());
    std::printf("%s: %s (report in %s)\n", cmd->name.c_str(), rep.pass ? "pass" : "FAIL", flags.out.c_str());
    return rep.pass ? cli::kExitPass : cli::kExitScientific;
  } catch (const strip::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    if (e.kind() == strip::ErrorKind::Config || e.kind() == strip::ErrorKind::ParamDomain) return cli::kExitConfig;
    return cli::kExitScientific;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
}

// polymer: batch runner for the experiment catalog.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "polymer/errors.hpp"
#include "polymer/experiments.hpp"

namespace ex = polymer::experiments;
using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::set<std::string> kTopKeys = {"experiment", "params",   "seeds",     "n_samples",
                                        "output_dir", "emit",     "workers",   "checkpoint"};

struct Config {
  const ex::Experiment* experiment = nullptr;
  json params;
  ex::RunOptions opts;
};

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!kTopKeys.count(it.key())) throw ConfigError("unknown config key '" + it.key() + "'");
  if (!j.contains("experiment") || !j["experiment"].is_string())
    throw ConfigError("config needs a string 'experiment'");

  Config c;
  c.experiment = ex::find_experiment(j["experiment"]);
  if (!c.experiment) throw ConfigError("unknown experiment '" + j["experiment"].get<std::string>() + "'");
  c.params = j.value("params", json::object());
  try {
    ex::resolve_params(*c.experiment, c.params);
  } catch (const polymer::ParameterError& e) {
    throw ConfigError(e.what());
  }
  try {
    if (j.contains("seeds")) {
      if (!j["seeds"].is_array() || j["seeds"].empty()) throw ConfigError("'seeds' must be a nonempty list");
      c.opts.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    }
    if (j.contains("n_samples")) c.opts.n_samples = j["n_samples"].get<std::size_t>();
    if (j.contains("workers")) c.opts.workers = j["workers"].get<int>();
    if (j.contains("checkpoint")) c.opts.checkpoint = j["checkpoint"].get<bool>();
    c.opts.out_dir = j.value("output_dir", "out/" + c.experiment->name);
    if (j.contains("emit")) {
      const auto& e = j["emit"];
      if (!e.is_object()) throw ConfigError("'emit' must be an object {csv, json}");
      for (auto it = e.begin(); it != e.end(); ++it)
        if (it.key() != "csv" && it.key() != "json") throw ConfigError("unknown emit flag '" + it.key() + "'");
      c.opts.emit_csv = e.value("csv", true);
      c.opts.emit_json = e.value("json", true);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value in config: ") + e.what());
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Half-space polymer stationary-measure experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<int> workers;
  std::optional<std::string> out_dir;
  auto* run = app.add_subcommand("run", "run the experiment described by a JSON config");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--seed-override", seed_override, "replace the config's seed list with this seed");
  run->add_option("--workers", workers, "worker threads (0 = all cores)");
  run->add_option("--out", out_dir, "output directory");
  auto* list = app.add_subcommand("list", "print the experiment catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (list->parsed()) {
    for (const auto& e : ex::catalog()) std::cout << e.name << " → " << e.claim << "\n";
    return 0;
  }

  Config cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "polymer: " << e.what() << "\n";
    return 2;
  }
  if (seed_override) cfg.opts.seeds = {*seed_override};
  if (workers) cfg.opts.workers = *workers;
  if (out_dir) cfg.opts.out_dir = *out_dir;

  polymer::report::Report rep;
  try {
    rep = ex::run_experiment(*cfg.experiment, cfg.params, cfg.opts);
  } catch (const polymer::ParameterError& e) {
    std::cerr << "polymer: invalid parameters: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "polymer: " << e.what() << "\n";
    return 3;
  }
  std::cout << rep.experiment << ": " << (rep.all_pass() ? "PASS" : "FAIL") << " (" << rep.results.size()
            << " tests, " << rep.wallclock_s << " s)\n";
  polymer::report::print_summary(std::cout, rep);
  if (!cfg.opts.out_dir.empty()) std::cout << "artifacts in " << cfg.opts.out_dir << "\n";
  return rep.all_pass() ? 0 : 1;
}

#pragma once
#include <cstdint>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "polymer/replicate.hpp"
#include "polymer/report.hpp"

namespace polymer::experiments {

using json = nlohmann::json;
using Records = std::vector<report::TestRecord>;

// Everything an experiment needs for one seed.
struct RunContext {
  json params;                 // defaults merged with the user block
  std::uint64_t seed = 1;
  std::size_t n_samples = 0;   // 0 = experiment default
  int workers = 0;
  std::string out_dir;         // empty: no side files
  std::string file_suffix;     // distinguishes side files of multi-seed runs
  bool emit_csv = true;
  std::string checkpoint_dir;  // empty: no checkpointing

  std::size_t samples(std::size_t dflt) const { return n_samples ? n_samples : dflt; }
  // Replication options; `label` namespaces checkpoint files per sub-experiment.
  ReplicateOptions opts(const std::string& label = "") const;
  // Side CSV under out_dir, or nullptr when CSV output is off.
  std::unique_ptr<std::ofstream> csv(const std::string& name) const;
};

struct Experiment {
  std::string name;
  std::string claim;          // what the experiment verifies (the `paper_ref` field)
  json defaults;              // every accepted parameter key with its default value
  std::size_t default_samples;
  Records (*run)(const RunContext&);
};

const std::vector<Experiment>& catalog();
const Experiment* find_experiment(const std::string& name);

// Rejects keys absent from the defaults; returns the merged block.
json resolve_params(const Experiment& e, const json& user);

struct RunOptions {
  std::vector<std::uint64_t> seeds{1};
  std::size_t n_samples = 0;
  int workers = 0;
  std::string out_dir;
  bool emit_csv = true;
  bool emit_json = true;
  bool checkpoint = false;  // per-chunk sample files under out_dir/checkpoints
};

// Runs the experiment once per seed and writes report.json / results.csv.
report::Report run_experiment(const Experiment& e, const json& user_params, const RunOptions& o);

}  // namespace polymer::experiments

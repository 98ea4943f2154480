#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mgad/dataset.hpp"
#include "mgad/evaluation.hpp"
#include "mgad/model.hpp"

namespace mgad {

// Fully resolved run configuration. One root seed feeds every component
// through named sub-streams; unknown keys are rejected at parse time.
struct RunConfig {
  // Paths.
  std::string edges;
  std::string attributes;
  std::string truth;
  std::string bundle;
  std::string out;
  std::string checkpoint;
  std::string scores;
  std::string walks;
  std::string name = "dataset";

  // Injection.
  InjectionConfig injection;

  // Model, sampler, labels, seed, threads.
  MGADConfig model;

  // Experiment spec.
  std::string study = "param";
  std::vector<std::size_t> l_values{3, 4, 5};
  std::vector<std::size_t> n_values{1, 3, 5};
  std::vector<double> ratios{0.01, 0.03, 0.05, 0.10};
  std::vector<std::uint64_t> seeds;  // empty: five streams derived from the root seed

  std::uint64_t root_seed() const { return model.seed; }
  std::vector<std::uint64_t> resolved_seeds() const;
};

// Applies one key=value setting; throws std::invalid_argument on unknown keys
// or malformed values.
void apply_run_config_entry(RunConfig& config, const std::string& key, const std::string& value);

// Plain-text key=value file, '#' comments.
void load_run_config_file(RunConfig& config, const std::filesystem::path& path);

// Canonical echo of the resolved configuration (written to <out>/config.txt
// by every command; deterministic, no timestamps).
std::vector<std::pair<std::string, std::string>> run_config_entries(const RunConfig& config);

void write_config_echo(const RunConfig& config, const std::filesystem::path& out_dir);

// Subcommand bodies. Each validates inputs, never mutates its input bundle,
// and writes deterministic artifacts under config.out. Errors are thrown:
// std::invalid_argument for validation, std::runtime_error for runtime/IO.
void command_inject(const RunConfig& config);
void command_sample(const RunConfig& config);
void command_train(const RunConfig& config);
void command_score(const RunConfig& config);
void command_eval(const RunConfig& config);
void command_experiment(const RunConfig& config);

// Walks artifact: one walk per line, space-separated parent NodeIds.
void write_walks_file(const std::vector<Walk>& walks, const std::filesystem::path& path);
std::vector<Walk> read_walks_file(const std::filesystem::path& path);

}  // namespace mgad

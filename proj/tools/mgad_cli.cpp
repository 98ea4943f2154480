// Command-line front end for the MGAD pipeline:
//   inject -> sample -> train -> score -> eval, plus experiment runners.
// Exit codes: 0 success, 2 validation error, 3 runtime error.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mgad/commands.hpp"

namespace {

struct FlagSpec {
  std::string key;
  std::string description;
};

// Every config key is also exposed as a --key flag; flags override the
// --config file.
const std::vector<FlagSpec> kFlags = {
    {"name", "dataset name recorded in provenance"},
    {"edges", "edge list file (inject input)"},
    {"attributes", "attribute matrix file (inject input)"},
    {"truth", "ground-truth anomaly file (optional inject input)"},
    {"bundle", "dataset bundle directory"},
    {"checkpoint", "model checkpoint file (score input)"},
    {"scores", "scores CSV (eval input)"},
    {"walks", "walks artifact to reuse instead of resampling"},
    {"clique_size", "structural anomaly clique size"},
    {"num_structural", "structural anomaly node count"},
    {"num_attribute", "attribute anomaly node count"},
    {"attribute_mode", "attribute donor rule: copy | farthest"},
    {"attribute_candidates", "candidate pool size for farthest mode"},
    {"alpha", "attribute weight in loss and score, [0,1]"},
    {"graph_encoder_dims", "graph encoder layer sizes, e.g. 64,64"},
    {"subgraph_encoder_dims", "subgraph encoder layer sizes"},
    {"attr_decoder_dims", "attribute decoder hidden sizes"},
    {"epochs", "training epochs"},
    {"learning_rate", "Adam step size"},
    {"beta1", "Adam beta1"},
    {"beta2", "Adam beta2"},
    {"epsilon", "Adam epsilon"},
    {"walks_per_node", "walks per node (1..5)"},
    {"walk_length", "walk length (3..5)"},
    {"schemas", "metapath schemas, e.g. XOX,OXO (or 'default')"},
    {"sampler_mode", "rejection | constrained"},
    {"reveal_ratio", "fraction of true anomalies revealed as O labels"},
    {"block_size", "structure decoder streaming block rows"},
    {"attr_decoder_sigmoid", "sigmoid on decoder output (binary attributes)"},
    {"study", "experiment study: param | sensitivity | ablation"},
    {"l_values", "walk lengths for the param study"},
    {"n_values", "walks-per-node values for the param study"},
    {"ratios", "reveal ratios for the sensitivity study"},
    {"seeds", "explicit seed list for experiment cells"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MGAD: metapath-based graph anomaly detection"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string seed_value;
  std::string threads_value;
  std::vector<std::pair<std::string, std::string>> overrides;

  const std::vector<std::string> commands = {"inject", "sample", "train",
                                             "score",  "eval",   "experiment"};
  const std::vector<std::string> descriptions = {
      "load a base dataset, inject anomalies, write a bundle",
      "sample the metapath anomaly subgraph, write walks",
      "train the model, write checkpoint and history",
      "score nodes with a checkpoint, write scores and embeddings",
      "compute AUC and precision@k from a scores file",
      "run a param/sensitivity/ablation study"};

  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i], descriptions[i]);
    sub->add_option("--config", config_path, "key=value config file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed_value, "root seed for all sub-streams");
    sub->add_option("--threads", threads_value, "worker threads (1 = bitwise deterministic)");
    for (const auto& flag : kFlags) {
      sub->add_option_function<std::string>(
          "--" + flag.key,
          [&overrides, key = flag.key](const std::string& v) { overrides.emplace_back(key, v); },
          flag.description);
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    mgad::RunConfig config;
    if (!config_path.empty()) mgad::load_run_config_file(config, config_path);
    for (const auto& [k, v] : overrides) mgad::apply_run_config_entry(config, k, v);
    if (!out_dir.empty()) config.out = out_dir;
    if (!seed_value.empty()) mgad::apply_run_config_entry(config, "seed", seed_value);
    if (!threads_value.empty()) mgad::apply_run_config_entry(config, "threads", threads_value);

    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      if (commands[i] == "inject")
        mgad::command_inject(config);
      else if (commands[i] == "sample")
        mgad::command_sample(config);
      else if (commands[i] == "train")
        mgad::command_train(config);
      else if (commands[i] == "score")
        mgad::command_score(config);
      else if (commands[i] == "eval")
        mgad::command_eval(config);
      else
        mgad::command_experiment(config);
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

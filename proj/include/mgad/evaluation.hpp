#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mgad/dataset.hpp"
#include "mgad/model.hpp"

namespace mgad {

// Rank-based (Mann-Whitney) AUC with average ranks for ties: the probability
// that a random anomaly outscores a random normal node, ties counted half.
// Requires at least one node of each class.
double auc(const std::vector<double>& scores, const std::vector<bool>& truth);

// Fraction of the top-k ranked nodes that are true anomalies.
double precision_at_k(const std::vector<NodeId>& ranking, const std::vector<bool>& truth,
                      std::size_t k);

struct EvalResult {
  double auc = 0.0;
  std::map<std::size_t, double> precision_at_k;
  std::uint64_t seed = 0;
};

EvalResult evaluate_scores(const std::vector<double>& scores, const std::vector<bool>& truth,
                           std::uint64_t seed);

void write_eval_json(const EvalResult& result, const std::filesystem::path& path);

void write_scores_csv(const ScoreReport& report, const std::vector<bool>* truth,
                      const std::filesystem::path& path);

// Which community feeds the second encoder.
enum class SubgraphMode : std::uint8_t { None = 0, EgoNet = 1, AnomalySubgraphMode = 2 };

const char* subgraph_mode_name(SubgraphMode mode);

// Union of 1-hop ego networks around the O-labeled nodes, as a subgraph
// artifact with no walks.
AnomalySubgraph ego_net_subgraph(const AttributedGraph& graph);

struct RunOutcome {
  double auc = 0.0;
  EvalResult eval;
  std::size_t subgraph_nodes = 0;
  double train_seconds = 0.0;
};

// reveal -> subgraph (per mode) -> train -> score -> AUC, all sub-streams
// derived from config.seed.
RunOutcome run_pipeline_once(const DatasetBundle& bundle, MGADConfig config,
                             SubgraphMode mode = SubgraphMode::AnomalySubgraphMode);

struct StudyRow {
  std::string study;
  std::string variant;
  std::uint64_t seed = 0;
  double auc = 0.0;
};

struct StudyTable {
  std::vector<StudyRow> rows;

  // Per-variant mean over seeds, in first-appearance order.
  std::vector<std::pair<std::string, double>> variant_means() const;
};

void write_table_csv(const StudyTable& table, const std::filesystem::path& path);
// Per-variant mean/min/max summary.
void write_table_json(const StudyTable& table, const std::filesystem::path& path);

// Trains and evaluates one run per (walk length, walks per node, seed) cell.
StudyTable run_param_study(const DatasetBundle& bundle, const std::vector<std::size_t>& l_values,
                           const std::vector<std::size_t>& n_values,
                           const std::vector<std::uint64_t>& seeds, const MGADConfig& base);

// Sweeps the label revelation ratio.
StudyTable run_sensitivity(const DatasetBundle& bundle, const std::vector<double>& ratios,
                           const std::vector<std::uint64_t>& seeds, const MGADConfig& base);

// Three rows: no subgraph, 1-hop ego-net, anomaly subgraph.
StudyTable run_ablation(const DatasetBundle& bundle, const std::vector<std::uint64_t>& seeds,
                        const MGADConfig& base);

}  // namespace mgad

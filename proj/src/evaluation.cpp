#include "mgad/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "mgad/io_util.hpp"

namespace mgad {

double auc(const std::vector<double>& scores, const std::vector<bool>& truth) {
  if (scores.size() != truth.size()) throw std::invalid_argument("auc: size mismatch");
  const std::size_t n = scores.size();
  std::size_t positives = 0;
  for (const bool b : truth)
    if (b) ++positives;
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0)
    throw std::invalid_argument("auc: need at least one anomaly and one normal node");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Average ranks over tie groups (1-based).
  std::vector<double> rank(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg = static_cast<double>(i + j + 2) / 2.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }

  double rank_sum = 0.0;
  for (std::size_t v = 0; v < n; ++v)
    if (truth[v]) rank_sum += rank[v];
  const double n1 = static_cast<double>(positives);
  const double n0 = static_cast<double>(negatives);
  const double u = rank_sum - n1 * (n1 + 1.0) / 2.0;
  return u / (n1 * n0);
}

double precision_at_k(const std::vector<NodeId>& ranking, const std::vector<bool>& truth,
                      std::size_t k) {
  if (k < 1 || k > ranking.size()) throw std::invalid_argument("precision_at_k: k out of range");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < k; ++i)
    if (truth[ranking[i]]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(k);
}

EvalResult evaluate_scores(const std::vector<double>& scores, const std::vector<bool>& truth,
                           std::uint64_t seed) {
  EvalResult result;
  result.seed = seed;
  result.auc = auc(scores, truth);
  const std::vector<NodeId> ranking = rank_by_score(scores);
  std::size_t anomalies = 0;
  for (const bool b : truth)
    if (b) ++anomalies;
  std::vector<std::size_t> ks = {10, 50, 100, anomalies};
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  for (const std::size_t k : ks)
    if (k >= 1 && k <= ranking.size()) result.precision_at_k[k] = precision_at_k(ranking, truth, k);
  return result;
}

void write_eval_json(const EvalResult& result, const std::filesystem::path& path) {
  nlohmann::json j;
  j["auc"] = result.auc;
  j["seed"] = result.seed;
  nlohmann::json pk = nlohmann::json::object();
  for (const auto& [k, v] : result.precision_at_k) pk[std::to_string(k)] = v;
  j["precision_at_k"] = pk;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_scores_csv(const ScoreReport& report, const std::vector<bool>* truth,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "node_id,score,truth\n";
  for (std::size_t v = 0; v < report.scores.size(); ++v) {
    out << v << ',' << format_double(report.scores[v]) << ','
        << (truth && (*truth)[v] ? 1 : 0) << '\n';
  }
}

const char* subgraph_mode_name(SubgraphMode mode) {
  switch (mode) {
    case SubgraphMode::None:
      return "no-subgraph";
    case SubgraphMode::EgoNet:
      return "ego-net";
    case SubgraphMode::AnomalySubgraphMode:
      return "anomaly-subgraph";
  }
  return "unknown";
}

AnomalySubgraph ego_net_subgraph(const AttributedGraph& graph) {
  std::vector<NodeId> nodes;
  for (NodeId v = 0; v < graph.num_nodes(); ++v) {
    if (graph.label(v) == LabelType::O) {
      nodes.push_back(v);
      const auto nb = graph.neighbors(v);
      nodes.insert(nodes.end(), nb.begin(), nb.end());
    }
  }
  AnomalySubgraph sub;
  auto [g, index_map] = induced_subgraph(graph, nodes);
  sub.graph = std::move(g);
  sub.index_map = std::move(index_map);
  return sub;
}

RunOutcome run_pipeline_once(const DatasetBundle& bundle, MGADConfig config, SubgraphMode mode) {
  config.validate();
  if (!bundle.graph.has_truth())
    throw std::invalid_argument("run_pipeline_once: dataset has no ground truth");

  Rng reveal_rng(derive_seed(config.seed, "reveal"));
  const AttributedGraph labeled = reveal_labels(bundle.graph, config.reveal_ratio, reveal_rng);

  AnomalySubgraph subgraph;
  switch (mode) {
    case SubgraphMode::None:
      break;
    case SubgraphMode::EgoNet:
      subgraph = ego_net_subgraph(labeled);
      break;
    case SubgraphMode::AnomalySubgraphMode:
      subgraph = generate_anomaly_subgraph(labeled, config.resolved_sampler(), config.threads);
      break;
  }

  auto [model, history] = train(labeled, subgraph, config);

  RunOutcome outcome;
  outcome.subgraph_nodes = subgraph.index_map.size();
  outcome.train_seconds =
      std::accumulate(history.epoch_seconds.begin(), history.epoch_seconds.end(), 0.0);
  const ScoreReport report =
      anomaly_scores(labeled, model, subgraph, config.alpha, config.block_size, config.threads);
  outcome.eval = evaluate_scores(report.scores, labeled.truth(), config.seed);
  outcome.auc = outcome.eval.auc;
  return outcome;
}

std::vector<std::pair<std::string, double>> StudyTable::variant_means() const {
  std::vector<std::pair<std::string, double>> means;
  std::vector<std::size_t> counts;
  for (const auto& row : rows) {
    auto it = std::find_if(means.begin(), means.end(),
                           [&](const auto& p) { return p.first == row.variant; });
    if (it == means.end()) {
      means.emplace_back(row.variant, row.auc);
      counts.push_back(1);
    } else {
      it->second += row.auc;
      ++counts[static_cast<std::size_t>(it - means.begin())];
    }
  }
  for (std::size_t i = 0; i < means.size(); ++i)
    means[i].second /= static_cast<double>(counts[i]);
  return means;
}

void write_table_csv(const StudyTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "study,variant,seed,auc\n";
  for (const auto& row : table.rows)
    out << row.study << ',' << row.variant << ',' << row.seed << ',' << format_double(row.auc)
        << '\n';
}

void write_table_json(const StudyTable& table, const std::filesystem::path& path) {
  nlohmann::json summary = nlohmann::json::array();
  std::vector<std::string> seen;
  for (const auto& row : table.rows) {
    if (std::find(seen.begin(), seen.end(), row.variant) != seen.end()) continue;
    seen.push_back(row.variant);
    double sum = 0.0, lo = row.auc, hi = row.auc;
    std::size_t count = 0;
    for (const auto& r : table.rows) {
      if (r.variant != row.variant) continue;
      sum += r.auc;
      lo = std::min(lo, r.auc);
      hi = std::max(hi, r.auc);
      ++count;
    }
    nlohmann::json cell;
    cell["study"] = row.study;
    cell["variant"] = row.variant;
    cell["seeds"] = count;
    cell["mean_auc"] = sum / static_cast<double>(count);
    cell["min_auc"] = lo;
    cell["max_auc"] = hi;
    summary.push_back(cell);
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << summary.dump(2) << '\n';
}

StudyTable run_param_study(const DatasetBundle& bundle, const std::vector<std::size_t>& l_values,
                           const std::vector<std::size_t>& n_values,
                           const std::vector<std::uint64_t>& seeds, const MGADConfig& base) {
  StudyTable table;
  for (const std::size_t l : l_values) {
    for (const std::size_t n : n_values) {
      for (const std::uint64_t seed : seeds) {
        MGADConfig config = base;
        config.sampler.walk_length = l;
        config.sampler.walks_per_node = n;
        config.sampler.schemas.clear();  // use the default family for each length
        config.seed = seed;
        const RunOutcome outcome = run_pipeline_once(bundle, config);
        table.rows.push_back(
            {"param", "l=" + std::to_string(l) + ",n=" + std::to_string(n), seed, outcome.auc});
      }
    }
  }
  return table;
}

StudyTable run_sensitivity(const DatasetBundle& bundle, const std::vector<double>& ratios,
                           const std::vector<std::uint64_t>& seeds, const MGADConfig& base) {
  StudyTable table;
  for (const double ratio : ratios) {
    for (const std::uint64_t seed : seeds) {
      MGADConfig config = base;
      config.reveal_ratio = ratio;
      config.seed = seed;
      const RunOutcome outcome = run_pipeline_once(bundle, config);
      table.rows.push_back({"sensitivity", "ratio=" + format_double(ratio), seed, outcome.auc});
    }
  }
  return table;
}

StudyTable run_ablation(const DatasetBundle& bundle, const std::vector<std::uint64_t>& seeds,
                        const MGADConfig& base) {
  StudyTable table;
  for (const SubgraphMode mode :
       {SubgraphMode::None, SubgraphMode::EgoNet, SubgraphMode::AnomalySubgraphMode}) {
    for (const std::uint64_t seed : seeds) {
      MGADConfig config = base;
      config.seed = seed;
      const RunOutcome outcome = run_pipeline_once(bundle, config, mode);
      table.rows.push_back({"ablation", subgraph_mode_name(mode), seed, outcome.auc});
    }
  }
  return table;
}

}  // namespace mgad

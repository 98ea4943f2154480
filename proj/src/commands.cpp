#include "mgad/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "mgad/io_util.hpp"
#include "mgad/metapath.hpp"

namespace mgad {

namespace {

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    if (end > start) out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& value) {
  std::vector<std::size_t> out;
  for (const auto& part : split_commas(value)) {
    std::uint64_t v;
    if (!parse_u64(part, v))
      throw std::invalid_argument("config: bad integer list for '" + key + "': " + value);
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw std::invalid_argument("config: empty list for '" + key + "'");
  return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& part : split_commas(value)) {
    double v;
    if (!parse_double(part, v))
      throw std::invalid_argument("config: bad number list for '" + key + "': " + value);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("config: empty list for '" + key + "'");
  return out;
}

std::string join_u64(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

std::string join_sizes(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

std::filesystem::path require_out(const RunConfig& config) {
  if (config.out.empty()) throw std::invalid_argument("config: 'out' directory is required");
  std::filesystem::create_directories(config.out);
  return config.out;
}

DatasetBundle load_input_bundle(const RunConfig& config) {
  if (config.bundle.empty())
    throw std::invalid_argument("config: 'bundle' directory is required for this command");
  return load_bundle(config.bundle);
}

AttributedGraph reveal_for_run(const AttributedGraph& graph, const MGADConfig& model) {
  Rng rng(derive_seed(model.seed, "reveal"));
  return reveal_labels(graph, model.reveal_ratio, rng);
}

AnomalySubgraph subgraph_from_walks(const AttributedGraph& graph, const std::vector<Walk>& walks,
                                    const std::vector<MetapathSchema>& schemas) {
  AnomalySubgraph sub;
  sub.schemas = schemas;
  sub.walks = walks;
  std::vector<NodeId> nodes;
  for (const auto& w : sub.walks) nodes.insert(nodes.end(), w.nodes.begin(), w.nodes.end());
  auto [g, index_map] = induced_subgraph(graph, nodes);
  sub.graph = std::move(g);
  sub.index_map = std::move(index_map);
  return sub;
}

AnomalySubgraph subgraph_for_run(const RunConfig& config, const AttributedGraph& labeled,
                                 const MGADConfig& model) {
  if (!config.walks.empty()) {
    return subgraph_from_walks(labeled, read_walks_file(config.walks),
                               model.resolved_sampler().schemas);
  }
  return generate_anomaly_subgraph(labeled, model.resolved_sampler(), model.threads);
}

}  // namespace

std::vector<std::uint64_t> RunConfig::resolved_seeds() const {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < 5; ++i) out.push_back(derive_seed(root_seed(), "cell", i));
  return out;
}

void apply_run_config_entry(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "edges")
    config.edges = value;
  else if (key == "attributes")
    config.attributes = value;
  else if (key == "truth")
    config.truth = value;
  else if (key == "bundle")
    config.bundle = value;
  else if (key == "out")
    config.out = value;
  else if (key == "checkpoint")
    config.checkpoint = value;
  else if (key == "scores")
    config.scores = value;
  else if (key == "walks")
    config.walks = value;
  else if (key == "name")
    config.name = value;
  else if (key == "clique_size") {
    std::uint64_t v;
    if (!parse_u64(value, v)) throw std::invalid_argument("config: bad clique_size: " + value);
    config.injection.clique_size = static_cast<std::size_t>(v);
  } else if (key == "num_structural") {
    std::uint64_t v;
    if (!parse_u64(value, v)) throw std::invalid_argument("config: bad num_structural: " + value);
    config.injection.num_structural = static_cast<std::size_t>(v);
  } else if (key == "num_attribute") {
    std::uint64_t v;
    if (!parse_u64(value, v)) throw std::invalid_argument("config: bad num_attribute: " + value);
    config.injection.num_attribute = static_cast<std::size_t>(v);
  } else if (key == "attribute_mode") {
    if (value == "copy")
      config.injection.attribute_mode = AttributeInjection::CopyRandom;
    else if (value == "farthest")
      config.injection.attribute_mode = AttributeInjection::FarthestOfK;
    else
      throw std::invalid_argument("config: attribute_mode must be copy or farthest: " + value);
  } else if (key == "attribute_candidates") {
    std::uint64_t v;
    if (!parse_u64(value, v))
      throw std::invalid_argument("config: bad attribute_candidates: " + value);
    config.injection.attribute_candidates = static_cast<std::size_t>(v);
  } else if (key == "study") {
    if (value != "param" && value != "sensitivity" && value != "ablation")
      throw std::invalid_argument("config: study must be param, sensitivity, or ablation");
    config.study = value;
  } else if (key == "l_values")
    config.l_values = parse_size_list(key, value);
  else if (key == "n_values")
    config.n_values = parse_size_list(key, value);
  else if (key == "ratios")
    config.ratios = parse_double_list(key, value);
  else if (key == "seeds") {
    config.seeds.clear();
    for (const auto& part : split_commas(value)) {
      std::uint64_t v;
      if (!parse_u64(part, v)) throw std::invalid_argument("config: bad seed list: " + value);
      config.seeds.push_back(v);
    }
  } else {
    apply_config_entry(config.model, key, value);  // throws on unknown keys
  }
}

void load_run_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string trimmed = line;
    if (!trimmed.empty() && trimmed.back() == '\r') trimmed.pop_back();
    std::size_t first = trimmed.find_first_not_of(" \t");
    if (first == std::string::npos || trimmed[first] == '#') continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                  ": expected key=value");
    const std::string key = trimmed.substr(first, eq - first);
    apply_run_config_entry(config, key, trimmed.substr(eq + 1));
  }
}

std::vector<std::pair<std::string, std::string>> run_config_entries(const RunConfig& config) {
  std::vector<std::pair<std::string, std::string>> e;
  auto put = [&](const char* k, const std::string& v) {
    if (!v.empty()) e.emplace_back(k, v);
  };
  put("name", config.name);
  put("edges", config.edges);
  put("attributes", config.attributes);
  put("truth", config.truth);
  put("bundle", config.bundle);
  put("out", config.out);
  put("checkpoint", config.checkpoint);
  put("scores", config.scores);
  put("walks", config.walks);
  e.emplace_back("clique_size", std::to_string(config.injection.clique_size));
  e.emplace_back("num_structural", std::to_string(config.injection.num_structural));
  e.emplace_back("num_attribute", std::to_string(config.injection.num_attribute));
  e.emplace_back("attribute_mode",
                 config.injection.attribute_mode == AttributeInjection::CopyRandom ? "copy"
                                                                                   : "farthest");
  e.emplace_back("attribute_candidates", std::to_string(config.injection.attribute_candidates));
  for (auto& kv : config_to_entries(config.model)) e.push_back(std::move(kv));
  e.emplace_back("study", config.study);
  e.emplace_back("l_values", join_sizes(config.l_values));
  e.emplace_back("n_values", join_sizes(config.n_values));
  e.emplace_back("ratios", join_doubles(config.ratios));
  if (!config.seeds.empty()) e.emplace_back("seeds", join_u64(config.seeds));
  return e;
}

void write_config_echo(const RunConfig& config, const std::filesystem::path& out_dir) {
  std::ofstream out(out_dir / "config.txt");
  if (!out) throw std::runtime_error("cannot write " + (out_dir / "config.txt").string());
  for (const auto& [k, v] : run_config_entries(config)) out << k << '=' << v << '\n';
}

void write_walks_file(const std::vector<Walk>& walks, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& w : walks) {
    for (std::size_t i = 0; i < w.nodes.size(); ++i) {
      if (i > 0) out << ' ';
      out << w.nodes[i];
    }
    out << '\n';
  }
}

std::vector<Walk> read_walks_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open walks file " + path.string());
  std::vector<Walk> walks;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    Walk w;
    const bool ok = for_each_token(line, [&](std::string_view tok) {
      std::uint64_t v;
      if (!parse_u64(tok, v)) return false;
      w.nodes.push_back(static_cast<NodeId>(v));
      return true;
    });
    if (!ok) throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": bad walk");
    if (!w.nodes.empty()) walks.push_back(std::move(w));
  }
  return walks;
}

void command_inject(const RunConfig& config) {
  if (config.edges.empty() || config.attributes.empty())
    throw std::invalid_argument("inject: 'edges' and 'attributes' paths are required");
  const std::filesystem::path out = require_out(config);

  DatasetBundle base = load_dataset(config.edges, config.attributes,
                                    config.truth.empty() ? std::filesystem::path{}
                                                         : std::filesystem::path(config.truth));
  base.name = config.name;
  InjectionConfig inj = config.injection;
  inj.seed = config.root_seed();
  DatasetBundle injected = inject_anomalies(base, inj);
  injected.provenance.set_double("reveal_ratio", config.model.reveal_ratio);
  save_dataset(injected, out);
  write_config_echo(config, out);
  std::cerr << "inject: n=" << injected.graph.num_nodes() << " m=" << injected.graph.num_edges()
            << " anomalies=" << injected.graph.count_true_anomalies() << " -> " << out << "\n";
}

void command_sample(const RunConfig& config) {
  const std::filesystem::path out = require_out(config);
  const DatasetBundle bundle = load_input_bundle(config);
  const AttributedGraph labeled = reveal_for_run(bundle.graph, config.model);

  const AnomalySubgraph sub =
      generate_anomaly_subgraph(labeled, config.model.resolved_sampler(), config.model.threads);

  write_walks_file(sub.walks, out / "walks.txt");
  {
    std::ofstream nodes(out / "subgraph_nodes.txt");
    if (!nodes) throw std::runtime_error("cannot write subgraph_nodes.txt");
    for (const NodeId v : sub.index_map) nodes << v << '\n';
  }
  write_config_echo(config, out);
  std::cerr << "sample: walks=" << sub.walks.size() << " nodes=" << sub.index_map.size()
            << " steps=" << sub.stats.steps_taken << " -> " << out << "\n";
}

void command_train(const RunConfig& config) {
  const std::filesystem::path out = require_out(config);
  const DatasetBundle bundle = load_input_bundle(config);
  const AttributedGraph labeled = reveal_for_run(bundle.graph, config.model);
  const AnomalySubgraph sub = subgraph_for_run(config, labeled, config.model);

  auto [model, history] = train(labeled, sub, config.model);

  save_checkpoint(model, config.model, out / "checkpoint.bin");
  {
    std::ofstream hist(out / "history.csv");
    if (!hist) throw std::runtime_error("cannot write history.csv");
    hist << "epoch,loss\n";
    for (std::size_t i = 0; i < history.losses.size(); ++i)
      hist << i << ',' << format_double(history.losses[i]) << '\n';
  }
  write_config_echo(config, out);
  double seconds = 0.0;
  for (const double s : history.epoch_seconds) seconds += s;
  std::cerr << "train: epochs=" << history.losses.size() << " final_loss="
            << (history.losses.empty() ? 0.0 : history.losses.back()) << " time=" << seconds
            << "s -> " << out << "\n";
}

void command_score(const RunConfig& config) {
  const std::filesystem::path out = require_out(config);
  if (config.checkpoint.empty())
    throw std::invalid_argument("score: 'checkpoint' path is required");
  const DatasetBundle bundle = load_input_bundle(config);

  auto [model, ckpt_config] = load_checkpoint(config.checkpoint);
  ckpt_config.threads = config.model.threads;  // execution knob, not provenance

  const AttributedGraph labeled = reveal_for_run(bundle.graph, ckpt_config);
  const AnomalySubgraph sub = subgraph_for_run(config, labeled, ckpt_config);

  const ScoreReport report = anomaly_scores(labeled, model, sub, ckpt_config.alpha,
                                            ckpt_config.block_size, ckpt_config.threads);
  write_scores_csv(report, labeled.has_truth() ? &labeled.truth() : nullptr, out / "scores.csv");
  {
    nlohmann::json j;
    j["nodes"] = report.scores.size();
    j["ranking"] = report.ranking;
    j["scores"] = report.scores;
    std::ofstream rep(out / "score_report.json");
    if (!rep) throw std::runtime_error("cannot write score_report.json");
    rep << j.dump(2) << '\n';
  }
  {
    // Fused embeddings for external visualization.
    ForwardContext ctx(labeled, sub, ckpt_config.threads);
    const ForwardPass fwd = forward(model, ctx);
    write_matrix_text(fwd.z, out / "embeddings.txt");
  }
  write_config_echo(config, out);
  std::cerr << "score: nodes=" << report.scores.size() << " -> " << out << "\n";
}

void command_eval(const RunConfig& config) {
  const std::filesystem::path out = require_out(config);
  if (config.scores.empty()) throw std::invalid_argument("eval: 'scores' path is required");
  const DatasetBundle bundle = load_input_bundle(config);
  if (!bundle.graph.has_truth())
    throw std::invalid_argument("eval: bundle has no ground-truth anomalies");

  std::ifstream in(config.scores);
  if (!in) throw std::runtime_error("cannot open scores file " + config.scores);
  std::vector<double> scores(bundle.graph.num_nodes(), 0.0);
  std::vector<bool> seen(bundle.graph.num_nodes(), false);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("node_id", 0) == 0) continue;
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    std::uint64_t node;
    double score;
    if (fields.size() < 2 || !parse_u64(fields[0], node) || !parse_double(fields[1], score) ||
        node >= scores.size())
      throw std::runtime_error(config.scores + ":" + std::to_string(line_no) + ": bad score row");
    scores[node] = score;
    seen[node] = true;
  }
  for (std::size_t v = 0; v < seen.size(); ++v)
    if (!seen[v])
      throw std::runtime_error("eval: scores file is missing node " + std::to_string(v));

  const EvalResult result = evaluate_scores(scores, bundle.graph.truth(), config.root_seed());
  write_eval_json(result, out / "eval.json");
  write_config_echo(config, out);
  std::cerr << "eval: auc=" << result.auc << " -> " << out << "\n";
}

void command_experiment(const RunConfig& config) {
  const std::filesystem::path out = require_out(config);
  const DatasetBundle bundle = load_input_bundle(config);
  const std::vector<std::uint64_t> seeds = config.resolved_seeds();

  StudyTable table;
  if (config.study == "param")
    table = run_param_study(bundle, config.l_values, config.n_values, seeds, config.model);
  else if (config.study == "sensitivity")
    table = run_sensitivity(bundle, config.ratios, seeds, config.model);
  else
    table = run_ablation(bundle, seeds, config.model);

  write_table_csv(table, out / (config.study + "_results.csv"));
  write_table_json(table, out / (config.study + "_summary.json"));
  write_config_echo(config, out);
  std::cerr << "experiment: study=" << config.study << " rows=" << table.rows.size() << " -> "
            << out << "\n";
}

}  // namespace mgad

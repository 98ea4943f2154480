#include "mgad/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mgad/io_util.hpp"

namespace mgad {

namespace {

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line_no,
                             const std::string& what) {
  throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

bool is_comment_or_blank(const std::string& line) {
  for (const char c : line) {
    if (c == ' ' || c == '\t' || c == '\r') continue;
    return c == '#';
  }
  return true;
}

std::vector<Edge> read_edge_file(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    std::uint64_t vals[2];
    std::size_t count = 0;
    const bool ok = for_each_token(line, [&](std::string_view tok) {
      if (count >= 2) return false;
      return parse_u64(tok, vals[count++]);
    });
    if (!ok || count != 2) parse_fail(path, line_no, "expected two node ids");
    edges.emplace_back(static_cast<NodeId>(vals[0]), static_cast<NodeId>(vals[1]));
  }
  return edges;
}

DenseMatrix read_attribute_file(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    std::size_t row_cols = 0;
    const bool ok = for_each_token(line, [&](std::string_view tok) {
      double v;
      if (!parse_double(tok, v)) return false;
      values.push_back(v);
      ++row_cols;
      return true;
    });
    if (!ok || row_cols == 0) parse_fail(path, line_no, "bad attribute value");
    if (rows == 0)
      cols = row_cols;
    else if (row_cols != cols)
      parse_fail(path, line_no,
                 "row has " + std::to_string(row_cols) + " values, expected " + std::to_string(cols));
    ++rows;
  }
  DenseMatrix m(rows, cols);
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

std::vector<NodeId> read_truth_file(const std::filesystem::path& path, std::size_t n) {
  std::ifstream in = open_input(path);
  std::vector<NodeId> nodes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    std::uint64_t v;
    std::size_t count = 0;
    const bool ok = for_each_token(line, [&](std::string_view tok) {
      if (count >= 1) return false;
      ++count;
      return parse_u64(tok, v);
    });
    if (!ok || count != 1) parse_fail(path, line_no, "expected one node id");
    if (v >= n)
      parse_fail(path, line_no, "anomaly node " + std::to_string(v) + " out of range for n=" +
                                    std::to_string(n));
    nodes.push_back(static_cast<NodeId>(v));
  }
  return nodes;
}

std::vector<NodeId> non_anomalous_pool(const AttributedGraph& graph) {
  std::vector<NodeId> pool;
  pool.reserve(graph.num_nodes());
  for (NodeId v = 0; v < graph.num_nodes(); ++v)
    if (!graph.is_true_anomaly(v)) pool.push_back(v);
  return pool;
}

}  // namespace

void InjectionConfig::validate() const {
  if (clique_size == 0) throw std::invalid_argument("injection: clique_size must be positive");
  if (num_structural % clique_size != 0)
    throw std::invalid_argument("injection: num_structural must be a multiple of clique_size");
  if (num_structural != num_attribute)
    throw std::invalid_argument("injection: num_structural must equal num_attribute");
}

void Provenance::set(const std::string& key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(key, std::move(value));
}

void Provenance::set_u64(const std::string& key, std::uint64_t value) {
  set(key, std::to_string(value));
}

void Provenance::set_double(const std::string& key, double value) {
  set(key, format_double(value));
}

bool Provenance::has(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return true;
  return false;
}

const std::string& Provenance::get(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  throw std::invalid_argument("provenance: missing key '" + key + "'");
}

std::uint64_t Provenance::get_u64(const std::string& key) const {
  std::uint64_t v;
  if (!parse_u64(get(key), v)) throw std::runtime_error("provenance: bad integer for '" + key + "'");
  return v;
}

double Provenance::get_double(const std::string& key) const {
  double v;
  if (!parse_double(get(key), v)) throw std::runtime_error("provenance: bad number for '" + key + "'");
  return v;
}

DatasetBundle load_dataset(const std::filesystem::path& edge_path,
                           const std::filesystem::path& attribute_path,
                           const std::filesystem::path& truth_path) {
  DenseMatrix attrs = read_attribute_file(attribute_path);
  const std::size_t n = attrs.rows();
  std::vector<Edge> edges = read_edge_file(edge_path);
  for (const auto& [u, v] : edges)
    if (u >= n || v >= n)
      throw std::runtime_error(edge_path.string() + ": edge (" + std::to_string(u) + "," +
                               std::to_string(v) + ") out of range; attribute file has " +
                               std::to_string(n) + " rows");
  AttributedGraph g = AttributedGraph::build(edges, std::move(attrs));
  if (!truth_path.empty()) {
    std::vector<bool> truth(n, false);
    for (const NodeId v : read_truth_file(truth_path, n)) truth[v] = true;
    g = g.with_truth(std::move(truth));
  }
  DatasetBundle bundle;
  bundle.graph = std::move(g);
  bundle.name = edge_path.stem().string();
  return bundle;
}

std::pair<AttributedGraph, std::vector<NodeId>> inject_structural_anomalies(
    const AttributedGraph& graph, std::size_t count, std::size_t clique_size, Rng& rng) {
  if (clique_size == 0) throw std::invalid_argument("inject_structural: clique_size must be positive");
  if (count % clique_size != 0)
    throw std::invalid_argument("inject_structural: count must be a multiple of clique_size");
  if (count > graph.num_nodes())
    throw std::invalid_argument("inject_structural: count exceeds node count");
  std::vector<NodeId> pool = non_anomalous_pool(graph);
  if (count > pool.size())
    throw std::invalid_argument("inject_structural: not enough non-anomalous nodes");
  if (count == 0) return {graph, {}};

  const std::vector<NodeId> chosen = rng.sample_without_replacement(std::move(pool), count);

  std::vector<Edge> edges = graph.edge_list();
  for (std::size_t g0 = 0; g0 < chosen.size(); g0 += clique_size)
    for (std::size_t i = g0; i < g0 + clique_size; ++i)
      for (std::size_t j = i + 1; j < g0 + clique_size; ++j)
        edges.emplace_back(chosen[i], chosen[j]);  // build() deduplicates

  std::vector<bool> truth =
      graph.has_truth() ? graph.truth() : std::vector<bool>(graph.num_nodes(), false);
  for (const NodeId v : chosen) truth[v] = true;

  AttributedGraph out = AttributedGraph::build(edges, graph.attributes(), graph.labels());
  out = out.with_truth(std::move(truth));
  return {std::move(out), chosen};
}

std::pair<AttributedGraph, std::vector<NodeId>> inject_attribute_anomalies(
    const AttributedGraph& graph, std::size_t count, Rng& rng, AttributeInjection mode,
    std::size_t candidates) {
  std::vector<NodeId> pool = non_anomalous_pool(graph);
  if (count > pool.size())
    throw std::invalid_argument("inject_attribute: not enough non-anomalous nodes");
  if (count == 0) return {graph, {}};

  const std::vector<NodeId> targets = rng.sample_without_replacement(pool, count);

  std::vector<bool> is_anomaly(graph.num_nodes(), false);
  for (NodeId v = 0; v < graph.num_nodes(); ++v) is_anomaly[v] = graph.is_true_anomaly(v);
  for (const NodeId v : targets) is_anomaly[v] = true;

  std::vector<NodeId> donor_pool;
  donor_pool.reserve(graph.num_nodes());
  for (NodeId v = 0; v < graph.num_nodes(); ++v)
    if (!is_anomaly[v]) donor_pool.push_back(v);
  if (donor_pool.empty()) throw std::invalid_argument("inject_attribute: no eligible donors");

  const DenseMatrix original = graph.attributes();  // donors read pre-injection rows
  DenseMatrix attrs = graph.attributes();
  const std::size_t d = attrs.cols();
  for (const NodeId target : targets) {
    NodeId donor;
    if (mode == AttributeInjection::CopyRandom) {
      donor = donor_pool[rng.uniform_below(donor_pool.size())];
    } else {
      const std::size_t k = std::min(std::max<std::size_t>(candidates, 1), donor_pool.size());
      const std::vector<NodeId> cands = rng.sample_without_replacement(donor_pool, k);
      donor = cands.front();
      double best = -1.0;
      for (const NodeId c : cands) {
        double dist = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          const double diff = original(c, j) - original(target, j);
          dist += diff * diff;
        }
        if (dist > best) {
          best = dist;
          donor = c;
        }
      }
    }
    std::copy(original.row(donor).begin(), original.row(donor).end(), attrs.row(target).begin());
  }

  std::vector<bool> truth =
      graph.has_truth() ? graph.truth() : std::vector<bool>(graph.num_nodes(), false);
  for (const NodeId v : targets) truth[v] = true;

  AttributedGraph out = graph.with_attributes(std::move(attrs)).with_truth(std::move(truth));
  return {std::move(out), targets};
}

AttributedGraph reveal_labels(const AttributedGraph& graph, double ratio, Rng& rng) {
  if (!(ratio > 0.0) || ratio > 1.0)
    throw std::invalid_argument("reveal_labels: ratio must be in (0, 1]");
  std::vector<NodeId> anomalies;
  for (NodeId v = 0; v < graph.num_nodes(); ++v)
    if (graph.is_true_anomaly(v)) anomalies.push_back(v);
  if (anomalies.empty()) throw std::invalid_argument("reveal_labels: graph has no true anomalies");

  const std::size_t k = static_cast<std::size_t>(
      std::ceil(ratio * static_cast<double>(anomalies.size())));
  const std::vector<NodeId> revealed = rng.sample_without_replacement(std::move(anomalies), k);

  std::vector<LabelType> labels(graph.num_nodes(), LabelType::X);
  for (const NodeId v : revealed) labels[v] = LabelType::O;
  return graph.with_labels(std::move(labels));
}

DatasetBundle inject_anomalies(const DatasetBundle& base, const InjectionConfig& config) {
  config.validate();
  DatasetBundle out = base;
  Rng structural_rng(derive_seed(config.seed, "inject-structural"));
  Rng attribute_rng(derive_seed(config.seed, "inject-attribute"));

  const std::size_t edges_before = out.graph.num_edges();
  auto [g1, structural_nodes] =
      inject_structural_anomalies(out.graph, config.num_structural, config.clique_size,
                                  structural_rng);
  auto [g2, attribute_nodes] = inject_attribute_anomalies(
      g1, config.num_attribute, attribute_rng, config.attribute_mode, config.attribute_candidates);
  out.graph = std::move(g2);

  out.provenance.set_u64("seed", config.seed);
  out.provenance.set_u64("clique_size", config.clique_size);
  out.provenance.set_u64("num_structural", config.num_structural);
  out.provenance.set_u64("num_attribute", config.num_attribute);
  out.provenance.set("attribute_mode",
                     config.attribute_mode == AttributeInjection::CopyRandom ? "copy" : "farthest");
  // Cliques may reuse existing edges; record how many were genuinely new.
  out.provenance.set_u64("edges_added", out.graph.num_edges() - edges_before);
  return out;
}

void save_dataset(const DatasetBundle& bundle, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const AttributedGraph& g = bundle.graph;

  {
    std::ofstream out(dir / "edges.txt");
    if (!out) throw std::runtime_error("cannot write " + (dir / "edges.txt").string());
    for (const auto& [u, v] : g.edge_list()) out << u << ' ' << v << '\n';
  }
  {
    std::ofstream out(dir / "attributes.txt");
    if (!out) throw std::runtime_error("cannot write " + (dir / "attributes.txt").string());
    std::string line;
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
      line.clear();
      const auto row = g.attributes().row(i);
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (j > 0) line += ' ';
        line += format_double(row[j]);
      }
      line += '\n';
      out << line;
    }
  }
  if (g.has_truth()) {
    std::ofstream out(dir / "truth.txt");
    if (!out) throw std::runtime_error("cannot write " + (dir / "truth.txt").string());
    for (NodeId v = 0; v < g.num_nodes(); ++v)
      if (g.truth()[v]) out << v << '\n';
  }
  {
    std::ofstream out(dir / "provenance.txt");
    if (!out) throw std::runtime_error("cannot write " + (dir / "provenance.txt").string());
    out << "name=" << bundle.name << '\n';
    for (const auto& [k, v] : bundle.provenance.entries()) out << k << '=' << v << '\n';
  }
}

DatasetBundle load_bundle(const std::filesystem::path& dir) {
  const std::filesystem::path truth = dir / "truth.txt";
  DatasetBundle bundle = load_dataset(dir / "edges.txt", dir / "attributes.txt",
                                      std::filesystem::exists(truth) ? truth
                                                                     : std::filesystem::path{});
  const std::filesystem::path prov_path = dir / "provenance.txt";
  if (std::filesystem::exists(prov_path)) {
    std::ifstream in = std::ifstream(prov_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (is_comment_or_blank(line)) continue;
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos) parse_fail(prov_path, line_no, "expected key=value");
      std::string value = line.substr(eq + 1);
      if (!value.empty() && value.back() == '\r') value.pop_back();
      const std::string key = line.substr(0, eq);
      if (key == "name")
        bundle.name = value;
      else
        bundle.provenance.set(key, value);
    }
  }
  return bundle;
}

}  // namespace mgad

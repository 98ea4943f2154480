#include "mgad/metapath.hpp"

#include <algorithm>
#include <stdexcept>

#include "mgad/parallel.hpp"

namespace mgad {

bool MetapathSchema::contains_anomaly_type() const {
  return std::find(pattern.begin(), pattern.end(), LabelType::O) != pattern.end();
}

std::string MetapathSchema::to_string() const {
  std::string s;
  s.reserve(pattern.size());
  for (const LabelType t : pattern) s += label_char(t);
  return s;
}

MetapathSchema parse_schema(const std::string& text, bool permissive) {
  if (text.empty()) throw std::invalid_argument("schema: empty pattern");
  MetapathSchema schema;
  schema.pattern.reserve(text.size());
  for (const char c : text) {
    switch (c) {
      case 'O':
      case 'o':
        schema.pattern.push_back(LabelType::O);
        break;
      case 'X':
      case 'x':
        schema.pattern.push_back(LabelType::X);
        break;
      default:
        throw std::invalid_argument(std::string("schema: illegal character '") + c +
                                    "' in \"" + text + "\"");
    }
  }
  if (!permissive && !schema.contains_anomaly_type())
    throw std::invalid_argument("schema \"" + text + "\" contains no O type");
  return schema;
}

std::vector<MetapathSchema> parse_schema_list(const std::string& text, bool permissive) {
  std::vector<MetapathSchema> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const std::string part = text.substr(start, end - start);
    if (!part.empty()) out.push_back(parse_schema(part, permissive));
    start = end + 1;
  }
  if (out.empty()) throw std::invalid_argument("schema list: no schemas given");
  return out;
}

MetapathSchema default_schema(std::size_t walk_length) {
  switch (walk_length) {
    case 3:
      return parse_schema("XOX");
    case 4:
      return parse_schema("XOOX");
    case 5:
      return parse_schema("XOXOX");
    default:
      throw std::invalid_argument("default_schema: walk length must be 3, 4, or 5");
  }
}

void SamplerConfig::validate() const {
  if (walks_per_node < 1 || walks_per_node > 5)
    throw std::invalid_argument("sampler: walks_per_node must be in [1, 5]");
  if (walk_length < 3 || walk_length > 5)
    throw std::invalid_argument("sampler: walk_length must be in [3, 5]");
  if (schemas.empty()) throw std::invalid_argument("sampler: at least one schema required");
  for (const auto& s : schemas)
    if (s.length() != walk_length)
      throw std::invalid_argument("sampler: schema " + s.to_string() + " length does not match walk_length");
}

std::optional<Walk> random_walk(const AttributedGraph& graph, NodeId start, std::size_t length,
                                Rng& rng, SamplerStats* stats) {
  if (start >= graph.num_nodes()) throw std::invalid_argument("random_walk: start out of range");
  if (length < 2) throw std::invalid_argument("random_walk: length must be at least 2");
  Walk walk;
  walk.nodes.reserve(length);
  walk.nodes.push_back(start);
  NodeId current = start;
  for (std::size_t step = 1; step < length; ++step) {
    const auto nb = graph.neighbors(current);
    if (nb.empty()) return std::nullopt;
    current = nb[rng.uniform_below(nb.size())];
    if (stats) ++stats->steps_taken;
    walk.nodes.push_back(current);
  }
  return walk;
}

std::optional<Walk> constrained_walk(const AttributedGraph& graph, NodeId start,
                                     const MetapathSchema& schema, Rng& rng, SamplerStats* stats) {
  if (start >= graph.num_nodes()) throw std::invalid_argument("constrained_walk: start out of range");
  if (schema.length() < 2) throw std::invalid_argument("constrained_walk: schema too short");
  if (graph.label(start) != schema.pattern[0]) return std::nullopt;
  Walk walk;
  walk.nodes.reserve(schema.length());
  walk.nodes.push_back(start);
  NodeId current = start;
  std::vector<NodeId> typed;
  for (std::size_t step = 1; step < schema.length(); ++step) {
    typed.clear();
    for (const NodeId u : graph.neighbors(current))
      if (graph.label(u) == schema.pattern[step]) typed.push_back(u);
    if (typed.empty()) return std::nullopt;
    current = typed[rng.uniform_below(typed.size())];
    if (stats) ++stats->steps_taken;
    walk.nodes.push_back(current);
  }
  return walk;
}

bool matches_schema(const Walk& walk, const std::vector<LabelType>& labels,
                    const MetapathSchema& schema) {
  if (walk.nodes.size() != schema.length())
    throw std::invalid_argument("matches_schema: walk/schema length mismatch");
  for (std::size_t i = 0; i < schema.length(); ++i)
    if (labels[walk.nodes[i]] != schema.pattern[i]) return false;
  return true;
}

AnomalySubgraph generate_anomaly_subgraph(const AttributedGraph& graph,
                                          const SamplerConfig& config, std::size_t threads) {
  config.validate();
  const std::size_t n = graph.num_nodes();
  std::vector<std::vector<Walk>> accepted_per_node(n);
  std::vector<SamplerStats> stats_per_node(n);

  parallel_for_rows(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t v = begin; v < end; ++v) {
      Rng rng(derive_seed(config.seed, "walks", v));
      SamplerStats& st = stats_per_node[v];
      for (std::size_t attempt = 0; attempt < config.walks_per_node; ++attempt) {
        ++st.walks_attempted;
        if (config.mode == SamplingMode::Rejection) {
          const auto walk =
              random_walk(graph, static_cast<NodeId>(v), config.walk_length, rng, &st);
          if (!walk) continue;
          for (const auto& schema : config.schemas) {
            if (matches_schema(*walk, graph.labels(), schema)) {
              accepted_per_node[v].push_back(*walk);
              ++st.walks_accepted;
              break;
            }
          }
        } else {
          for (const auto& schema : config.schemas) {
            if (graph.label(static_cast<NodeId>(v)) != schema.pattern[0]) continue;
            const auto walk = constrained_walk(graph, static_cast<NodeId>(v), schema, rng, &st);
            if (walk) {
              accepted_per_node[v].push_back(*walk);
              ++st.walks_accepted;
            }
            break;  // one attempt uses the first start-compatible schema
          }
        }
      }
    }
  });

  AnomalySubgraph result;
  result.schemas = config.schemas;
  std::vector<NodeId> node_set;
  for (std::size_t v = 0; v < n; ++v) {
    for (auto& w : accepted_per_node[v]) {
      node_set.insert(node_set.end(), w.nodes.begin(), w.nodes.end());
      result.walks.push_back(std::move(w));
    }
    result.stats.walks_attempted += stats_per_node[v].walks_attempted;
    result.stats.walks_accepted += stats_per_node[v].walks_accepted;
    result.stats.steps_taken += stats_per_node[v].steps_taken;
  }
  auto [sub, index_map] = induced_subgraph(graph, node_set);
  result.graph = std::move(sub);
  result.index_map = std::move(index_map);
  return result;
}

CsrMatrix typed_transition_probability(const AttributedGraph& graph, LabelType from_type,
                                       LabelType to_type) {
  const std::size_t n = graph.num_nodes();
  CsrMatrix m;
  m.rows = n;
  m.cols = n;
  m.row_ptr.assign(n + 1, 0);
  for (NodeId i = 0; i < n; ++i) {
    if (graph.label(i) == from_type) {
      std::size_t typed_degree = 0;
      for (const NodeId j : graph.neighbors(i))
        if (graph.label(j) == to_type) ++typed_degree;
      if (typed_degree > 0) {
        const double p = 1.0 / static_cast<double>(typed_degree);
        for (const NodeId j : graph.neighbors(i)) {
          if (graph.label(j) == to_type) {
            m.col_idx.push_back(j);
            m.values.push_back(p);
          }
        }
      }
    }
    m.row_ptr[i + 1] = m.col_idx.size();
  }
  return m;
}

}  // namespace mgad

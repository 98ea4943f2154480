#include "mgad/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mgad/parallel.hpp"

namespace mgad {

namespace {

CsrMatrix csr_from_adjacency_lists(std::vector<std::vector<NodeId>>& lists) {
  const std::size_t n = lists.size();
  CsrMatrix csr;
  csr.rows = n;
  csr.cols = n;
  csr.row_ptr.assign(n + 1, 0);
  std::size_t nnz = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto& l = lists[i];
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
    nnz += l.size();
    csr.row_ptr[i + 1] = nnz;
  }
  csr.col_idx.reserve(nnz);
  for (auto& l : lists) csr.col_idx.insert(csr.col_idx.end(), l.begin(), l.end());
  return csr;
}

}  // namespace

AttributedGraph AttributedGraph::build(const std::vector<Edge>& edges, DenseMatrix attributes,
                                       std::vector<LabelType> labels) {
  const std::size_t n = attributes.rows();
  if (labels.size() != n)
    throw std::invalid_argument("build: label count " + std::to_string(labels.size()) +
                                " does not match node count " + std::to_string(n));
  std::vector<std::vector<NodeId>> lists(n);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n)
      throw std::invalid_argument("build: edge (" + std::to_string(u) + "," + std::to_string(v) +
                                  ") out of range for n=" + std::to_string(n));
    if (u == v) continue;  // self-edges dropped
    lists[u].push_back(v);
    lists[v].push_back(u);
  }
  AttributedGraph g;
  g.adjacency_ = csr_from_adjacency_lists(lists);
  g.attributes_ = std::move(attributes);
  g.labels_ = std::move(labels);
  return g;
}

AttributedGraph AttributedGraph::build(const std::vector<Edge>& edges, DenseMatrix attributes) {
  std::vector<LabelType> labels(attributes.rows(), LabelType::X);
  return build(edges, std::move(attributes), std::move(labels));
}

std::span<const NodeId> AttributedGraph::neighbors(NodeId v) const {
  if (v >= num_nodes()) throw std::invalid_argument("neighbors: node out of range");
  return adjacency_.row_cols(v);
}

bool AttributedGraph::has_edge(NodeId u, NodeId v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> AttributedGraph::edge_list() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (NodeId u = 0; u < num_nodes(); ++u)
    for (const NodeId v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

std::size_t AttributedGraph::count_labeled_anomalies() const {
  std::size_t c = 0;
  for (const LabelType t : labels_)
    if (t == LabelType::O) ++c;
  return c;
}

std::size_t AttributedGraph::count_true_anomalies() const {
  if (!truth_) return 0;
  std::size_t c = 0;
  for (const bool b : *truth_)
    if (b) ++c;
  return c;
}

AttributedGraph AttributedGraph::with_labels(std::vector<LabelType> labels) const {
  if (labels.size() != num_nodes()) throw std::invalid_argument("with_labels: size mismatch");
  AttributedGraph g = *this;
  g.labels_ = std::move(labels);
  return g;
}

AttributedGraph AttributedGraph::with_truth(std::vector<bool> truth) const {
  if (truth.size() != num_nodes()) throw std::invalid_argument("with_truth: size mismatch");
  AttributedGraph g = *this;
  g.truth_ = std::move(truth);
  return g;
}

AttributedGraph AttributedGraph::with_attributes(DenseMatrix attributes) const {
  if (attributes.rows() != num_nodes())
    throw std::invalid_argument("with_attributes: row count mismatch");
  AttributedGraph g = *this;
  g.attributes_ = std::move(attributes);
  return g;
}

NormalizedAdjacency sym_normalize(const AttributedGraph& graph) {
  const std::size_t n = graph.num_nodes();
  std::vector<double> inv_sqrt_deg(n);
  for (NodeId v = 0; v < n; ++v)
    inv_sqrt_deg[v] = 1.0 / std::sqrt(1.0 + static_cast<double>(graph.degree(v)));

  CsrMatrix m;
  m.rows = n;
  m.cols = n;
  m.row_ptr.assign(n + 1, 0);
  m.col_idx.reserve(graph.adjacency().nnz() + n);
  m.values.reserve(graph.adjacency().nnz() + n);
  for (NodeId i = 0; i < n; ++i) {
    bool self_emitted = false;
    for (const NodeId j : graph.neighbors(i)) {
      if (!self_emitted && j > i) {
        m.col_idx.push_back(i);
        m.values.push_back(inv_sqrt_deg[i] * inv_sqrt_deg[i]);
        self_emitted = true;
      }
      m.col_idx.push_back(j);
      m.values.push_back(inv_sqrt_deg[i] * inv_sqrt_deg[j]);
    }
    if (!self_emitted) {
      m.col_idx.push_back(i);
      m.values.push_back(inv_sqrt_deg[i] * inv_sqrt_deg[i]);
    }
    m.row_ptr[i + 1] = m.col_idx.size();
  }
  return NormalizedAdjacency{std::move(m)};
}

std::pair<AttributedGraph, std::vector<NodeId>> induced_subgraph(const AttributedGraph& graph,
                                                                 std::span<const NodeId> nodes) {
  std::vector<NodeId> index_map(nodes.begin(), nodes.end());
  std::sort(index_map.begin(), index_map.end());
  index_map.erase(std::unique(index_map.begin(), index_map.end()), index_map.end());
  if (!index_map.empty() && index_map.back() >= graph.num_nodes())
    throw std::invalid_argument("induced_subgraph: node out of range");

  const std::size_t k = index_map.size();
  const std::size_t d = graph.attribute_dim();
  std::vector<NodeId> parent_to_sub(graph.num_nodes(), static_cast<NodeId>(-1));
  for (std::size_t s = 0; s < k; ++s) parent_to_sub[index_map[s]] = static_cast<NodeId>(s);

  std::vector<Edge> edges;
  DenseMatrix attrs(k, d);
  std::vector<LabelType> labels(k);
  std::vector<bool> truth(k, false);
  for (std::size_t s = 0; s < k; ++s) {
    const NodeId p = index_map[s];
    std::copy(graph.attributes().row(p).begin(), graph.attributes().row(p).end(),
              attrs.row(s).begin());
    labels[s] = graph.label(p);
    if (graph.has_truth()) truth[s] = graph.truth()[p];
    for (const NodeId q : graph.neighbors(p)) {
      const NodeId t = parent_to_sub[q];
      if (t != static_cast<NodeId>(-1) && static_cast<NodeId>(s) < t)
        edges.emplace_back(static_cast<NodeId>(s), t);
    }
  }
  AttributedGraph sub = AttributedGraph::build(edges, std::move(attrs), std::move(labels));
  if (graph.has_truth()) sub = sub.with_truth(std::move(truth));
  return {std::move(sub), std::move(index_map)};
}

DenseMatrix spmm(const CsrMatrix& sparse, const DenseMatrix& dense, std::size_t threads) {
  if (sparse.cols != dense.rows()) throw std::invalid_argument("spmm: dimension mismatch");
  const std::size_t c = dense.cols();
  DenseMatrix out(sparse.rows, c);
  parallel_for_rows(sparse.rows, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double* oi = out.data() + i * c;
      const auto cols = sparse.row_cols(i);
      const auto vals = sparse.row_vals(i);
      for (std::size_t e = 0; e < cols.size(); ++e) {
        const double w = vals[e];
        const double* dj = dense.data() + static_cast<std::size_t>(cols[e]) * c;
        for (std::size_t j = 0; j < c; ++j) oi[j] += w * dj[j];
      }
    }
  });
  return out;
}

}  // namespace mgad

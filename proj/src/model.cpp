#include "mgad/model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "mgad/io_util.hpp"
#include "mgad/parallel.hpp"

namespace mgad {

namespace {

void check_dims(const std::vector<std::size_t>& dims, const char* what) {
  if (dims.empty()) throw std::invalid_argument(std::string(what) + ": empty dimension list");
  for (const std::size_t d : dims)
    if (d == 0) throw std::invalid_argument(std::string(what) + ": zero layer dimension");
}

std::vector<GCNLayer> make_chain(const std::string& name, std::size_t input_dim,
                                 const std::vector<std::size_t>& dims, Activation final_act,
                                 Rng& rng) {
  std::vector<GCNLayer> chain;
  chain.reserve(dims.size());
  std::size_t in = input_dim;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    GCNLayer layer;
    layer.weight = Parameter(name + "." + std::to_string(i), xavier_init(in, dims[i], rng));
    layer.activation = (i + 1 == dims.size()) ? final_act : Activation::ReLU;
    chain.push_back(std::move(layer));
    in = dims[i];
  }
  return chain;
}

DenseMatrix run_chain(const std::vector<GCNLayer>& chain, const NormalizedAdjacency& adj,
                      const DenseMatrix& input, std::vector<GCNCache>* caches,
                      std::size_t threads) {
  std::vector<GCNCache> local;
  std::vector<GCNCache>& cs = caches ? *caches : local;
  cs.assign(chain.size(), GCNCache{});
  DenseMatrix h = input;
  for (std::size_t i = 0; i < chain.size(); ++i)
    h = gcn_forward(adj, h, chain[i], cs[i], threads);
  return h;
}

DenseMatrix backward_chain(std::vector<GCNLayer>& chain, const NormalizedAdjacency& adj,
                           const std::vector<GCNCache>& caches, DenseMatrix grad,
                           std::size_t threads) {
  for (std::size_t i = chain.size(); i-- > 0;)
    grad = gcn_backward(adj, chain[i], caches[i], std::move(grad), threads);
  return grad;
}

}  // namespace

SamplerConfig MGADConfig::resolved_sampler() const {
  SamplerConfig s = sampler;
  if (s.schemas.empty()) s.schemas = {default_schema(s.walk_length)};
  s.seed = derive_seed(seed, "sampler");
  return s;
}

void MGADConfig::validate() const {
  if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("config: alpha must be in [0, 1]");
  check_dims(graph_encoder_dims, "graph_encoder_dims");
  check_dims(subgraph_encoder_dims, "subgraph_encoder_dims");
  for (const std::size_t d : attr_decoder_hidden)
    if (d == 0) throw std::invalid_argument("attr_decoder_hidden: zero layer dimension");
  if (block_size == 0) throw std::invalid_argument("config: block_size must be positive");
  if (!(reveal_ratio > 0.0) || reveal_ratio > 1.0)
    throw std::invalid_argument("config: reveal_ratio must be in (0, 1]");
  if (threads == 0) throw std::invalid_argument("config: threads must be positive");
  resolved_sampler().validate();
}

std::vector<Parameter*> MGADModel::parameters() {
  std::vector<Parameter*> out;
  for (auto* chain : {&graph_encoder, &subgraph_encoder, &attr_decoder})
    for (auto& layer : *chain) out.push_back(&layer.weight);
  return out;
}

void MGADModel::zero_grads() {
  for (Parameter* p : parameters()) p->zero_grad();
}

MGADModel init_model(const MGADConfig& config, std::size_t attribute_dim, Rng& rng) {
  config.validate();
  if (attribute_dim == 0) throw std::invalid_argument("init_model: attribute_dim must be positive");
  MGADModel model;
  model.graph_encoder =
      make_chain("graph_encoder", attribute_dim, config.graph_encoder_dims, Activation::Identity, rng);
  model.subgraph_encoder = make_chain("subgraph_encoder", attribute_dim,
                                      config.subgraph_encoder_dims, Activation::Identity, rng);
  std::vector<std::size_t> dec_dims = config.attr_decoder_hidden;
  dec_dims.push_back(attribute_dim);
  model.attr_decoder =
      make_chain("attr_decoder", config.fused_dim(), dec_dims,
                 config.attr_decoder_sigmoid ? Activation::Sigmoid : Activation::Identity, rng);
  return model;
}

ForwardContext::ForwardContext(const AttributedGraph& g, const AnomalySubgraph& s,
                               std::size_t threads)
    : graph(&g), subgraph(&s), adj(sym_normalize(g)), threads(threads) {
  if (!s.empty()) sub_adj = sym_normalize(s.graph);
}

DenseMatrix encode_graph(const MGADModel& model, const NormalizedAdjacency& adj,
                         const DenseMatrix& attributes, std::vector<GCNCache>* caches,
                         std::size_t threads) {
  return run_chain(model.graph_encoder, adj, attributes, caches, threads);
}

DenseMatrix encode_subgraph(const MGADModel& model, const AnomalySubgraph& subgraph,
                            const NormalizedAdjacency& sub_adj, std::size_t parent_n,
                            DenseMatrix* h_sub_out, std::vector<GCNCache>* caches,
                            std::size_t threads) {
  const std::size_t d_s = model.subgraph_encoder.back().d_out();
  DenseMatrix lifted(parent_n, d_s);
  if (subgraph.empty()) {
    if (h_sub_out) *h_sub_out = DenseMatrix();
    return lifted;
  }
  DenseMatrix h =
      run_chain(model.subgraph_encoder, sub_adj, subgraph.graph.attributes(), caches, threads);
  for (std::size_t j = 0; j < subgraph.index_map.size(); ++j) {
    const NodeId parent = subgraph.index_map[j];
    if (parent >= parent_n) throw std::invalid_argument("encode_subgraph: index map out of range");
    std::copy(h.row(j).begin(), h.row(j).end(), lifted.row(parent).begin());
  }
  if (h_sub_out) *h_sub_out = std::move(h);
  return lifted;
}

DenseMatrix fuse(const DenseMatrix& left, const DenseMatrix& right) {
  if (left.rows() != right.rows()) throw std::invalid_argument("fuse: row counts differ");
  DenseMatrix z(left.rows(), left.cols() + right.cols());
  for (std::size_t i = 0; i < left.rows(); ++i) {
    double* zi = z.data() + i * z.cols();
    std::copy(left.row(i).begin(), left.row(i).end(), zi);
    std::copy(right.row(i).begin(), right.row(i).end(), zi + left.cols());
  }
  return z;
}

DenseMatrix decode_structure_block(const DenseMatrix& z, std::size_t row_begin,
                                   std::size_t row_end, std::size_t threads) {
  DenseMatrix block = matmul_a_bt_rows(z, row_begin, row_end, z, threads);
  double* p = block.data();
  for (std::size_t i = 0; i < block.size(); ++i) p[i] = sigmoid(p[i]);
  return block;
}

DenseMatrix decode_attributes(const MGADModel& model, const NormalizedAdjacency& adj,
                              const DenseMatrix& z, std::vector<GCNCache>* caches,
                              std::size_t threads) {
  return run_chain(model.attr_decoder, adj, z, caches, threads);
}

ForwardPass forward(const MGADModel& model, const ForwardContext& ctx) {
  ForwardPass fwd;
  fwd.z_graph = encode_graph(model, ctx.adj, ctx.graph->attributes(), &fwd.graph_caches,
                             ctx.threads);
  fwd.h_lifted = encode_subgraph(model, *ctx.subgraph, ctx.sub_adj, ctx.graph->num_nodes(),
                                 &fwd.h_sub, &fwd.sub_caches, ctx.threads);
  fwd.z = fuse(fwd.z_graph, fwd.h_lifted);
  fwd.x_hat = decode_attributes(model, ctx.adj, fwd.z, &fwd.dec_caches, ctx.threads);
  return fwd;
}

StructureDecode decode_structure_streamed(const AttributedGraph& graph, const DenseMatrix& z,
                                          std::size_t block_size, std::size_t threads,
                                          bool want_grad, bool want_rows) {
  const std::size_t n = graph.num_nodes();
  if (z.rows() != n) throw std::invalid_argument("decode_structure: Z row count mismatch");
  if (block_size == 0) throw std::invalid_argument("decode_structure: block_size must be positive");
  StructureDecode out;
  if (want_grad) out.dz_term = DenseMatrix::zeros(n, z.cols());
  if (want_rows) out.row_residual_sq.assign(n, 0.0);

  DenseMatrix gblock;  // (ahat - a) * sigmoid'(m), reused per block
  for (std::size_t begin = 0; begin < n; begin += block_size) {
    const std::size_t end = std::min(begin + block_size, n);
    const std::size_t rows = end - begin;
    // m = Z[begin:end] Z^T
    DenseMatrix m = matmul_a_bt_rows(z, begin, end, z, threads);
    if (want_grad) gblock = DenseMatrix(rows, n);

    std::vector<double> block_loss(rows, 0.0);
    parallel_for_rows(rows, threads, [&](std::size_t r0, std::size_t r1) {
      for (std::size_t r = r0; r < r1; ++r) {
        const NodeId i = static_cast<NodeId>(begin + r);
        const double* mi = m.data() + r * n;
        double* gi = want_grad ? gblock.data() + r * n : nullptr;
        const auto nbrs = graph.neighbors(i);
        std::size_t e = 0;
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          double a = 0.0;
          if (e < nbrs.size() && nbrs[e] == j) {
            a = 1.0;
            ++e;
          }
          const double s = sigmoid(mi[j]);
          const double diff = s - a;
          acc += diff * diff;
          if (gi) gi[j] = diff * s * (1.0 - s);
        }
        block_loss[r] = acc;
      }
    });
    for (std::size_t r = 0; r < rows; ++r) {
      out.loss_sq += block_loss[r];
      if (want_rows) out.row_residual_sq[begin + r] = block_loss[r];
    }
    if (want_grad) {
      // d(loss_sq)/dZ over this row block: rows get 4 * G_block * Z
      // (factor 2 from the squared error, 2 from Z Z^T symmetry).
      DenseMatrix dz_rows = matmul(gblock, z, threads);
      parallel_for_rows(rows, threads, [&](std::size_t r0, std::size_t r1) {
        for (std::size_t r = r0; r < r1; ++r) {
          double* dst = out.dz_term.data() + (begin + r) * z.cols();
          const double* src = dz_rows.data() + r * z.cols();
          for (std::size_t c = 0; c < z.cols(); ++c) dst[c] += 4.0 * src[c];
        }
      });
    }
  }
  return out;
}

LossBreakdown loss(const AttributedGraph& graph, const ForwardPass& fwd, double alpha,
                   std::size_t block_size, std::size_t threads) {
  LossBreakdown lb;
  if (alpha < 1.0) {
    lb.structure_sq =
        decode_structure_streamed(graph, fwd.z, block_size, threads, false, false).loss_sq;
  }
  lb.attribute_sq = frobenius_sq_diff(graph.attributes(), fwd.x_hat);
  lb.total = (1.0 - alpha) * lb.structure_sq + alpha * lb.attribute_sq;
  if (!std::isfinite(lb.total)) throw std::runtime_error("loss: non-finite value");
  return lb;
}

namespace {

// Shared by backward() and the training loop; dz_struct is d(loss_sq)/dZ.
void backward_from_dz(const AttributedGraph& graph, MGADModel& model, const ForwardContext& ctx,
                      ForwardPass& fwd, double alpha, const DenseMatrix* dz_struct_term) {
  const std::size_t n = graph.num_nodes();
  const std::size_t d_g = model.graph_encoder.back().d_out();
  const std::size_t d_s = model.subgraph_encoder.back().d_out();

  // Attribute decoder path: dL/dXhat = 2 alpha (Xhat - X).
  DenseMatrix dz(n, d_g + d_s);
  if (alpha > 0.0) {
    DenseMatrix dxhat(fwd.x_hat.rows(), fwd.x_hat.cols());
    const double* xh = fwd.x_hat.data();
    const double* x = graph.attributes().data();
    double* g = dxhat.data();
    for (std::size_t i = 0; i < dxhat.size(); ++i) g[i] = 2.0 * alpha * (xh[i] - x[i]);
    dz = backward_chain(model.attr_decoder, ctx.adj, fwd.dec_caches, std::move(dxhat),
                        ctx.threads);
  }

  // Structure decoder path.
  if (alpha < 1.0 && dz_struct_term != nullptr) {
    const double w = 1.0 - alpha;
    const double* src = dz_struct_term->data();
    double* dst = dz.data();
    for (std::size_t i = 0; i < dz.size(); ++i) dst[i] += w * src[i];
  }

  // Split the fused gradient between the two encoders.
  DenseMatrix dz_graph(n, d_g);
  DenseMatrix dh_lifted(n, d_s);
  for (std::size_t i = 0; i < n; ++i) {
    const double* zi = dz.data() + i * (d_g + d_s);
    std::copy(zi, zi + d_g, dz_graph.data() + i * d_g);
    std::copy(zi + d_g, zi + d_g + d_s, dh_lifted.data() + i * d_s);
  }

  backward_chain(model.graph_encoder, ctx.adj, fwd.graph_caches, std::move(dz_graph), ctx.threads);

  if (ctx.has_subgraph()) {
    const auto& index_map = ctx.subgraph->index_map;
    DenseMatrix dh_sub(index_map.size(), d_s);
    for (std::size_t j = 0; j < index_map.size(); ++j)
      std::copy(dh_lifted.row(index_map[j]).begin(), dh_lifted.row(index_map[j]).end(),
                dh_sub.row(j).begin());
    backward_chain(model.subgraph_encoder, ctx.sub_adj, fwd.sub_caches, std::move(dh_sub),
                   ctx.threads);
  }
}

}  // namespace

void backward(const AttributedGraph& graph, MGADModel& model, const ForwardContext& ctx,
              ForwardPass& fwd, double alpha, std::size_t block_size) {
  if (fwd.z.empty()) throw std::runtime_error("backward: no forward pass");
  if (alpha < 1.0) {
    const StructureDecode sd =
        decode_structure_streamed(graph, fwd.z, block_size, ctx.threads, true, false);
    backward_from_dz(graph, model, ctx, fwd, alpha, &sd.dz_term);
  } else {
    backward_from_dz(graph, model, ctx, fwd, alpha, nullptr);
  }
}

std::pair<MGADModel, TrainHistory> train(const AttributedGraph& graph,
                                         const AnomalySubgraph& subgraph,
                                         const MGADConfig& config) {
  config.validate();
  Rng init_rng(derive_seed(config.seed, "init"));
  MGADModel model = init_model(config, graph.attribute_dim(), init_rng);
  TrainHistory history;
  if (config.epochs == 0) return {std::move(model), std::move(history)};

  ForwardContext ctx(graph, subgraph, config.threads);
  AdamState adam(config.optimizer);
  std::vector<Parameter*> params = model.parameters();
  history.losses.reserve(config.epochs);
  history.epoch_seconds.reserve(config.epochs);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    ForwardPass fwd = forward(model, ctx);

    double total;
    if (config.alpha < 1.0) {
      // One streamed pass serves both the loss value and the Z gradient.
      const StructureDecode sd = decode_structure_streamed(graph, fwd.z, config.block_size,
                                                           config.threads, true, false);
      const double attr_sq = frobenius_sq_diff(graph.attributes(), fwd.x_hat);
      total = (1.0 - config.alpha) * sd.loss_sq + config.alpha * attr_sq;
      if (!std::isfinite(total))
        throw std::runtime_error("train: non-finite loss at epoch " + std::to_string(epoch));
      backward_from_dz(graph, model, ctx, fwd, config.alpha, &sd.dz_term);
    } else {
      const double attr_sq = frobenius_sq_diff(graph.attributes(), fwd.x_hat);
      total = attr_sq;
      if (!std::isfinite(total))
        throw std::runtime_error("train: non-finite loss at epoch " + std::to_string(epoch));
      backward_from_dz(graph, model, ctx, fwd, config.alpha, nullptr);
    }

    adam.step(params);
    const auto t1 = std::chrono::steady_clock::now();
    history.losses.push_back(total);
    history.epoch_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  return {std::move(model), std::move(history)};
}

std::vector<NodeId> rank_by_score(const std::vector<double>& scores) {
  std::vector<NodeId> ranking(scores.size());
  std::iota(ranking.begin(), ranking.end(), NodeId{0});
  std::stable_sort(ranking.begin(), ranking.end(), [&](NodeId a, NodeId b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  return ranking;
}

ScoreReport anomaly_scores(const AttributedGraph& graph, const MGADModel& model,
                           const AnomalySubgraph& subgraph, double alpha, std::size_t block_size,
                           std::size_t threads) {
  ForwardContext ctx(graph, subgraph, threads);
  const ForwardPass fwd = forward(model, ctx);
  const std::size_t n = graph.num_nodes();

  const StructureDecode sd =
      decode_structure_streamed(graph, fwd.z, block_size, threads, false, true);

  ScoreReport report;
  report.scores.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double attr_sq = 0.0;
    const auto xi = graph.attributes().row(i);
    const auto xh = fwd.x_hat.row(i);
    for (std::size_t j = 0; j < xi.size(); ++j) {
      const double d = xi[j] - xh[j];
      attr_sq += d * d;
    }
    report.scores[i] =
        (1.0 - alpha) * std::sqrt(sd.row_residual_sq[i]) + alpha * std::sqrt(attr_sq);
  }
  report.ranking = rank_by_score(report.scores);
  return report;
}

// ---------------------------------------------------------------------------
// Config and checkpoint serialization
// ---------------------------------------------------------------------------

namespace {

std::string join_sizes(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const std::string part = text.substr(start, end - start);
    if (!part.empty()) {
      std::uint64_t v;
      if (!parse_u64(part, v)) throw std::invalid_argument("bad dimension list: " + text);
      out.push_back(static_cast<std::size_t>(v));
    }
    start = end + 1;
  }
  return out;
}

std::string join_schemas(const std::vector<MetapathSchema>& schemas) {
  std::string s;
  for (std::size_t i = 0; i < schemas.size(); ++i) {
    if (i > 0) s += ',';
    s += schemas[i].to_string();
  }
  return s;
}

std::uint64_t parse_u64_or_throw(const std::string& key, const std::string& value) {
  std::uint64_t v;
  if (!parse_u64(value, v))
    throw std::invalid_argument("config: bad integer for '" + key + "': " + value);
  return v;
}

double parse_double_or_throw(const std::string& key, const std::string& value) {
  double v;
  if (!parse_double(value, v))
    throw std::invalid_argument("config: bad number for '" + key + "': " + value);
  return v;
}

bool parse_bool_or_throw(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("config: bad boolean for '" + key + "': " + value);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> config_to_entries(const MGADConfig& config) {
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("alpha", format_double(config.alpha));
  e.emplace_back("graph_encoder_dims", join_sizes(config.graph_encoder_dims));
  e.emplace_back("subgraph_encoder_dims", join_sizes(config.subgraph_encoder_dims));
  e.emplace_back("attr_decoder_dims", join_sizes(config.attr_decoder_hidden));
  e.emplace_back("epochs", std::to_string(config.epochs));
  e.emplace_back("learning_rate", format_double(config.optimizer.learning_rate));
  e.emplace_back("beta1", format_double(config.optimizer.beta1));
  e.emplace_back("beta2", format_double(config.optimizer.beta2));
  e.emplace_back("epsilon", format_double(config.optimizer.epsilon));
  e.emplace_back("walks_per_node", std::to_string(config.sampler.walks_per_node));
  e.emplace_back("walk_length", std::to_string(config.sampler.walk_length));
  e.emplace_back("schemas", config.sampler.schemas.empty()
                                ? std::string("default")
                                : join_schemas(config.sampler.schemas));
  e.emplace_back("sampler_mode",
                 config.sampler.mode == SamplingMode::Rejection ? "rejection" : "constrained");
  e.emplace_back("reveal_ratio", format_double(config.reveal_ratio));
  e.emplace_back("seed", std::to_string(config.seed));
  e.emplace_back("block_size", std::to_string(config.block_size));
  e.emplace_back("attr_decoder_sigmoid", config.attr_decoder_sigmoid ? "true" : "false");
  e.emplace_back("threads", std::to_string(config.threads));
  return e;
}

void apply_config_entry(MGADConfig& config, const std::string& key, const std::string& value) {
  if (key == "alpha")
    config.alpha = parse_double_or_throw(key, value);
  else if (key == "graph_encoder_dims")
    config.graph_encoder_dims = parse_sizes(value);
  else if (key == "subgraph_encoder_dims")
    config.subgraph_encoder_dims = parse_sizes(value);
  else if (key == "attr_decoder_dims")
    config.attr_decoder_hidden = parse_sizes(value);
  else if (key == "epochs")
    config.epochs = parse_u64_or_throw(key, value);
  else if (key == "learning_rate")
    config.optimizer.learning_rate = parse_double_or_throw(key, value);
  else if (key == "beta1")
    config.optimizer.beta1 = parse_double_or_throw(key, value);
  else if (key == "beta2")
    config.optimizer.beta2 = parse_double_or_throw(key, value);
  else if (key == "epsilon")
    config.optimizer.epsilon = parse_double_or_throw(key, value);
  else if (key == "walks_per_node")
    config.sampler.walks_per_node = parse_u64_or_throw(key, value);
  else if (key == "walk_length")
    config.sampler.walk_length = parse_u64_or_throw(key, value);
  else if (key == "schemas")
    config.sampler.schemas = (value == "default") ? std::vector<MetapathSchema>{}
                                                  : parse_schema_list(value);
  else if (key == "sampler_mode") {
    if (value == "rejection")
      config.sampler.mode = SamplingMode::Rejection;
    else if (value == "constrained")
      config.sampler.mode = SamplingMode::Constrained;
    else
      throw std::invalid_argument("config: bad sampler_mode: " + value);
  } else if (key == "reveal_ratio")
    config.reveal_ratio = parse_double_or_throw(key, value);
  else if (key == "seed")
    config.seed = parse_u64_or_throw(key, value);
  else if (key == "block_size")
    config.block_size = parse_u64_or_throw(key, value);
  else if (key == "attr_decoder_sigmoid")
    config.attr_decoder_sigmoid = parse_bool_or_throw(key, value);
  else if (key == "threads")
    config.threads = parse_u64_or_throw(key, value);
  else
    throw std::invalid_argument("config: unknown key '" + key + "'");
}

namespace {

constexpr char kCheckpointMagic[8] = {'M', 'G', 'A', 'D', 'C', 'K', 'P', '1'};

void write_u64(std::ofstream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint64_t read_u64(std::ifstream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

void write_chain(std::ofstream& out, const std::vector<GCNLayer>& chain) {
  write_u64(out, chain.size());
  for (const auto& layer : chain) {
    write_u64(out, layer.d_in());
    write_u64(out, layer.d_out());
    const std::uint8_t act = static_cast<std::uint8_t>(layer.activation);
    out.write(reinterpret_cast<const char*>(&act), 1);
    out.write(reinterpret_cast<const char*>(layer.weight.value.data()),
              static_cast<std::streamsize>(layer.weight.value.size() * sizeof(double)));
  }
}

std::vector<GCNLayer> read_chain(std::ifstream& in, const std::string& name) {
  const std::uint64_t count = read_u64(in);
  std::vector<GCNLayer> chain;
  chain.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t d_in = read_u64(in);
    const std::uint64_t d_out = read_u64(in);
    std::uint8_t act = 0;
    in.read(reinterpret_cast<char*>(&act), 1);
    DenseMatrix w(d_in, d_out);
    in.read(reinterpret_cast<char*>(w.data()),
            static_cast<std::streamsize>(w.size() * sizeof(double)));
    GCNLayer layer;
    layer.weight = Parameter(name + "." + std::to_string(i), std::move(w));
    layer.activation = static_cast<Activation>(act);
    chain.push_back(std::move(layer));
  }
  return chain;
}

}  // namespace

void save_checkpoint(const MGADModel& model, const MGADConfig& config,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path.string());
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  std::string cfg;
  for (const auto& [k, v] : config_to_entries(config)) cfg += k + "=" + v + "\n";
  write_u64(out, cfg.size());
  out.write(cfg.data(), static_cast<std::streamsize>(cfg.size()));
  write_chain(out, model.graph_encoder);
  write_chain(out, model.subgraph_encoder);
  write_chain(out, model.attr_decoder);
  if (!out) throw std::runtime_error("checkpoint write failed: " + path.string());
}

std::pair<MGADModel, MGADConfig> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
    throw std::runtime_error("bad checkpoint magic in " + path.string());
  const std::uint64_t cfg_len = read_u64(in);
  std::string cfg(cfg_len, '\0');
  in.read(cfg.data(), static_cast<std::streamsize>(cfg_len));
  MGADConfig config;
  std::size_t start = 0;
  while (start < cfg.size()) {
    std::size_t end = cfg.find('\n', start);
    if (end == std::string::npos) end = cfg.size();
    const std::string line = cfg.substr(start, end - start);
    const std::size_t eq = line.find('=');
    if (eq != std::string::npos)
      apply_config_entry(config, line.substr(0, eq), line.substr(eq + 1));
    start = end + 1;
  }
  MGADModel model;
  model.graph_encoder = read_chain(in, "graph_encoder");
  model.subgraph_encoder = read_chain(in, "subgraph_encoder");
  model.attr_decoder = read_chain(in, "attr_decoder");
  if (!in) throw std::runtime_error("truncated checkpoint " + path.string());
  return {std::move(model), std::move(config)};
}

void write_matrix_text(const DenseMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  std::string line;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    line.clear();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) line += ' ';
      line += format_double(m(i, j));
    }
    line += '\n';
    out << line;
  }
}

}  // namespace mgad

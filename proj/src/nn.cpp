#include "mgad/nn.hpp"

#include <cmath>
#include <stdexcept>

namespace mgad {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double relu(double x) { return x > 0.0 ? x : 0.0; }

double sigmoid_derivative_from_pre(double x) {
  const double s = sigmoid(x);
  return s * (1.0 - s);
}

double relu_derivative_from_pre(double x) { return x > 0.0 ? 1.0 : 0.0; }

void apply_activation(Activation act, const DenseMatrix& pre, DenseMatrix& out) {
  out = pre;
  double* p = out.data();
  switch (act) {
    case Activation::Identity:
      break;
    case Activation::ReLU:
      for (std::size_t i = 0; i < out.size(); ++i) p[i] = relu(p[i]);
      break;
    case Activation::Sigmoid:
      for (std::size_t i = 0; i < out.size(); ++i) p[i] = sigmoid(p[i]);
      break;
  }
}

void apply_activation_derivative(Activation act, const DenseMatrix& pre, DenseMatrix& grad) {
  if (!pre.same_shape(grad))
    throw std::invalid_argument("apply_activation_derivative: shape mismatch");
  double* g = grad.data();
  const double* p = pre.data();
  switch (act) {
    case Activation::Identity:
      break;
    case Activation::ReLU:
      for (std::size_t i = 0; i < grad.size(); ++i) g[i] *= relu_derivative_from_pre(p[i]);
      break;
    case Activation::Sigmoid:
      for (std::size_t i = 0; i < grad.size(); ++i) g[i] *= sigmoid_derivative_from_pre(p[i]);
      break;
  }
}

DenseMatrix gcn_forward(const NormalizedAdjacency& adj, const DenseMatrix& h_in,
                        const GCNLayer& layer, GCNCache& cache, std::size_t threads) {
  if (h_in.cols() != layer.d_in()) throw std::invalid_argument("gcn_forward: feature dim mismatch");
  if (adj.dim() != h_in.rows()) throw std::invalid_argument("gcn_forward: adjacency dim mismatch");
  cache.sh = spmm(adj, h_in, threads);
  cache.pre = matmul(cache.sh, layer.weight.value, threads);
  DenseMatrix out;
  apply_activation(layer.activation, cache.pre, out);
  return out;
}

DenseMatrix gcn_backward(const NormalizedAdjacency& adj, GCNLayer& layer, const GCNCache& cache,
                         DenseMatrix grad_out, std::size_t threads) {
  if (cache.pre.empty()) throw std::runtime_error("gcn_backward: no forward cache");
  if (!grad_out.same_shape(cache.pre))
    throw std::invalid_argument("gcn_backward: grad shape mismatch");
  // dPre = grad_out (.) act'(pre)
  apply_activation_derivative(layer.activation, cache.pre, grad_out);
  // dW += (S H_in)^T dPre
  add_inplace(layer.weight.grad, matmul_at_b(cache.sh, grad_out));
  // dH_in = S^T (dPre W^T); S is symmetric so S^T = S.
  DenseMatrix dpre_wt(grad_out.rows(), layer.d_in());
  const DenseMatrix& w = layer.weight.value;
  for (std::size_t i = 0; i < grad_out.rows(); ++i) {
    const double* gi = grad_out.data() + i * layer.d_out();
    double* oi = dpre_wt.data() + i * layer.d_in();
    for (std::size_t k = 0; k < layer.d_in(); ++k) {
      const double* wk = w.data() + k * layer.d_out();
      double s = 0.0;
      for (std::size_t j = 0; j < layer.d_out(); ++j) s += gi[j] * wk[j];
      oi[k] = s;
    }
  }
  return spmm(adj, dpre_wt, threads);
}

DenseMatrix xavier_init(std::size_t d_in, std::size_t d_out, Rng& rng) {
  if (d_in == 0 || d_out == 0) throw std::invalid_argument("xavier_init: zero dimension");
  const double a = std::sqrt(6.0 / static_cast<double>(d_in + d_out));
  DenseMatrix w(d_in, d_out);
  double* p = w.data();
  for (std::size_t i = 0; i < w.size(); ++i) p[i] = rng.uniform(-a, a);
  return w;
}

void AdamState::step(std::vector<Parameter*>& params) {
  if (m_.empty()) {
    for (const Parameter* p : params) {
      m_.emplace_back(DenseMatrix::zeros(p->value.rows(), p->value.cols()));
      v_.emplace_back(DenseMatrix::zeros(p->value.rows(), p->value.cols()));
    }
  }
  if (m_.size() != params.size()) throw std::invalid_argument("AdamState: parameter list changed");
  ++step_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double bias1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double bias2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    if (!all_finite(p.grad))
      throw std::runtime_error("adam_step: non-finite gradient in parameter '" + p.name + "'");
    double* w = p.value.data();
    double* g = p.grad.data();
    double* m = m_[k].data();
    double* v = v_[k].data();
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double mhat = m[i] / bias1;
      const double vhat = v[i] / bias2;
      w[i] -= config_.learning_rate * mhat / (std::sqrt(vhat) + config_.epsilon);
    }
    p.zero_grad();
  }
}

double finite_difference_check(const std::function<double()>& loss, std::vector<Parameter*>& params,
                               double eps, double scale, std::size_t max_coords_per_param) {
  // Snapshot analytic gradients: evaluating the loss may not touch them, but
  // the caller's backward pass already filled them in.
  double max_rel = 0.0;
  for (Parameter* p : params) {
    const std::size_t total = p->value.size();
    std::size_t stride = 1;
    if (max_coords_per_param > 0 && total > max_coords_per_param)
      stride = (total + max_coords_per_param - 1) / max_coords_per_param;
    for (std::size_t i = 0; i < total; i += stride) {
      double* w = p->value.data() + i;
      const double saved = *w;
      *w = saved + eps;
      const double lp = loss();
      *w = saved - eps;
      const double lm = loss();
      *w = saved;
      const double fd = (lp - lm) / (2.0 * eps);
      const double g = p->grad.data()[i];
      const double denom = std::max({std::abs(fd), std::abs(g), scale});
      max_rel = std::max(max_rel, std::abs(fd - g) / denom);
    }
  }
  return max_rel;
}

}  // namespace mgad

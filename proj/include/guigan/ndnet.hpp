#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "guigan/rng.hpp"

namespace guigan {

using Vec = std::vector<float>;

struct Tensor {
  std::vector<int> shape;
  Vec data;
  Vec grad;  // same size as data once a backward pass has touched it

  Tensor() = default;
  explicit Tensor(std::vector<int> s);

  int64_t numel() const { return static_cast<int64_t>(data.size()); }
  void ensure_grad() {
    if (grad.size() != data.size()) grad.assign(data.size(), 0.0f);
  }
  void zero_grad() { grad.assign(data.size(), 0.0f); }

  // uniform(-sqrt(1/fan_in), +sqrt(1/fan_in))
  void init_uniform(Rng& rng, int fan_in);
};

struct ParamSet {
  std::vector<std::pair<std::string, Tensor*>> entries;
  void add(const std::string& name, Tensor* t);
  Tensor* find(const std::string& name);
  void zero_grad();
};

// --- layers -----------------------------------------------------------
// Each layer keeps a LIFO cache stack: backward() pops the cache pushed
// by the matching forward(), so shared-weight paths (siamese channels)
// backpropagate in reverse order of their forward calls.

class Dense {
 public:
  Dense() = default;
  Dense(int in, int out, Rng& rng);
  Vec forward(const Vec& x);
  Vec backward(const Vec& dy);
  // forward without caching (inference)
  Vec apply(const Vec& x) const;
  void register_params(ParamSet& ps, const std::string& prefix);
  void clear_cache() { cache_.clear(); }
  int in_dim() const { return in_; }
  int out_dim() const { return out_; }

  Tensor W;  // out x in
  Tensor b;  // out

 private:
  int in_ = 0, out_ = 0;
  std::vector<Vec> cache_;
};

// Valid convolution, stride 1, kernel kh x kw; input (C, H, W) row-major.
class Conv2d {
 public:
  Conv2d() = default;
  Conv2d(int in_c, int in_h, int in_w, int out_c, int kh, int kw, Rng& rng);
  Vec forward(const Vec& x);
  Vec backward(const Vec& dy);
  void register_params(ParamSet& ps, const std::string& prefix);
  void clear_cache() { cache_.clear(); }
  int out_h() const { return in_h_ - kh_ + 1; }
  int out_w() const { return in_w_ - kw_ + 1; }
  int out_c() const { return out_c_; }
  int out_size() const { return out_c_ * out_h() * out_w(); }
  int in_size() const { return in_c_ * in_h_ * in_w_; }

  Tensor W;  // out_c x in_c x kh x kw
  Tensor b;  // out_c

 private:
  int in_c_ = 0, in_h_ = 0, in_w_ = 0, out_c_ = 0, kh_ = 0, kw_ = 0;
  std::vector<Vec> cache_;
};

// 2x2 max pooling with stride 2 (floor semantics on odd dims).
class MaxPool2 {
 public:
  MaxPool2() = default;
  MaxPool2(int c, int h, int w);
  Vec forward(const Vec& x);
  Vec backward(const Vec& dy);
  void clear_cache() { argmax_.clear(); }
  int out_h() const { return h_ / 2; }
  int out_w() const { return w_ / 2; }
  int out_size() const { return c_ * out_h() * out_w(); }

 private:
  int c_ = 0, h_ = 0, w_ = 0;
  std::vector<std::vector<int>> argmax_;
};

class Relu {
 public:
  Vec forward(const Vec& x);
  Vec backward(const Vec& dy);
  void clear_cache() { cache_.clear(); }

 private:
  std::vector<Vec> cache_;
};

class SigmoidLayer {
 public:
  Vec forward(const Vec& x);
  Vec backward(const Vec& dy);
  void clear_cache() { cache_.clear(); }

 private:
  std::vector<Vec> cache_;  // caches outputs
};

class TanhLayer {
 public:
  Vec forward(const Vec& x);
  Vec backward(const Vec& dy);
  void clear_cache() { cache_.clear(); }

 private:
  std::vector<Vec> cache_;
};

// y = t (.) H(x) + (1 - t) (.) x, t = sigmoid(Wt x + bt), H(x) = relu(Wh x + bh)
class Highway {
 public:
  Highway() = default;
  Highway(int dim, Rng& rng);
  Vec forward(const Vec& x);
  Vec backward(const Vec& dy);
  void register_params(ParamSet& ps, const std::string& prefix);
  void clear_cache() { cache_.clear(); }

  Tensor Wh, bh, Wt, bt;

 private:
  int dim_ = 0;
  struct Cache {
    Vec x, h_pre, h, t;
  };
  std::vector<Cache> cache_;
};

// Token embedding table (vocab x dim) with scatter-add backward.
class Embedding {
 public:
  Embedding() = default;
  Embedding(int vocab, int dim, Rng& rng);
  Vec forward(int token);
  void backward(int token, const Vec& dy);
  int dim() const { return dim_; }
  int vocab() const { return vocab_; }
  void register_params(ParamSet& ps, const std::string& prefix);

  Tensor table;

 private:
  int vocab_ = 0, dim_ = 0;
};

// Standard LSTM cell; gate order (i, f, g, o).
struct LstmParams {
  Tensor Wx;  // 4H x E
  Tensor Wh;  // 4H x H
  Tensor b;   // 4H
  int input_dim = 0, hidden_dim = 0;

  LstmParams() = default;
  LstmParams(int input, int hidden, Rng& rng);
  void register_params(ParamSet& ps, const std::string& prefix);
};

// Pure single step (no caching) for sampling.
void lstm_step(const LstmParams& p, const Vec& x, const Vec& h_prev, const Vec& c_prev, Vec& h_out,
               Vec& c_out);

// Teacher-forced sequence with exact backward-through-time.
class LstmSequence {
 public:
  explicit LstmSequence(LstmParams* params) : p_(params) {}
  // forward over T inputs starting from zero state; returns h_1..h_T
  std::vector<Vec> forward(const std::vector<Vec>& xs);
  // dhs: gradient on each h_t; returns gradients on each x_t and
  // accumulates parameter gradients
  std::vector<Vec> backward(const std::vector<Vec>& dhs);

 private:
  LstmParams* p_;
  struct StepCache {
    Vec x, h_prev, c_prev, gates, c;  // gates post-activation, 4H
  };
  std::vector<StepCache> steps_;
};

// --- losses and helpers -------------------------------------------------

// clamped binary cross entropy on a single probability
double bce_loss(double p, double y);
double bce_grad(double p, double y);  // d loss / d p

Vec softmax(const Vec& logits);
// cross entropy -log softmax(logits)[target]; grad_logits = softmax - onehot
double softmax_xent(const Vec& logits, int target, Vec& grad_logits);

// --- optimizer ----------------------------------------------------------

struct AdamConfig {
  double lr = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}
  // One bias-corrected step over all params with grads. Returns false
  // (and leaves params untouched) when any gradient is non-finite.
  bool step(ParamSet& ps);
  int64_t step_count() const { return t_; }
  AdamConfig& config() { return cfg_; }

 private:
  AdamConfig cfg_;
  int64_t t_ = 0;
  std::vector<std::pair<Vec, Vec>> moments_;  // aligned with ps.entries
};

// --- checkpoints ---------------------------------------------------------
// JSON header at `path`, float32 little-endian arrays (header order) at
// `path + ".bin"`.
void save_checkpoint(const std::string& path, const std::string& kind,
                     const std::string& hyper_json, const ParamSet& ps);
// Loads into an already-constructed ParamSet; names and shapes must match.
// Returns the stored hyperparameter JSON text.
std::string load_checkpoint(const std::string& path, const std::string& expected_kind,
                            ParamSet& ps);
// Reads just the header (kind + hyperparameters) without a ParamSet.
std::pair<std::string, std::string> read_checkpoint_header(const std::string& path);

}  // namespace guigan

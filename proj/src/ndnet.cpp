#include "guigan/ndnet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "guigan/errors.hpp"
#include "guigan/log.hpp"
#include "json.hpp"

using nlohmann::json;

namespace guigan {

namespace {

int64_t shape_numel(const std::vector<int>& shape) {
  int64_t n = 1;
  for (int d : shape) n *= d;
  return n;
}

inline float sigmoidf(float x) { return 1.0f / (1.0f + std::exp(-x)); }

void check_size(const Vec& x, size_t expected, const char* where) {
  if (x.size() != expected)
    throw ShapeMismatch(std::string(where) + ": got " + std::to_string(x.size()) + ", expected " +
                        std::to_string(expected));
}

}  // namespace

Tensor::Tensor(std::vector<int> s) : shape(std::move(s)) {
  data.assign(static_cast<size_t>(shape_numel(shape)), 0.0f);
}

void Tensor::init_uniform(Rng& rng, int fan_in) {
  double bound = std::sqrt(1.0 / std::max(1, fan_in));
  for (float& v : data) v = static_cast<float>(rng.uniform(-bound, bound));
}

void ParamSet::add(const std::string& name, Tensor* t) {
  for (auto& [n, _] : entries)
    if (n == name) throw GuiganError("duplicate parameter name: " + name);
  entries.emplace_back(name, t);
}

Tensor* ParamSet::find(const std::string& name) {
  for (auto& [n, t] : entries)
    if (n == name) return t;
  return nullptr;
}

void ParamSet::zero_grad() {
  for (auto& [_, t] : entries) t->zero_grad();
}

// --- Dense ---------------------------------------------------------------

Dense::Dense(int in, int out, Rng& rng) : in_(in), out_(out) {
  W = Tensor({out, in});
  b = Tensor({out});
  W.init_uniform(rng, in);
  b.init_uniform(rng, in);
}

Vec Dense::forward(const Vec& x) {
  check_size(x, static_cast<size_t>(in_), "Dense::forward");
  Vec y(static_cast<size_t>(out_));
  for (int o = 0; o < out_; ++o) {
    float acc = b.data[o];
    const float* w = W.data.data() + static_cast<size_t>(o) * in_;
    for (int i = 0; i < in_; ++i) acc += w[i] * x[i];
    y[o] = acc;
  }
  cache_.push_back(x);
  return y;
}

Vec Dense::backward(const Vec& dy) {
  check_size(dy, static_cast<size_t>(out_), "Dense::backward");
  if (cache_.empty()) throw GuiganError("Dense::backward without forward");
  Vec x = std::move(cache_.back());
  cache_.pop_back();
  W.ensure_grad();
  b.ensure_grad();
  Vec dx(static_cast<size_t>(in_), 0.0f);
  for (int o = 0; o < out_; ++o) {
    float g = dy[o];
    b.grad[o] += g;
    const float* w = W.data.data() + static_cast<size_t>(o) * in_;
    float* dw = W.grad.data() + static_cast<size_t>(o) * in_;
    for (int i = 0; i < in_; ++i) {
      dw[i] += g * x[i];
      dx[i] += g * w[i];
    }
  }
  return dx;
}

Vec Dense::apply(const Vec& x) const {
  check_size(x, static_cast<size_t>(in_), "Dense::apply");
  Vec y(static_cast<size_t>(out_));
  for (int o = 0; o < out_; ++o) {
    float acc = b.data[o];
    const float* w = W.data.data() + static_cast<size_t>(o) * in_;
    for (int i = 0; i < in_; ++i) acc += w[i] * x[i];
    y[o] = acc;
  }
  return y;
}

void Dense::register_params(ParamSet& ps, const std::string& prefix) {
  ps.add(prefix + ".W", &W);
  ps.add(prefix + ".b", &b);
}

// --- Conv2d ---------------------------------------------------------------

Conv2d::Conv2d(int in_c, int in_h, int in_w, int out_c, int kh, int kw, Rng& rng)
    : in_c_(in_c), in_h_(in_h), in_w_(in_w), out_c_(out_c), kh_(kh), kw_(kw) {
  if (in_h < kh || in_w < kw)
    throw ShapeMismatch("Conv2d: kernel larger than input (" + std::to_string(in_h) + "x" +
                        std::to_string(in_w) + " vs " + std::to_string(kh) + "x" +
                        std::to_string(kw) + ")");
  W = Tensor({out_c, in_c, kh, kw});
  b = Tensor({out_c});
  W.init_uniform(rng, in_c * kh * kw);
  b.init_uniform(rng, in_c * kh * kw);
}

Vec Conv2d::forward(const Vec& x) {
  check_size(x, static_cast<size_t>(in_size()), "Conv2d::forward");
  const int oh = out_h(), ow = out_w();
  Vec y(static_cast<size_t>(out_c_) * oh * ow);
  for (int oc = 0; oc < out_c_; ++oc) {
    for (int i = 0; i < oh; ++i) {
      for (int j = 0; j < ow; ++j) {
        float acc = b.data[oc];
        for (int c = 0; c < in_c_; ++c) {
          const float* xrow = x.data() + (static_cast<size_t>(c) * in_h_ + i) * in_w_ + j;
          const float* wrow =
              W.data.data() + ((static_cast<size_t>(oc) * in_c_ + c) * kh_) * kw_;
          for (int ki = 0; ki < kh_; ++ki) {
            const float* xr = xrow + static_cast<size_t>(ki) * in_w_;
            for (int kj = 0; kj < kw_; ++kj) acc += wrow[ki * kw_ + kj] * xr[kj];
          }
        }
        y[(static_cast<size_t>(oc) * oh + i) * ow + j] = acc;
      }
    }
  }
  cache_.push_back(x);
  return y;
}

Vec Conv2d::backward(const Vec& dy) {
  check_size(dy, static_cast<size_t>(out_size()), "Conv2d::backward");
  if (cache_.empty()) throw GuiganError("Conv2d::backward without forward");
  Vec x = std::move(cache_.back());
  cache_.pop_back();
  W.ensure_grad();
  b.ensure_grad();
  const int oh = out_h(), ow = out_w();
  Vec dx(static_cast<size_t>(in_size()), 0.0f);
  for (int oc = 0; oc < out_c_; ++oc) {
    for (int i = 0; i < oh; ++i) {
      for (int j = 0; j < ow; ++j) {
        float g = dy[(static_cast<size_t>(oc) * oh + i) * ow + j];
        if (g == 0.0f) continue;
        b.grad[oc] += g;
        for (int c = 0; c < in_c_; ++c) {
          size_t xoff = (static_cast<size_t>(c) * in_h_ + i) * in_w_ + j;
          size_t woff = ((static_cast<size_t>(oc) * in_c_ + c) * kh_) * kw_;
          for (int ki = 0; ki < kh_; ++ki) {
            for (int kj = 0; kj < kw_; ++kj) {
              W.grad[woff + ki * kw_ + kj] += g * x[xoff + static_cast<size_t>(ki) * in_w_ + kj];
              dx[xoff + static_cast<size_t>(ki) * in_w_ + kj] += g * W.data[woff + ki * kw_ + kj];
            }
          }
        }
      }
    }
  }
  return dx;
}

void Conv2d::register_params(ParamSet& ps, const std::string& prefix) {
  ps.add(prefix + ".W", &W);
  ps.add(prefix + ".b", &b);
}

// --- MaxPool2 ---------------------------------------------------------------

MaxPool2::MaxPool2(int c, int h, int w) : c_(c), h_(h), w_(w) {
  if (h < 2 || w < 2) throw ShapeMismatch("MaxPool2: input smaller than 2x2");
}

Vec MaxPool2::forward(const Vec& x) {
  check_size(x, static_cast<size_t>(c_) * h_ * w_, "MaxPool2::forward");
  const int oh = out_h(), ow = out_w();
  Vec y(static_cast<size_t>(c_) * oh * ow);
  std::vector<int> arg(y.size());
  for (int c = 0; c < c_; ++c) {
    for (int i = 0; i < oh; ++i) {
      for (int j = 0; j < ow; ++j) {
        int base = (c * h_ + 2 * i) * w_ + 2 * j;
        int best = base;
        float bv = x[base];
        for (int di = 0; di < 2; ++di)
          for (int dj = 0; dj < 2; ++dj) {
            int idx = base + di * w_ + dj;
            if (x[idx] > bv) {
              bv = x[idx];
              best = idx;
            }
          }
        size_t o = (static_cast<size_t>(c) * oh + i) * ow + j;
        y[o] = bv;
        arg[o] = best;
      }
    }
  }
  argmax_.push_back(std::move(arg));
  return y;
}

Vec MaxPool2::backward(const Vec& dy) {
  if (argmax_.empty()) throw GuiganError("MaxPool2::backward without forward");
  std::vector<int> arg = std::move(argmax_.back());
  argmax_.pop_back();
  check_size(dy, arg.size(), "MaxPool2::backward");
  Vec dx(static_cast<size_t>(c_) * h_ * w_, 0.0f);
  for (size_t o = 0; o < arg.size(); ++o) dx[arg[o]] += dy[o];
  return dx;
}

// --- elementwise ---------------------------------------------------------

Vec Relu::forward(const Vec& x) {
  Vec y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.0f ? x[i] : 0.0f;
  cache_.push_back(x);
  return y;
}

Vec Relu::backward(const Vec& dy) {
  if (cache_.empty()) throw GuiganError("Relu::backward without forward");
  Vec x = std::move(cache_.back());
  cache_.pop_back();
  check_size(dy, x.size(), "Relu::backward");
  Vec dx(x.size());
  for (size_t i = 0; i < x.size(); ++i) dx[i] = x[i] > 0.0f ? dy[i] : 0.0f;
  return dx;
}

Vec SigmoidLayer::forward(const Vec& x) {
  Vec y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = sigmoidf(x[i]);
  cache_.push_back(y);
  return y;
}

Vec SigmoidLayer::backward(const Vec& dy) {
  if (cache_.empty()) throw GuiganError("SigmoidLayer::backward without forward");
  Vec y = std::move(cache_.back());
  cache_.pop_back();
  check_size(dy, y.size(), "SigmoidLayer::backward");
  Vec dx(y.size());
  for (size_t i = 0; i < y.size(); ++i) dx[i] = dy[i] * y[i] * (1.0f - y[i]);
  return dx;
}

Vec TanhLayer::forward(const Vec& x) {
  Vec y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = std::tanh(x[i]);
  cache_.push_back(y);
  return y;
}

Vec TanhLayer::backward(const Vec& dy) {
  if (cache_.empty()) throw GuiganError("TanhLayer::backward without forward");
  Vec y = std::move(cache_.back());
  cache_.pop_back();
  check_size(dy, y.size(), "TanhLayer::backward");
  Vec dx(y.size());
  for (size_t i = 0; i < y.size(); ++i) dx[i] = dy[i] * (1.0f - y[i] * y[i]);
  return dx;
}

// --- Highway ---------------------------------------------------------------

Highway::Highway(int dim, Rng& rng) : dim_(dim) {
  Wh = Tensor({dim, dim});
  bh = Tensor({dim});
  Wt = Tensor({dim, dim});
  bt = Tensor({dim});
  Wh.init_uniform(rng, dim);
  bh.init_uniform(rng, dim);
  Wt.init_uniform(rng, dim);
  bt.init_uniform(rng, dim);
}

Vec Highway::forward(const Vec& x) {
  check_size(x, static_cast<size_t>(dim_), "Highway::forward");
  Cache c;
  c.x = x;
  c.h_pre.resize(dim_);
  c.h.resize(dim_);
  c.t.resize(dim_);
  Vec y(static_cast<size_t>(dim_));
  for (int o = 0; o < dim_; ++o) {
    float hp = bh.data[o], tp = bt.data[o];
    const float* wh = Wh.data.data() + static_cast<size_t>(o) * dim_;
    const float* wt = Wt.data.data() + static_cast<size_t>(o) * dim_;
    for (int i = 0; i < dim_; ++i) {
      hp += wh[i] * x[i];
      tp += wt[i] * x[i];
    }
    c.h_pre[o] = hp;
    c.h[o] = hp > 0.0f ? hp : 0.0f;
    c.t[o] = sigmoidf(tp);
    y[o] = c.t[o] * c.h[o] + (1.0f - c.t[o]) * x[o];
  }
  cache_.push_back(std::move(c));
  return y;
}

Vec Highway::backward(const Vec& dy) {
  check_size(dy, static_cast<size_t>(dim_), "Highway::backward");
  if (cache_.empty()) throw GuiganError("Highway::backward without forward");
  Cache c = std::move(cache_.back());
  cache_.pop_back();
  Wh.ensure_grad();
  bh.ensure_grad();
  Wt.ensure_grad();
  bt.ensure_grad();
  Vec dx(static_cast<size_t>(dim_), 0.0f);
  for (int o = 0; o < dim_; ++o) {
    float g = dy[o];
    float dt = g * (c.h[o] - c.x[o]) * c.t[o] * (1.0f - c.t[o]);
    float dh = g * c.t[o] * (c.h_pre[o] > 0.0f ? 1.0f : 0.0f);
    dx[o] += g * (1.0f - c.t[o]);
    bh.grad[o] += dh;
    bt.grad[o] += dt;
    const float* wh = Wh.data.data() + static_cast<size_t>(o) * dim_;
    const float* wt = Wt.data.data() + static_cast<size_t>(o) * dim_;
    float* dwh = Wh.grad.data() + static_cast<size_t>(o) * dim_;
    float* dwt = Wt.grad.data() + static_cast<size_t>(o) * dim_;
    for (int i = 0; i < dim_; ++i) {
      dwh[i] += dh * c.x[i];
      dwt[i] += dt * c.x[i];
      dx[i] += dh * wh[i] + dt * wt[i];
    }
  }
  return dx;
}

void Highway::register_params(ParamSet& ps, const std::string& prefix) {
  ps.add(prefix + ".Wh", &Wh);
  ps.add(prefix + ".bh", &bh);
  ps.add(prefix + ".Wt", &Wt);
  ps.add(prefix + ".bt", &bt);
}

// --- Embedding ---------------------------------------------------------------

Embedding::Embedding(int vocab, int dim, Rng& rng) : vocab_(vocab), dim_(dim) {
  table = Tensor({vocab, dim});
  table.init_uniform(rng, dim);
}

Vec Embedding::forward(int token) {
  if (token < 0 || token >= vocab_) throw ShapeMismatch("Embedding: token out of range");
  const float* row = table.data.data() + static_cast<size_t>(token) * dim_;
  return Vec(row, row + dim_);
}

void Embedding::backward(int token, const Vec& dy) {
  if (token < 0 || token >= vocab_) throw ShapeMismatch("Embedding: token out of range");
  check_size(dy, static_cast<size_t>(dim_), "Embedding::backward");
  table.ensure_grad();
  float* row = table.grad.data() + static_cast<size_t>(token) * dim_;
  for (int i = 0; i < dim_; ++i) row[i] += dy[i];
}

void Embedding::register_params(ParamSet& ps, const std::string& prefix) {
  ps.add(prefix + ".table", &table);
}

// --- LSTM ---------------------------------------------------------------

LstmParams::LstmParams(int input, int hidden, Rng& rng) : input_dim(input), hidden_dim(hidden) {
  Wx = Tensor({4 * hidden, input});
  Wh = Tensor({4 * hidden, hidden});
  b = Tensor({4 * hidden});
  Wx.init_uniform(rng, input);
  Wh.init_uniform(rng, hidden);
  b.init_uniform(rng, hidden);
}

void LstmParams::register_params(ParamSet& ps, const std::string& prefix) {
  ps.add(prefix + ".Wx", &Wx);
  ps.add(prefix + ".Wh", &Wh);
  ps.add(prefix + ".b", &b);
}

namespace {

// pre-activations a = Wx x + Wh h_prev + b, then (i, f, g, o) gating
void lstm_gates(const LstmParams& p, const Vec& x, const Vec& h_prev, Vec& gates) {
  const int H = p.hidden_dim, E = p.input_dim;
  check_size(x, static_cast<size_t>(E), "lstm input");
  check_size(h_prev, static_cast<size_t>(H), "lstm hidden");
  gates.assign(static_cast<size_t>(4) * H, 0.0f);
  for (int r = 0; r < 4 * H; ++r) {
    float acc = p.b.data[r];
    const float* wx = p.Wx.data.data() + static_cast<size_t>(r) * E;
    for (int i = 0; i < E; ++i) acc += wx[i] * x[i];
    const float* wh = p.Wh.data.data() + static_cast<size_t>(r) * H;
    for (int i = 0; i < H; ++i) acc += wh[i] * h_prev[i];
    gates[r] = acc;
  }
  for (int k = 0; k < H; ++k) {
    gates[k] = sigmoidf(gates[k]);                    // i
    gates[H + k] = sigmoidf(gates[H + k]);            // f
    gates[2 * H + k] = std::tanh(gates[2 * H + k]);   // g
    gates[3 * H + k] = sigmoidf(gates[3 * H + k]);    // o
  }
}

}  // namespace

void lstm_step(const LstmParams& p, const Vec& x, const Vec& h_prev, const Vec& c_prev, Vec& h_out,
               Vec& c_out) {
  const int H = p.hidden_dim;
  Vec gates;
  lstm_gates(p, x, h_prev, gates);
  h_out.resize(H);
  c_out.resize(H);
  for (int k = 0; k < H; ++k) {
    float c = gates[H + k] * c_prev[k] + gates[k] * gates[2 * H + k];
    c_out[k] = c;
    h_out[k] = gates[3 * H + k] * std::tanh(c);
  }
}

std::vector<Vec> LstmSequence::forward(const std::vector<Vec>& xs) {
  const int H = p_->hidden_dim;
  steps_.clear();
  std::vector<Vec> hs;
  Vec h(static_cast<size_t>(H), 0.0f), c(static_cast<size_t>(H), 0.0f);
  for (const Vec& x : xs) {
    StepCache sc;
    sc.x = x;
    sc.h_prev = h;
    sc.c_prev = c;
    lstm_gates(*p_, x, h, sc.gates);
    sc.c.resize(H);
    for (int k = 0; k < H; ++k)
      sc.c[k] = sc.gates[H + k] * c[k] + sc.gates[k] * sc.gates[2 * H + k];
    c = sc.c;
    h.resize(H);
    for (int k = 0; k < H; ++k) h[k] = sc.gates[3 * H + k] * std::tanh(sc.c[k]);
    hs.push_back(h);
    steps_.push_back(std::move(sc));
  }
  return hs;
}

std::vector<Vec> LstmSequence::backward(const std::vector<Vec>& dhs) {
  const int H = p_->hidden_dim, E = p_->input_dim;
  if (dhs.size() != steps_.size()) throw ShapeMismatch("LstmSequence::backward length mismatch");
  p_->Wx.ensure_grad();
  p_->Wh.ensure_grad();
  p_->b.ensure_grad();
  std::vector<Vec> dxs(steps_.size(), Vec(static_cast<size_t>(E), 0.0f));
  Vec dh_next(static_cast<size_t>(H), 0.0f), dc_next(static_cast<size_t>(H), 0.0f);
  Vec da(static_cast<size_t>(4) * H);
  for (int t = static_cast<int>(steps_.size()) - 1; t >= 0; --t) {
    const StepCache& sc = steps_[t];
    for (int k = 0; k < H; ++k) {
      float dh = dhs[t][k] + dh_next[k];
      float i = sc.gates[k], f = sc.gates[H + k], g = sc.gates[2 * H + k],
            o = sc.gates[3 * H + k];
      float tc = std::tanh(sc.c[k]);
      float dc = dc_next[k] + dh * o * (1.0f - tc * tc);
      float do_ = dh * tc;
      float di = dc * g;
      float dg = dc * i;
      float df = dc * sc.c_prev[k];
      dc_next[k] = dc * f;
      da[k] = di * i * (1.0f - i);
      da[H + k] = df * f * (1.0f - f);
      da[2 * H + k] = dg * (1.0f - g * g);
      da[3 * H + k] = do_ * o * (1.0f - o);
    }
    std::fill(dh_next.begin(), dh_next.end(), 0.0f);
    for (int r = 0; r < 4 * H; ++r) {
      float g = da[r];
      if (g == 0.0f) continue;
      p_->b.grad[r] += g;
      float* dwx = p_->Wx.grad.data() + static_cast<size_t>(r) * E;
      const float* wx = p_->Wx.data.data() + static_cast<size_t>(r) * E;
      for (int i = 0; i < E; ++i) {
        dwx[i] += g * sc.x[i];
        dxs[t][i] += g * wx[i];
      }
      float* dwh = p_->Wh.grad.data() + static_cast<size_t>(r) * H;
      const float* wh = p_->Wh.data.data() + static_cast<size_t>(r) * H;
      for (int i = 0; i < H; ++i) {
        dwh[i] += g * sc.h_prev[i];
        dh_next[i] += g * wh[i];
      }
    }
  }
  steps_.clear();
  return dxs;
}

// --- losses ---------------------------------------------------------------

namespace {
constexpr double kBceEps = 1e-7;
}

double bce_loss(double p, double y) {
  p = std::clamp(p, kBceEps, 1.0 - kBceEps);
  return -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
}

double bce_grad(double p, double y) {
  if (p < kBceEps || p > 1.0 - kBceEps) return 0.0;  // clamped region
  return -(y / p) + (1.0 - y) / (1.0 - p);
}

Vec softmax(const Vec& logits) {
  float mx = *std::max_element(logits.begin(), logits.end());
  Vec p(logits.size());
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - mx);
    sum += p[i];
  }
  for (float& v : p) v = static_cast<float>(v / sum);
  return p;
}

double softmax_xent(const Vec& logits, int target, Vec& grad_logits) {
  Vec p = softmax(logits);
  grad_logits = p;
  grad_logits[target] -= 1.0f;
  return -std::log(std::max(static_cast<double>(p[target]), 1e-12));
}

// --- Adam ---------------------------------------------------------------

bool Adam::step(ParamSet& ps) {
  if (moments_.size() != ps.entries.size()) {
    moments_.clear();
    for (auto& [_, t] : ps.entries)
      moments_.emplace_back(Vec(t->data.size(), 0.0f), Vec(t->data.size(), 0.0f));
  }
  for (auto& [name, t] : ps.entries) {
    t->ensure_grad();
    for (float g : t->grad)
      if (!std::isfinite(g)) {
        GUIGAN_LOG_ERROR("non-finite gradient in %s; skipping optimizer step", name.c_str());
        return false;
      }
  }
  ++t_;
  double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (size_t e = 0; e < ps.entries.size(); ++e) {
    Tensor* t = ps.entries[e].second;
    Vec& m = moments_[e].first;
    Vec& v = moments_[e].second;
    for (size_t i = 0; i < t->data.size(); ++i) {
      double g = t->grad[i];
      m[i] = static_cast<float>(cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g);
      v[i] = static_cast<float>(cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g * g);
      double mhat = m[i] / bc1;
      double vhat = v[i] / bc2;
      t->data[i] -= static_cast<float>(cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps));
    }
  }
  return true;
}

// --- checkpoints ---------------------------------------------------------

void save_checkpoint(const std::string& path, const std::string& kind,
                     const std::string& hyper_json, const ParamSet& ps) {
  json header;
  header["format_version"] = 1;
  header["kind"] = kind;
  header["hyperparameters"] = hyper_json.empty() ? json::object() : json::parse(hyper_json);
  json params = json::array();
  for (const auto& [name, t] : ps.entries) params.push_back({{"name", name}, {"shape", t->shape}});
  header["params"] = std::move(params);
  std::ofstream hout(path);
  if (!hout) throw IoError("cannot write checkpoint header: " + path);
  hout << header.dump(2) << "\n";
  std::ofstream bout(path + ".bin", std::ios::binary);
  if (!bout) throw IoError("cannot write checkpoint data: " + path + ".bin");
  for (const auto& [_, t] : ps.entries)
    bout.write(reinterpret_cast<const char*>(t->data.data()),
               static_cast<std::streamsize>(t->data.size() * sizeof(float)));
}

std::string load_checkpoint(const std::string& path, const std::string& expected_kind,
                            ParamSet& ps) {
  std::ifstream hin(path);
  if (!hin) throw IoError("cannot read checkpoint header: " + path);
  json header;
  try {
    hin >> header;
  } catch (const json::exception& e) {
    throw IoError(std::string("invalid checkpoint header: ") + e.what());
  }
  if (header.at("kind").get<std::string>() != expected_kind)
    throw IoError("checkpoint kind mismatch: expected " + expected_kind + ", got " +
                  header.at("kind").get<std::string>());
  const auto& params = header.at("params");
  if (params.size() != ps.entries.size()) throw IoError("checkpoint parameter count mismatch");
  std::ifstream bin(path + ".bin", std::ios::binary);
  if (!bin) throw IoError("cannot read checkpoint data: " + path + ".bin");
  for (size_t i = 0; i < ps.entries.size(); ++i) {
    auto& [name, t] = ps.entries[i];
    if (params[i].at("name").get<std::string>() != name)
      throw IoError("checkpoint parameter name mismatch at " + name);
    if (params[i].at("shape").get<std::vector<int>>() != t->shape)
      throw IoError("checkpoint shape mismatch at " + name);
    bin.read(reinterpret_cast<char*>(t->data.data()),
             static_cast<std::streamsize>(t->data.size() * sizeof(float)));
    if (!bin) throw IoError("checkpoint data truncated at " + name);
  }
  return header.at("hyperparameters").dump();
}

std::pair<std::string, std::string> read_checkpoint_header(const std::string& path) {
  std::ifstream hin(path);
  if (!hin) throw IoError("cannot read checkpoint header: " + path);
  json header;
  hin >> header;
  return {header.at("kind").get<std::string>(), header.at("hyperparameters").dump()};
}

}  // namespace guigan

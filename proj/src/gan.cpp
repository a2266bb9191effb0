#include "guigan/gan.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "guigan/errors.hpp"
#include "guigan/log.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace guigan {

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::kLengthCap:
      return "length_cap";
    case Termination::kEndToken:
      return "end_token";
    case Termination::kHeightBudget:
      return "height_budget";
  }
  return "length_cap";
}

Termination termination_from_name(const std::string& name) {
  if (name == "end_token") return Termination::kEndToken;
  if (name == "height_budget") return Termination::kHeightBudget;
  return Termination::kLengthCap;
}

GanConfig GanConfig::desk_scale() {
  GanConfig cfg;
  cfg.max_len = 12;
  cfg.batch = 16;
  cfg.rollout_count = 4;
  cfg.pretrain_epochs = 10;
  cfg.rounds = 8;
  cfg.disc_filters = 16;
  return cfg;
}

FusionWeights GanConfig::fusion_weights() const {
  FusionWeights fw;
  if (fusion_mode == "full") {
    fw.mode = FusionMode::kTrainable;
  } else if (fusion_mode == "style_only") {
    fw.mode = FusionMode::kFixed;
    fw.lambda_fixed = {1.0, 1.0, 0.0};
  } else if (fusion_mode == "structure_only") {
    fw.mode = FusionMode::kFixed;
    fw.lambda_fixed = {1.0, 0.0, 1.0};
  } else if (fusion_mode == "adversarial_only") {
    fw.mode = FusionMode::kFixed;
    fw.lambda_fixed = {1.0, 0.0, 0.0};
  } else {
    throw InvalidSpec("unknown fusion mode: " + fusion_mode);
  }
  return fw;
}

std::string GanConfig::to_json() const {
  json j{{"embed_dim", embed_dim},
         {"hidden_dim", hidden_dim},
         {"max_len", max_len},
         {"batch", batch},
         {"lr", lr},
         {"rollout_count", rollout_count},
         {"pretrain_epochs", pretrain_epochs},
         {"d_steps", d_steps},
         {"g_steps", g_steps},
         {"rounds", rounds},
         {"height_budget", height_budget},
         {"disc_filters", disc_filters},
         {"fusion_mode", fusion_mode}};
  return j.dump();
}

GanConfig GanConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  GanConfig cfg;
  cfg.embed_dim = j.value("embed_dim", cfg.embed_dim);
  cfg.hidden_dim = j.value("hidden_dim", cfg.hidden_dim);
  cfg.max_len = j.value("max_len", cfg.max_len);
  cfg.batch = j.value("batch", cfg.batch);
  cfg.lr = j.value("lr", cfg.lr);
  cfg.rollout_count = j.value("rollout_count", cfg.rollout_count);
  cfg.pretrain_epochs = j.value("pretrain_epochs", cfg.pretrain_epochs);
  cfg.d_steps = j.value("d_steps", cfg.d_steps);
  cfg.g_steps = j.value("g_steps", cfg.g_steps);
  cfg.rounds = j.value("rounds", cfg.rounds);
  cfg.height_budget = j.value("height_budget", cfg.height_budget);
  cfg.disc_filters = j.value("disc_filters", cfg.disc_filters);
  cfg.fusion_mode = j.value("fusion_mode", cfg.fusion_mode);
  cfg.fusion_weights();  // validates the mode
  return cfg;
}

// --- Generator -------------------------------------------------------------

Generator::Generator(const SubtreeRepository& repo, const GanConfig& cfg, Rng& rng)
    : repo_(&repo), cfg_(cfg) {
  const int vocab = repo.size();
  if (vocab == 0) throw EmptyCorpus("generator needs a non-empty repository");
  if (repo.start_ids.empty()) throw EmptyCorpus("empty start list");
  embed_ = Embedding(vocab, cfg_.embed_dim, rng);
  lstm_ = LstmParams(cfg_.embed_dim, cfg_.hidden_dim, rng);
  proj_ = Dense(cfg_.hidden_dim, vocab, rng);
  embed_.register_params(params_, "embed");
  lstm_.register_params(params_, "lstm");
  proj_.register_params(params_, "proj");

  heights_.resize(static_cast<size_t>(vocab));
  for (const auto& st : repo.subtrees) {
    int h = st.width_px > 0 ? static_cast<int>(std::lround(
                                  static_cast<double>(st.height_px) * repo.screen_width /
                                  st.width_px))
                            : st.height_px;
    heights_[static_cast<size_t>(st.id)] = std::max(1, h);
  }
  start_list_.assign(repo.start_ids.begin(), repo.start_ids.end());
  budget_ = cfg_.height_budget > 0 ? cfg_.height_budget : repo.screen_height;
}

Generator::Generator(const SubtreeRepository& repo, const std::map<int, Vec>& style_embeddings,
                     const GanConfig& cfg, Rng& rng)
    : Generator(repo, cfg, rng) {
  const int vocab = repo.size();
  for (int id = 0; id < vocab; ++id)
    if (!style_embeddings.count(id))
      throw MissingEmbedding("no style embedding for token " + std::to_string(id));
  const int n = static_cast<int>(style_embeddings.at(0).size());
  // seeded random projection N -> embed_dim; identical style embeddings
  // map to identical rows
  std::vector<float> proj(static_cast<size_t>(n) * cfg_.embed_dim);
  double bound = std::sqrt(1.0 / n);
  for (float& v : proj) v = static_cast<float>(rng.uniform(-bound, bound));
  for (int id = 0; id < vocab; ++id) {
    const Vec& e = style_embeddings.at(id);
    float* row = embed_.table.data.data() + static_cast<size_t>(id) * cfg_.embed_dim;
    for (int d = 0; d < cfg_.embed_dim; ++d) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += e[k] * proj[static_cast<size_t>(k) * cfg_.embed_dim + d];
      row[d] = static_cast<float>(acc);
    }
  }
}

int Generator::sample_next(const Vec& h, Rng& rng) const {
  Vec p = softmax(proj_.apply(h));
  double u = rng.uniform();
  double acc = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(p.size()) - 1;
}

std::vector<Generator::State> Generator::states_along(const TokenSequence& tokens) const {
  std::vector<State> states;
  Vec h(static_cast<size_t>(cfg_.hidden_dim), 0.0f), c(h);
  int height = 0;
  for (int tok : tokens) {
    Vec x(embed_.table.data.data() + static_cast<size_t>(tok) * cfg_.embed_dim,
          embed_.table.data.data() + static_cast<size_t>(tok + 1) * cfg_.embed_dim);
    Vec h2, c2;
    lstm_step(lstm_, x, h, c, h2, c2);
    h = std::move(h2);
    c = std::move(c2);
    height += heights_[static_cast<size_t>(tok)];
    states.push_back({h, c, height});
  }
  return states;
}

GenSequence Generator::continue_from(const TokenSequence& prefix, const State& state, Rng& rng) {
  GenSequence out;
  out.tokens = prefix;
  Vec h = state.h, c = state.c;
  int height = state.height;
  while (static_cast<int>(out.tokens.size()) < cfg_.max_len) {
    int next = sample_next(h, rng);
    if (height + heights_[static_cast<size_t>(next)] > budget_) {
      out.terminated_by = Termination::kHeightBudget;  // offending token rejected
      return out;
    }
    out.tokens.push_back(next);
    height += heights_[static_cast<size_t>(next)];
    Vec x(embed_.table.data.data() + static_cast<size_t>(next) * cfg_.embed_dim,
          embed_.table.data.data() + static_cast<size_t>(next + 1) * cfg_.embed_dim);
    Vec h2, c2;
    lstm_step(lstm_, x, h, c, h2, c2);
    h = std::move(h2);
    c = std::move(c2);
    if (repo_->end_ids.count(next)) {
      out.terminated_by = Termination::kEndToken;
      return out;
    }
  }
  out.terminated_by = Termination::kLengthCap;
  return out;
}

GenSequence Generator::sample(Rng& rng, const TokenSequence* forced_prefix) {
  TokenSequence prefix;
  if (forced_prefix && !forced_prefix->empty()) {
    prefix = *forced_prefix;
    if (static_cast<int>(prefix.size()) > cfg_.max_len) prefix.resize(cfg_.max_len);
  } else {
    prefix.push_back(start_list_[rng.uniform_int(static_cast<int>(start_list_.size()))]);
  }
  auto states = states_along(prefix);
  if (repo_->end_ids.count(prefix.back())) return {prefix, Termination::kEndToken};
  if (static_cast<int>(prefix.size()) >= cfg_.max_len) return {prefix, Termination::kLengthCap};
  return continue_from(prefix, states.back(), rng);
}

double Generator::forced_nll(const TokenSequence& tokens, bool train) {
  const int T = static_cast<int>(tokens.size());
  if (T < 2) return 0.0;
  std::vector<Vec> xs;
  for (int i = 0; i < T - 1; ++i) xs.push_back(embed_.forward(tokens[i]));
  LstmSequence seq(&lstm_);
  std::vector<Vec> hs = seq.forward(xs);
  double nll = 0.0;
  std::vector<Vec> dlogits(static_cast<size_t>(T - 1));
  for (int i = 0; i < T - 1; ++i) {
    Vec logits = train ? proj_.forward(hs[i]) : proj_.apply(hs[i]);
    Vec grad;
    nll += softmax_xent(logits, tokens[i + 1], grad);
    if (train) dlogits[i] = std::move(grad);
  }
  if (train) {
    std::vector<Vec> dhs(static_cast<size_t>(T - 1));
    for (int i = T - 2; i >= 0; --i) dhs[i] = proj_.backward(dlogits[i]);
    std::vector<Vec> dxs = seq.backward(dhs);
    for (int i = 0; i < T - 1; ++i) embed_.backward(tokens[i], dxs[i]);
  }
  return nll / (T - 1);
}

void Generator::reinforce_backward(const TokenSequence& tokens,
                                   const std::vector<double>& advantage) {
  const int T = static_cast<int>(tokens.size());
  if (advantage.size() != tokens.size())
    throw ShapeMismatch("advantage length must equal sequence length");
  if (T < 2) return;
  std::vector<Vec> xs;
  for (int i = 0; i < T - 1; ++i) xs.push_back(embed_.forward(tokens[i]));
  LstmSequence seq(&lstm_);
  std::vector<Vec> hs = seq.forward(xs);
  std::vector<Vec> dlogits(static_cast<size_t>(T - 1));
  for (int i = 0; i < T - 1; ++i) {
    Vec logits = proj_.forward(hs[i]);
    Vec grad;
    softmax_xent(logits, tokens[i + 1], grad);  // grad = softmax - onehot
    float a = static_cast<float>(advantage[static_cast<size_t>(i) + 1]);
    for (float& g : grad) g *= a;
    dlogits[i] = std::move(grad);
  }
  std::vector<Vec> dhs(static_cast<size_t>(T - 1));
  for (int i = T - 2; i >= 0; --i) dhs[i] = proj_.backward(dlogits[i]);
  std::vector<Vec> dxs = seq.backward(dhs);
  for (int i = 0; i < T - 1; ++i) embed_.backward(tokens[i], dxs[i]);
}

void Generator::save(const std::string& path) const {
  save_checkpoint(path, "generator", cfg_.to_json(), const_cast<Generator*>(this)->params_);
}

void Generator::load(const std::string& path) { load_checkpoint(path, "generator", params_); }

// --- Discriminator ----------------------------------------------------------

Discriminator::Discriminator(int vocab, const GanConfig& cfg, Rng& rng) : cfg_(cfg), vocab_(vocab) {
  embed_ = Embedding(vocab, cfg.embed_dim, rng);
  conv2_ = Conv2d(1, cfg.max_len, cfg.embed_dim, cfg.disc_filters, 2, cfg.embed_dim, rng);
  conv3_ = Conv2d(1, cfg.max_len, cfg.embed_dim, cfg.disc_filters, 3, cfg.embed_dim, rng);
  highway_ = Highway(2 * cfg.disc_filters, rng);
  out_ = Dense(2 * cfg.disc_filters, 1, rng);
  embed_.register_params(params_, "embed");
  conv2_.register_params(params_, "conv2");
  conv3_.register_params(params_, "conv3");
  highway_.register_params(params_, "highway");
  out_.register_params(params_, "out");
}

Vec Discriminator::embed_matrix(const TokenSequence& tokens) const {
  Vec x(static_cast<size_t>(cfg_.max_len) * cfg_.embed_dim, 0.0f);  // pad rows stay zero
  int n = std::min<int>(static_cast<int>(tokens.size()), cfg_.max_len);
  for (int i = 0; i < n; ++i) {
    int tok = tokens[static_cast<size_t>(i)];
    if (tok < 0 || tok >= vocab_) throw UnknownToken("token " + std::to_string(tok));
    const float* row = embed_.table.data.data() + static_cast<size_t>(tok) * cfg_.embed_dim;
    std::copy(row, row + cfg_.embed_dim, x.begin() + static_cast<size_t>(i) * cfg_.embed_dim);
  }
  return x;
}

double Discriminator::forward(const TokenSequence& tokens) {
  Cache c;
  c.tokens = tokens;
  Vec x = embed_matrix(tokens);
  Vec y2 = conv2_.forward(x);
  Vec y3 = conv3_.forward(x);
  const int F = cfg_.disc_filters;
  const int t2 = conv2_.out_h(), t3 = conv3_.out_h();
  Vec pooled(static_cast<size_t>(2) * F);
  c.argmax2.resize(F);
  c.argmax3.resize(F);
  for (int f = 0; f < F; ++f) {
    int best = 0;
    for (int t = 1; t < t2; ++t)
      if (y2[static_cast<size_t>(f) * t2 + t] > y2[static_cast<size_t>(f) * t2 + best]) best = t;
    c.argmax2[f] = best;
    pooled[f] = y2[static_cast<size_t>(f) * t2 + best];
    best = 0;
    for (int t = 1; t < t3; ++t)
      if (y3[static_cast<size_t>(f) * t3 + t] > y3[static_cast<size_t>(f) * t3 + best]) best = t;
    c.argmax3[f] = best;
    pooled[F + f] = y3[static_cast<size_t>(f) * t3 + best];
  }
  Vec h = highway_.forward(pooled);
  double z = out_.forward(h)[0];
  c.p = 1.0 / (1.0 + std::exp(-z));
  double p = c.p;
  cache_.push_back(std::move(c));
  return p;
}

void Discriminator::backward(double dp) {
  if (cache_.empty()) throw GuiganError("Discriminator::backward without forward");
  Cache c = std::move(cache_.back());
  cache_.pop_back();
  double dz = dp * c.p * (1.0 - c.p);
  Vec dh = out_.backward({static_cast<float>(dz)});
  Vec dpool = highway_.backward(dh);
  const int F = cfg_.disc_filters;
  const int t2 = conv2_.out_h(), t3 = conv3_.out_h();
  Vec dy2(static_cast<size_t>(F) * t2, 0.0f), dy3(static_cast<size_t>(F) * t3, 0.0f);
  for (int f = 0; f < F; ++f) {
    dy2[static_cast<size_t>(f) * t2 + c.argmax2[f]] = dpool[f];
    dy3[static_cast<size_t>(f) * t3 + c.argmax3[f]] = dpool[F + f];
  }
  Vec dx3 = conv3_.backward(dy3);  // LIFO: conv3 was forwarded last
  Vec dx2 = conv2_.backward(dy2);
  int n = std::min<int>(static_cast<int>(c.tokens.size()), cfg_.max_len);
  Vec drow(static_cast<size_t>(cfg_.embed_dim));
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < cfg_.embed_dim; ++d) {
      size_t idx = static_cast<size_t>(i) * cfg_.embed_dim + d;
      drow[d] = dx2[idx] + dx3[idx];
    }
    embed_.backward(c.tokens[static_cast<size_t>(i)], drow);
  }
}

double Discriminator::score(const TokenSequence& tokens) {
  double p = forward(tokens);
  cache_.pop_back();
  conv2_.clear_cache();
  conv3_.clear_cache();
  highway_.clear_cache();
  out_.clear_cache();
  return p;
}

void Discriminator::save(const std::string& path) const {
  save_checkpoint(path, "discriminator", cfg_.to_json(),
                  const_cast<Discriminator*>(this)->params_);
}

void Discriminator::load(const std::string& path) {
  load_checkpoint(path, "discriminator", params_);
}

// --- random baseline ----------------------------------------------------------

GenSequence sample_random_sequence(const SubtreeRepository& repo, const GanConfig& cfg, Rng& rng) {
  if (repo.start_ids.empty()) throw EmptyCorpus("empty start list");
  std::vector<int> starts(repo.start_ids.begin(), repo.start_ids.end());
  int budget = cfg.height_budget > 0 ? cfg.height_budget : repo.screen_height;
  auto height_of = [&](int id) {
    const Subtree& st = repo.at(id);
    int h = st.width_px > 0 ? static_cast<int>(std::lround(static_cast<double>(st.height_px) *
                                                           repo.screen_width / st.width_px))
                            : st.height_px;
    return std::max(1, h);
  };
  GenSequence out;
  out.tokens.push_back(starts[rng.uniform_int(static_cast<int>(starts.size()))]);
  int height = height_of(out.tokens[0]);
  if (repo.end_ids.count(out.tokens[0])) return {out.tokens, Termination::kEndToken};
  while (static_cast<int>(out.tokens.size()) < cfg.max_len) {
    int next = rng.uniform_int(repo.size());
    if (height + height_of(next) > budget) {
      out.terminated_by = Termination::kHeightBudget;
      return out;
    }
    out.tokens.push_back(next);
    height += height_of(next);
    if (repo.end_ids.count(next)) {
      out.terminated_by = Termination::kEndToken;
      return out;
    }
  }
  out.terminated_by = Termination::kLengthCap;
  return out;
}

// --- trainer ----------------------------------------------------------

GanTrainer::GanTrainer(const GanConfig& cfg, const SubtreeRepository& repo,
                       const std::map<int, Vec>& style_embeddings,
                       const std::vector<TokenSequence>& real_sequences, uint64_t seed)
    : cfg_(cfg),
      repo_(&repo),
      style_embeddings_(&style_embeddings),
      real_(real_sequences),
      rng_(seed),
      adam_g_({.lr = cfg.lr}),
      adam_d_({.lr = cfg.lr}),
      adam_f_({.lr = cfg.lr}) {
  if (real_.empty()) throw EmptyCorpus("no real sequences");
  cfg_.fusion_weights();  // validate mode early
  gen_ = std::make_unique<Generator>(repo, style_embeddings, cfg_, rng_);
  disc_ = std::make_unique<Discriminator>(repo.size(), cfg_, rng_);
  fusion_s_ = Tensor({3});
  fusion_params_.add("fusion.s", &fusion_s_);
  for (const auto& seq : real_) real_structures_.push_back(sequence_structure(seq, repo));
}

FusionWeights GanTrainer::fusion_weights() const {
  FusionWeights fw = cfg_.fusion_weights();
  fw.s = {fusion_s_.data[0], fusion_s_.data[1], fusion_s_.data[2]};
  return fw;
}

std::vector<std::string> GanTrainer::sample_real_structures(int count) {
  if (static_cast<int>(real_structures_.size()) <= count) return real_structures_;
  std::vector<size_t> idx(real_structures_.size());
  std::iota(idx.begin(), idx.end(), 0);
  rng_.shuffle(idx);
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) out.push_back(real_structures_[idx[static_cast<size_t>(i)]]);
  return out;
}

void GanTrainer::log_entry(const std::string& phase, double loss_g, double loss_c, double loss_s,
                           double mean_reward, double disc_acc) {
  auto lam = fusion_weights().effective_lambda();
  json j{{"step", step_},    {"phase", phase},
         {"loss_g", loss_g}, {"loss_c", loss_c},
         {"loss_s", loss_s}, {"lambda", {lam[0], lam[1], lam[2]}},
         {"mean_reward", mean_reward}, {"disc_acc", disc_acc}};
  log_.push_back(j.dump());
  ++step_;
}

void GanTrainer::pretrain() {
  for (int epoch = 0; epoch < cfg_.pretrain_epochs; ++epoch) {
    std::vector<size_t> idx(real_.size());
    std::iota(idx.begin(), idx.end(), 0);
    rng_.shuffle(idx);
    double total_nll = 0.0;
    int counted = 0;
    for (size_t i = 0; i < idx.size();) {
      gen_->params().zero_grad();
      size_t batch_end = std::min(idx.size(), i + static_cast<size_t>(cfg_.batch));
      for (; i < batch_end; ++i) {
        double nll = gen_->forced_nll(real_[idx[i]], /*train=*/true);
        if (!std::isfinite(nll)) throw Divergence("non-finite pretraining loss");
        total_nll += nll;
        ++counted;
      }
      adam_g_.step(gen_->params());
    }
    double ppl = std::exp(total_nll / std::max(1, counted));
    GUIGAN_LOG_INFO("pretrain epoch %d: perplexity %.3f", epoch, ppl);
    log_entry("pretrain", total_nll / std::max(1, counted), 0.0, 0.0, 0.0, 0.0);
  }
}

std::vector<double> GanTrainer::rollout_reward(const TokenSequence& tokens, int n_rollouts) {
  const size_t T = tokens.size();
  std::vector<double> q(T, 0.0);
  auto states = gen_->states_along(tokens);
  for (size_t t = 0; t + 1 < T; ++t) {
    TokenSequence prefix(tokens.begin(), tokens.begin() + static_cast<long>(t) + 1);
    double sum = 0.0;
    for (int r = 0; r < n_rollouts; ++r) {
      GenSequence comp = gen_->continue_from(prefix, states[t], rng_);
      sum += disc_->score(comp.tokens);
    }
    q[t] = sum / n_rollouts;
  }
  if (T > 0) q[T - 1] = disc_->score(tokens);
  return q;
}

double GanTrainer::d_step() {
  disc_->params().zero_grad();
  int correct = 0;
  for (int k = 0; k < cfg_.batch; ++k) {
    bool is_real = (k % 2 == 0);
    TokenSequence seq = is_real ? real_[rng_.uniform_int(static_cast<int>(real_.size()))]
                                : gen_->sample(rng_).tokens;
    double label = is_real ? 1.0 : 0.0;
    double p = disc_->forward(seq);
    if (!std::isfinite(p)) throw Divergence("non-finite discriminator output");
    if ((p > 0.5) == is_real) ++correct;
    disc_->backward(bce_grad(p, label));
  }
  adam_d_.step(disc_->params());
  double acc = static_cast<double>(correct) / cfg_.batch;
  log_entry("d", 0.0, 0.0, 0.0, 0.0, acc);
  return acc;
}

void GanTrainer::g_step() {
  FusionWeights fw = fusion_weights();
  auto lam = fw.effective_lambda();
  auto real_structs = sample_real_structures(cfg_.batch);
  gen_->params().zero_grad();
  double sum_q = 0.0, sum_lc = 0.0, sum_ls = 0.0;
  int n_q = 0;
  for (int b = 0; b < cfg_.batch; ++b) {
    GenSequence seq = gen_->sample(rng_);
    std::vector<double> q = rollout_reward(seq.tokens, cfg_.rollout_count);
    double lc = style_loss(seq.tokens, *repo_, *style_embeddings_);
    double ls = structure_loss(sequence_structure(seq.tokens, *repo_), real_structs);
    std::vector<double> advantage(seq.tokens.size());
    for (size_t t = 0; t < q.size(); ++t) {
      advantage[t] = lam[0] * q[t] - lam[1] * lc - lam[2] * ls;
      sum_q += q[t];
      ++n_q;
    }
    sum_lc += lc;
    sum_ls += ls;
    gen_->reinforce_backward(seq.tokens, advantage);
  }
  if (!adam_g_.step(gen_->params())) {
    GUIGAN_LOG_ERROR("g-step skipped: non-finite gradient");
    gen_->params().zero_grad();
  }
  double mean_q = n_q > 0 ? sum_q / n_q : 0.0;
  double mean_lc = sum_lc / cfg_.batch;
  double mean_ls = sum_ls / cfg_.batch;
  double loss_g = 1.0 - mean_q;
  if (fw.mode == FusionMode::kTrainable) {
    FuseResult fr = fuse(loss_g, mean_lc, mean_ls, fw);
    fusion_s_.ensure_grad();
    for (int i = 0; i < 3; ++i) fusion_s_.grad[i] = static_cast<float>(fr.ds[i]);
    adam_f_.step(fusion_params_);
    fusion_params_.zero_grad();
  }
  log_entry("g", loss_g, mean_lc, mean_ls, mean_q, 0.0);
}

void GanTrainer::train() {
  pretrain();
  for (int round = 0; round < cfg_.rounds; ++round) {
    for (int d = 0; d < cfg_.d_steps; ++d) d_step();
    for (int g = 0; g < cfg_.g_steps; ++g) g_step();
    GUIGAN_LOG_INFO("adversarial round %d/%d done", round + 1, cfg_.rounds);
  }
}

void GanTrainer::save(const std::string& run_dir) const {
  fs::create_directories(run_dir);
  gen_->save((fs::path(run_dir) / "generator.ckpt").string());
  disc_->save((fs::path(run_dir) / "discriminator.ckpt").string());
  save_checkpoint((fs::path(run_dir) / "fusion.ckpt").string(), "fusion", cfg_.to_json(),
                  const_cast<GanTrainer*>(this)->fusion_params_);
  std::ofstream log(fs::path(run_dir) / "train_log.jsonl");
  if (!log) throw IoError("cannot write train_log.jsonl under " + run_dir);
  for (const auto& line : log_) log << line << "\n";
}

}  // namespace guigan

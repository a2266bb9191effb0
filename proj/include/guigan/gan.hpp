#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "guigan/corpus.hpp"
#include "guigan/losses.hpp"
#include "guigan/ndnet.hpp"

namespace guigan {

enum class Termination { kLengthCap, kEndToken, kHeightBudget };

const char* termination_name(Termination t);
Termination termination_from_name(const std::string& name);

struct GenSequence {
  TokenSequence tokens;
  Termination terminated_by = Termination::kLengthCap;
};

struct GanConfig {
  int embed_dim = 32;
  int hidden_dim = 32;
  int max_len = 30;
  int batch = 32;
  double lr = 0.05;
  int rollout_count = 16;
  int pretrain_epochs = 20;
  int d_steps = 1;
  int g_steps = 1;
  int rounds = 10;
  int height_budget = 0;  // 0 -> corpus screen height
  int disc_filters = 32;
  std::string fusion_mode = "full";  // full|style_only|structure_only|adversarial_only

  // small settings for fast experiments and the test suite
  static GanConfig desk_scale();

  FusionWeights fusion_weights() const;  // mode wiring; s values live in the trainer
  std::string to_json() const;
  static GanConfig from_json(const std::string& text);
};

// LSTM policy over subtree tokens. The first token is uniform over the
// start list; generation stops on an end-list token, the height budget,
// or the length cap.
class Generator {
 public:
  // embedding rows initialized from style embeddings through a seeded
  // random projection (trainable afterwards)
  Generator(const SubtreeRepository& repo, const std::map<int, Vec>& style_embeddings,
            const GanConfig& cfg, Rng& rng);
  // zero-history construction for checkpoint loading
  Generator(const SubtreeRepository& repo, const GanConfig& cfg, Rng& rng);

  GenSequence sample(Rng& rng, const TokenSequence* forced_prefix = nullptr);

  // states after consuming `tokens`; used by rollouts
  struct State {
    Vec h, c;
    int height = 0;
  };
  std::vector<State> states_along(const TokenSequence& tokens) const;
  GenSequence continue_from(const TokenSequence& prefix, const State& state, Rng& rng);

  // teacher-forced mean next-token cross entropy; accumulates gradients
  // when train == true
  double forced_nll(const TokenSequence& tokens, bool train);
  // REINFORCE: gradient of -sum_t advantage[t] * log pi(y_t | prefix);
  // advantage[0] is ignored (the start token is not policy-sampled)
  void reinforce_backward(const TokenSequence& tokens, const std::vector<double>& advantage);

  ParamSet& params() { return params_; }
  const GanConfig& config() const { return cfg_; }
  int token_height(int id) const { return heights_[static_cast<size_t>(id)]; }
  int effective_height_budget() const { return budget_; }

  void save(const std::string& path) const;
  void load(const std::string& path);

 private:
  int sample_next(const Vec& h, Rng& rng) const;

  const SubtreeRepository* repo_;
  GanConfig cfg_;
  Embedding embed_;
  LstmParams lstm_;
  Dense proj_;
  ParamSet params_;
  std::vector<int> heights_;
  std::vector<int> start_list_;
  int budget_ = 0;
};

// Highway-CNN binary classifier over padded token-embedding matrices.
class Discriminator {
 public:
  Discriminator(int vocab, const GanConfig& cfg, Rng& rng);

  double forward(const TokenSequence& tokens);  // caches for backward
  void backward(double dp);
  double score(const TokenSequence& tokens);  // inference only

  ParamSet& params() { return params_; }

  void save(const std::string& path) const;
  void load(const std::string& path);

 private:
  Vec embed_matrix(const TokenSequence& tokens) const;

  GanConfig cfg_;
  int vocab_ = 0;
  Embedding embed_;
  Conv2d conv2_, conv3_;
  Highway highway_;
  Dense out_;
  ParamSet params_;

  struct Cache {
    TokenSequence tokens;
    std::vector<int> argmax2, argmax3;  // time index per filter
    double p = 0.0;
  };
  std::vector<Cache> cache_;
};

// Uniform-policy baseline with the generator's termination rules.
GenSequence sample_random_sequence(const SubtreeRepository& repo, const GanConfig& cfg, Rng& rng);

class GanTrainer {
 public:
  GanTrainer(const GanConfig& cfg, const SubtreeRepository& repo,
             const std::map<int, Vec>& style_embeddings,
             const std::vector<TokenSequence>& real_sequences, uint64_t seed);

  void pretrain();
  double d_step();  // returns batch accuracy
  void g_step();
  void train();  // pretrain + rounds of (d_steps, g_steps), checkpointing off

  // per-prefix Monte-Carlo rewards under the current generator/discriminator
  std::vector<double> rollout_reward(const TokenSequence& tokens, int n_rollouts);

  Generator& generator() { return *gen_; }
  Discriminator& discriminator() { return *disc_; }
  FusionWeights fusion_weights() const;
  const std::vector<std::string>& log_lines() const { return log_; }

  void save(const std::string& run_dir) const;

 private:
  GanConfig cfg_;
  const SubtreeRepository* repo_;
  const std::map<int, Vec>* style_embeddings_;
  std::vector<TokenSequence> real_;
  std::vector<std::string> real_structures_;
  Rng rng_;
  std::unique_ptr<Generator> gen_;
  std::unique_ptr<Discriminator> disc_;
  Tensor fusion_s_;
  ParamSet fusion_params_;
  Adam adam_g_, adam_d_, adam_f_;
  std::vector<std::string> log_;
  int step_ = 0;

  std::vector<std::string> sample_real_structures(int count);
  void log_entry(const std::string& phase, double loss_g, double loss_c, double loss_s,
                 double mean_reward, double disc_acc);
};

}  // namespace guigan

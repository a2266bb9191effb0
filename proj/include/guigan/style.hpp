#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "guigan/corpus.hpp"
#include "guigan/ndnet.hpp"

namespace guigan {

struct SiameseConfig {
  int input_h = 64;
  int input_w = 32;
  int first_filters = 8;               // doubles per block
  std::array<int, 4> kernels = {3, 2, 2, 2};
  int embedding_dim = 64;
  int batch = 32;
  double lr = 0.01;
  int epochs = 10;
  int pairs_per_epoch = 256;
  bool pad_to_square = true;  // mid-gray padding on extreme aspect ratios

  // full-resolution settings: 512x256 input, 64 filters, kernels 10/7/4/4,
  // 50 epochs
  static SiameseConfig full_scale();

  std::string to_json() const;
  static SiameseConfig from_json(const std::string& text);
};

struct PairSample {
  int a = 0, b = 0;
  int label = 0;  // 1 same app, 0 different apps
};

// Balanced 50/50 positive/negative pairs; a != b for positives.
// Throws InsufficientCorpus.
std::vector<PairSample> sample_pairs(const SubtreeRepository& repo, Rng& rng, int count);

// Dual-channel CNN with shared weights and a weighted-L1 sigmoid head.
class SiameseNet {
 public:
  SiameseNet(const SiameseConfig& config, Rng& rng);

  const SiameseConfig& config() const { return cfg_; }
  ParamSet& params() { return params_; }

  // image -> normalized (3, H, W) input, with optional square padding
  Vec preprocess(const Image& img) const;

  // embedding without gradient tracking
  Vec embed(const Image& img);
  Vec embed_input(const Vec& input);

  // p = sigmoid(sum_k w_k |Va - Vb| + b); cached for pair_backward
  double pair_forward(const Vec& input_a, const Vec& input_b);
  // dp: gradient on the returned probability
  void pair_backward(double dp);

  void save(const std::string& path) const;
  static std::unique_ptr<SiameseNet> load(const std::string& path);

  // drop any pending forward caches (inference-only passes)
  void clear_caches();

 private:
  Vec channel_forward(const Vec& input);
  Vec channel_backward(const Vec& d_embedding);

  SiameseConfig cfg_;
  std::array<Conv2d, 4> convs_;
  std::array<Relu, 4> relus_;
  std::array<MaxPool2, 4> pools_;
  Dense fc_;
  Tensor head_w_, head_b_;
  ParamSet params_;

  struct PairCache {
    Vec va, vb, diff_sign;  // sign(va - vb)
    Vec absdiff;
    double p = 0.0;
  };
  std::vector<PairCache> pair_cache_;
};

struct EpochLog {
  int epoch = 0;
  double loss = 0.0;
  double heldout_accuracy = 0.0;
};

struct SiameseTrainResult {
  std::unique_ptr<SiameseNet> net;
  std::vector<EpochLog> log;
  double heldout_accuracy = 0.0;
};

// Binary cross-entropy over balanced pairs with Adam; held-out split keeps
// whole screens out of training. Throws Divergence on a non-finite loss.
SiameseTrainResult train_siamese(const SiameseConfig& config, const SubtreeRepository& repo,
                                 Rng& rng);

// Embeddings for every token in the repository.
std::map<int, Vec> embed_repository(SiameseNet& net, const SubtreeRepository& repo);

void save_embeddings(const std::map<int, Vec>& embeddings, const std::string& path);
std::map<int, Vec> load_embeddings(const std::string& path);

}  // namespace guigan

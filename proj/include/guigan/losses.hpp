#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "guigan/corpus.hpp"

namespace guigan {

// h = 1 - H(G|C)/H(G); 1.0 when there is a single class.
double homogeneity(const std::vector<int>& class_labels, const std::vector<int>& cluster_ids);

// Seeded k-means (farthest-point init from the first embedding, L2,
// <= 100 iterations) with k = number of distinct app labels.
std::vector<int> cluster_for_homogeneity(const std::vector<std::vector<float>>& embeddings,
                                         const std::vector<int>& app_labels);

// Loss_c: 0 for single-app sequences, exp(-h) otherwise.
double style_loss(const TokenSequence& sequence, const SubtreeRepository& repo,
                  const std::map<int, std::vector<float>>& embeddings);

// Levenshtein distance over structure symbols (multi-char tokens compare
// as units).
int med(const std::vector<std::string>& s, const std::vector<std::string>& t);
int med(const std::string& s, const std::string& t);

// Loss_s = min over the real batch of med / max(len); in [0, 1].
double structure_loss(const std::string& gen_structure, const std::vector<std::string>& real_batch);

// Concatenated per-token structure string of a sequence.
std::string sequence_structure(const TokenSequence& seq, const SubtreeRepository& repo);

enum class FusionMode { kFixed, kTrainable };

struct FusionWeights {
  FusionMode mode = FusionMode::kTrainable;
  std::array<double, 3> lambda_fixed = {1.0, 1.0, 1.0};
  std::array<double, 3> s = {0.0, 0.0, 0.0};  // log-variance params, trainable mode

  std::array<double, 3> effective_lambda() const;
};

struct FuseResult {
  double value = 0.0;
  std::array<double, 3> ds = {0.0, 0.0, 0.0};  // d value / d s_i (trainable only)
};

// Fixed: sum lambda_i L_i. Trainable: sum exp(-s_i) L_i + s_i.
FuseResult fuse(double loss_g, double loss_c, double loss_s, const FusionWeights& weights);

}  // namespace guigan

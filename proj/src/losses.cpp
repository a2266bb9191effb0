#include "guigan/losses.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "guigan/errors.hpp"

namespace guigan {

double homogeneity(const std::vector<int>& class_labels, const std::vector<int>& cluster_ids) {
  if (class_labels.size() != cluster_ids.size() || class_labels.empty())
    throw LengthMismatch("homogeneity inputs must be equal-length and non-empty");
  const double n = static_cast<double>(class_labels.size());

  std::map<int, int> n_g, n_c;
  std::map<std::pair<int, int>, int> n_gc;
  for (size_t i = 0; i < class_labels.size(); ++i) {
    ++n_g[class_labels[i]];
    ++n_c[cluster_ids[i]];
    ++n_gc[{class_labels[i], cluster_ids[i]}];
  }

  double h_g = 0.0;
  for (auto& [_, cnt] : n_g) {
    double p = cnt / n;
    h_g -= p * std::log(p);
  }
  if (h_g == 0.0) return 1.0;  // single class

  double h_g_given_c = 0.0;
  for (auto& [gc, cnt] : n_gc) {
    double p = cnt / n;
    h_g_given_c -= p * std::log(static_cast<double>(cnt) / n_c[gc.second]);
  }
  return 1.0 - h_g_given_c / h_g;
}

namespace {

double sq_dist(const std::vector<float>& a, const std::vector<float>& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double x = static_cast<double>(a[i]) - b[i];
    d += x * x;
  }
  return d;
}

}  // namespace

std::vector<int> cluster_for_homogeneity(const std::vector<std::vector<float>>& embeddings,
                                         const std::vector<int>& app_labels) {
  if (embeddings.size() != app_labels.size() || embeddings.empty())
    throw LengthMismatch("cluster_for_homogeneity inputs must match");
  int k = static_cast<int>(std::set<int>(app_labels.begin(), app_labels.end()).size());
  const size_t n = embeddings.size();

  // degenerate: all embeddings identical
  bool all_same = true;
  for (size_t i = 1; i < n && all_same; ++i) all_same = sq_dist(embeddings[0], embeddings[i]) == 0.0;
  if (all_same || k <= 1) return std::vector<int>(n, 0);

  // farthest-point initialization from the first embedding
  std::vector<std::vector<float>> centers;
  centers.push_back(embeddings[0]);
  std::vector<double> min_d(n);
  while (static_cast<int>(centers.size()) < k) {
    size_t best = 0;
    double best_d = -1.0;
    for (size_t i = 0; i < n; ++i) {
      double d = sq_dist(embeddings[i], centers[0]);
      for (size_t c = 1; c < centers.size(); ++c) d = std::min(d, sq_dist(embeddings[i], centers[c]));
      min_d[i] = d;
      if (d > best_d) {
        best_d = d;
        best = i;
      }
    }
    centers.push_back(embeddings[best]);
  }

  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sq_dist(embeddings[i], centers[0]);
      for (int c = 1; c < k; ++c) {
        double d = sq_dist(embeddings[i], centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;
    const size_t dim = embeddings[0].size();
    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<int> counts(k, 0);
    for (size_t i = 0; i < n; ++i) {
      ++counts[assign[i]];
      for (size_t d = 0; d < dim; ++d) sums[assign[i]][d] += embeddings[i][d];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its center
      for (size_t d = 0; d < dim; ++d) centers[c][d] = static_cast<float>(sums[c][d] / counts[c]);
    }
  }
  return assign;
}

double style_loss(const TokenSequence& sequence, const SubtreeRepository& repo,
                  const std::map<int, std::vector<float>>& embeddings) {
  if (sequence.empty()) throw EmptySequence("style_loss on empty sequence");
  std::map<std::string, int> app_idx;
  std::vector<int> labels;
  std::vector<std::vector<float>> embs;
  for (int id : sequence) {
    const Subtree& st = repo.at(id);
    auto it = embeddings.find(id);
    if (it == embeddings.end())
      throw MissingEmbedding("no embedding for token " + std::to_string(id));
    auto [lit, _] = app_idx.emplace(st.app_id, static_cast<int>(app_idx.size()));
    labels.push_back(lit->second);
    embs.push_back(it->second);
  }
  if (app_idx.size() <= 1) return 0.0;
  std::vector<int> clusters = cluster_for_homogeneity(embs, labels);
  return std::exp(-homogeneity(labels, clusters));
}

int med(const std::vector<std::string>& s, const std::vector<std::string>& t) {
  const size_t m = s.size(), n = t.size();
  std::vector<int> prev(n + 1), cur(n + 1);
  for (size_t j = 0; j <= n; ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= m; ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= n; ++j) {
      int sub = prev[j - 1] + (s[i - 1] == t[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

int med(const std::string& s, const std::string& t) {
  return med(symbol_tokens(s), symbol_tokens(t));
}

double structure_loss(const std::string& gen_structure,
                      const std::vector<std::string>& real_batch) {
  if (real_batch.empty()) throw EmptyBatch("structure_loss needs a non-empty real batch");
  auto gen_tokens = symbol_tokens(gen_structure);
  double best = 1.0;
  for (const std::string& real : real_batch) {
    auto real_tokens = symbol_tokens(real);
    size_t denom = std::max(gen_tokens.size(), real_tokens.size());
    double loss = denom == 0 ? 0.0 : static_cast<double>(med(gen_tokens, real_tokens)) / denom;
    best = std::min(best, loss);
  }
  return best;
}

std::string sequence_structure(const TokenSequence& seq, const SubtreeRepository& repo) {
  std::string out;
  for (int id : seq) out += repo.at(id).structure_string;
  return out;
}

std::array<double, 3> FusionWeights::effective_lambda() const {
  if (mode == FusionMode::kFixed) return lambda_fixed;
  return {std::exp(-s[0]), std::exp(-s[1]), std::exp(-s[2])};
}

FuseResult fuse(double loss_g, double loss_c, double loss_s, const FusionWeights& weights) {
  const std::array<double, 3> losses = {loss_g, loss_c, loss_s};
  for (double l : losses)
    if (!std::isfinite(l)) throw NonFiniteLoss("fuse received a non-finite loss");
  FuseResult out;
  if (weights.mode == FusionMode::kFixed) {
    for (int i = 0; i < 3; ++i) out.value += weights.lambda_fixed[i] * losses[i];
    return out;
  }
  for (int i = 0; i < 3; ++i) {
    double w = std::exp(-weights.s[i]);
    out.value += w * losses[i] + weights.s[i];
    out.ds[i] = -w * losses[i] + 1.0;
  }
  return out;
}

}  // namespace guigan

#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "guigan/corpus.hpp"
#include "guigan/rng.hpp"
#include "guigan/style.hpp"

namespace guigan {

struct FeatureMatrix {
  Eigen::MatrixXd rows;  // samples x dim
  std::string source;    // "real" | "generated"
};

struct EvalReport {
  double fid = 0.0;
  double one_nna = 0.0;
  double mean_homogeneity = 1.0;
  double mean_structure_loss = 0.0;
  int real_count = 0;
  int generated_count = 0;
  std::string embedder_digest;

  std::string to_json() const;
};

// Style embeddings of whole rendered images (resized to the siamese
// input size), 64-bit rows.
FeatureMatrix extract_features(const std::vector<Image>& images, SiameseNet& embedder,
                               const std::string& source_tag);

// Frechet distance between Gaussian fits: |mu_r - mu_g|^2 +
// Tr(Cr + Cg - 2 (Cr Cg)^(1/2)), ridge 1e-6, eigenvalues clamped at 0.
double fid(const FeatureMatrix& real, const FeatureMatrix& gen);

// Leave-one-out 1-NN accuracy over the pooled set; sets must have equal
// row counts (callers subsample). Ties break toward the lower row index.
double one_nna(const FeatureMatrix& real, const FeatureMatrix& gen);

// Full report. Counts are equalized by seeded subsampling; the optional
// generated token sequences feed mean homogeneity / structure loss
// against the real corpus.
EvalReport evaluate(const std::vector<Image>& real_images,
                    const std::vector<Image>& generated_images, SiameseNet& embedder,
                    const SubtreeRepository* repo,
                    const std::vector<TokenSequence>* generated_sequences,
                    const std::map<int, Vec>* embeddings,
                    const std::vector<std::string>* real_structures, uint64_t seed);

// FNV-1a digest of a checkpoint's parameter bytes, recorded in reports so a
// result can be traced back to the exact embedder that produced it.
std::string checkpoint_digest(const std::string& ckpt_path);

}  // namespace guigan

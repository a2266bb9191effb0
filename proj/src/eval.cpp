#include "guigan/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "guigan/errors.hpp"
#include "guigan/losses.hpp"
#include "json.hpp"

using nlohmann::json;

namespace guigan {

std::string EvalReport::to_json() const {
  json j{{"fid", fid},
         {"one_nna", one_nna},
         {"mean_homogeneity", mean_homogeneity},
         {"mean_structure_loss", mean_structure_loss},
         {"real_count", real_count},
         {"generated_count", generated_count},
         {"embedder_digest", embedder_digest}};
  return j.dump(2);
}

FeatureMatrix extract_features(const std::vector<Image>& images, SiameseNet& embedder,
                               const std::string& source_tag) {
  if (images.empty()) throw TooFewSamples("no images to extract features from");
  const int dim = embedder.config().embedding_dim;
  FeatureMatrix fm;
  fm.source = source_tag;
  fm.rows.resize(static_cast<Eigen::Index>(images.size()), dim);
  for (size_t i = 0; i < images.size(); ++i) {
    Vec v = embedder.embed(images[i]);
    for (int d = 0; d < dim; ++d) fm.rows(static_cast<Eigen::Index>(i), d) = v[d];
  }
  if (!fm.rows.allFinite()) throw NonFiniteFeature("non-finite feature row");
  return fm;
}

namespace {

constexpr double kCovRidge = 1e-6;

Eigen::MatrixXd covariance(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  Eigen::RowVectorXd mu = x.colwise().mean();
  Eigen::MatrixXd centered = x.rowwise() - mu;
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
  cov.diagonal().array() += kCovRidge;
  return cov;
}

// symmetric PSD square root, eigenvalues clamped at 0
Eigen::MatrixXd sym_sqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

double fid(const FeatureMatrix& real, const FeatureMatrix& gen) {
  if (real.rows.cols() != gen.rows.cols())
    throw DimensionMismatch("feature dimensions differ");
  if (real.rows.rows() < 2 || gen.rows.rows() < 2)
    throw TooFewSamples("need >= 2 rows per set for covariance estimation");
  if (!real.rows.allFinite() || !gen.rows.allFinite())
    throw NonFiniteFeature("non-finite feature input to fid");

  Eigen::VectorXd mu_r = real.rows.colwise().mean();
  Eigen::VectorXd mu_g = gen.rows.colwise().mean();
  Eigen::MatrixXd c_r = covariance(real.rows);
  Eigen::MatrixXd c_g = covariance(gen.rows);

  Eigen::MatrixXd s = sym_sqrt(c_r);
  Eigen::MatrixXd inner = s * c_g * s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(inner);
  double sqrt_trace = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();

  return (mu_r - mu_g).squaredNorm() + c_r.trace() + c_g.trace() - 2.0 * sqrt_trace;
}

double one_nna(const FeatureMatrix& real, const FeatureMatrix& gen) {
  if (real.rows.cols() != gen.rows.cols())
    throw DimensionMismatch("feature dimensions differ");
  if (real.rows.rows() != gen.rows.rows())
    throw LengthMismatch("one_nna requires equal row counts (subsample first)");
  const Eigen::Index n = real.rows.rows();
  if (n < 2) throw TooFewSamples("need >= 2 samples per set");

  Eigen::MatrixXd pooled(2 * n, real.rows.cols());
  pooled << real.rows, gen.rows;
  int correct = 0;
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    Eigen::Index best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < 2 * n; ++j) {
      if (j == i) continue;
      double d = (pooled.row(i) - pooled.row(j)).squaredNorm();
      if (d < best_d) {  // strict: ties keep the lower index
        best_d = d;
        best = j;
      }
    }
    bool same_class = (i < n) == (best < n);
    if (same_class) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(2 * n);
}

EvalReport evaluate(const std::vector<Image>& real_images,
                    const std::vector<Image>& generated_images, SiameseNet& embedder,
                    const SubtreeRepository* repo,
                    const std::vector<TokenSequence>* generated_sequences,
                    const std::map<int, Vec>* embeddings,
                    const std::vector<std::string>* real_structures, uint64_t seed) {
  if (real_images.empty() || generated_images.empty())
    throw TooFewSamples("evaluate needs non-empty image sets");
  Rng rng(seed);
  auto subsample = [&](const std::vector<Image>& images, size_t k) {
    std::vector<size_t> idx(images.size());
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    std::vector<Image> out;
    for (size_t i : idx) out.push_back(images[i]);
    return out;
  };
  size_t k = std::min(real_images.size(), generated_images.size());
  std::vector<Image> real_sub = subsample(real_images, k);
  std::vector<Image> gen_sub = subsample(generated_images, k);

  EvalReport report;
  report.real_count = static_cast<int>(k);
  report.generated_count = static_cast<int>(k);
  FeatureMatrix fr = extract_features(real_sub, embedder, "real");
  FeatureMatrix fg = extract_features(gen_sub, embedder, "generated");
  report.fid = fid(fr, fg);
  report.one_nna = one_nna(fr, fg);

  if (generated_sequences && repo && embeddings) {
    double sum_h = 0.0, sum_s = 0.0;
    int counted = 0;
    for (const auto& seq : *generated_sequences) {
      if (seq.empty()) continue;
      std::map<std::string, int> app_idx;
      std::vector<int> labels;
      std::vector<std::vector<float>> embs;
      for (int id : seq) {
        auto [it, _] = app_idx.emplace(repo->at(id).app_id, static_cast<int>(app_idx.size()));
        labels.push_back(it->second);
        embs.push_back(embeddings->at(id));
      }
      double h = 1.0;
      if (app_idx.size() > 1) h = homogeneity(labels, cluster_for_homogeneity(embs, labels));
      sum_h += h;
      if (real_structures && !real_structures->empty())
        sum_s += structure_loss(sequence_structure(seq, *repo), *real_structures);
      ++counted;
    }
    if (counted > 0) {
      report.mean_homogeneity = sum_h / counted;
      report.mean_structure_loss = sum_s / counted;
    }
  }
  return report;
}

std::string checkpoint_digest(const std::string& ckpt_path) {
  std::ifstream in(ckpt_path + ".bin", std::ios::binary);
  if (!in) throw IoError("cannot read checkpoint data: " + ckpt_path + ".bin");
  uint64_t hash = 1469598103934665603ULL;  // FNV-1a
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ULL;
    }
    if (!in) break;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(hash));
  return out;
}

}  // namespace guigan

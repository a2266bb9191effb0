#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "guigan/errors.hpp"
#include "guigan/losses.hpp"
#include "guigan/rng.hpp"

using namespace guigan;

namespace {

// Brute-force Levenshtein reference: full (m+1)x(n+1) table, no tricks.
int med_reference(const std::string& s, const std::string& t) {
  const size_t m = s.size(), n = t.size();
  std::vector<std::vector<int>> d(m + 1, std::vector<int>(n + 1, 0));
  for (size_t i = 0; i <= m; ++i) d[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= n; ++j) d[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= m; ++i)
    for (size_t j = 1; j <= n; ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (s[i - 1] == t[j - 1] ? 0 : 1)});
  return d[m][n];
}

std::string random_string(Rng& rng, int max_len, int alphabet) {
  int len = rng.uniform_int(max_len + 1);
  std::string s;
  for (int i = 0; i < len; ++i) s.push_back(static_cast<char>('a' + rng.uniform_int(alphabet)));
  return s;
}

// Independent entropy-based homogeneity: h = 1 - H(G|C)/H(G), natural log.
double homogeneity_reference(const std::vector<int>& classes, const std::vector<int>& clusters) {
  const double n = static_cast<double>(classes.size());
  std::map<int, int> class_count, cluster_count;
  std::map<std::pair<int, int>, int> joint;
  for (size_t i = 0; i < classes.size(); ++i) {
    class_count[classes[i]]++;
    cluster_count[clusters[i]]++;
    joint[{clusters[i], classes[i]}]++;
  }
  double hg = 0.0;
  for (auto& [c, k] : class_count) {
    double p = k / n;
    hg -= p * std::log(p);
  }
  if (hg == 0.0) return 1.0;
  double hgc = 0.0;
  for (auto& [key, k] : joint) {
    double p = k / n;
    double pc = cluster_count[key.first] / n;
    hgc -= p * std::log(p / pc);
  }
  return 1.0 - hgc / hg;
}

}  // namespace

TEST_CASE("med agrees with the brute-force reference on 1000 random pairs") {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    std::string a = random_string(rng, 12, 4);
    std::string b = random_string(rng, 12, 4);
    CHECK(med(a, b) == med_reference(a, b));
  }
}

TEST_CASE("med satisfies the metric axioms") {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    std::string a = random_string(rng, 10, 3);
    std::string b = random_string(rng, 10, 3);
    std::string c = random_string(rng, 10, 3);
    int dab = med(a, b), dba = med(b, a), dac = med(a, c), dcb = med(c, b);
    CHECK(dab >= 0);
    CHECK(dab == dba);                      // symmetry
    CHECK((dab == 0) == (a == b));          // identity of indiscernibles
    CHECK(dab <= dac + dcb);                // triangle inequality
    CHECK(med(a, a) == 0);
    // bounded by the longer string
    CHECK(dab <= static_cast<int>(std::max(a.size(), b.size())));
  }
}

TEST_CASE("med treats multi-character structure symbols as single units") {
  // "#12;" is one symbol, not four characters
  std::vector<std::string> s = {"a", "#12;", "b"};
  std::vector<std::string> t = {"a", "#13;", "b"};
  CHECK(med(s, t) == 1);
  CHECK(med(symbol_tokens("a#12;b"), symbol_tokens("a#13;b")) == 1);
  CHECK(med(std::string("a#12;b"), std::string("ab")) == 1);
}

TEST_CASE("homogeneity matches direct entropy computation on 200 random labelings") {
  Rng rng(31337);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + rng.uniform_int(8);
    int n_classes = 1 + rng.uniform_int(3);
    int n_clusters = 1 + rng.uniform_int(3);
    std::vector<int> classes(static_cast<size_t>(n)), clusters(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      classes[static_cast<size_t>(i)] = rng.uniform_int(n_classes);
      clusters[static_cast<size_t>(i)] = rng.uniform_int(n_clusters);
    }
    double got = homogeneity(classes, clusters);
    double want = homogeneity_reference(classes, clusters);
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
    CHECK(got >= -1e-12);
    CHECK(got <= 1.0 + 1e-12);
  }
}

TEST_CASE("homogeneity boundary cases") {
  // perfect clustering: every cluster pure
  CHECK(homogeneity({0, 0, 1, 1}, {5, 5, 9, 9}) == doctest::Approx(1.0));
  // single class: defined as 1
  CHECK(homogeneity({2, 2, 2}, {0, 1, 2}) == doctest::Approx(1.0));
  // one cluster holding two balanced classes: h = 0
  CHECK(homogeneity({0, 1, 0, 1}, {3, 3, 3, 3}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(homogeneity({0, 1}, {0}), LengthMismatch);
  CHECK_THROWS_AS(homogeneity({}, {}), LengthMismatch);
}

TEST_CASE("k-means clustering is deterministic and separates far clusters") {
  std::vector<std::vector<float>> embs;
  std::vector<int> labels;
  Rng rng(4);
  for (int i = 0; i < 6; ++i) {
    float base = (i < 3) ? 0.0f : 10.0f;
    embs.push_back({base + static_cast<float>(rng.uniform(-0.1, 0.1)),
                    base + static_cast<float>(rng.uniform(-0.1, 0.1))});
    labels.push_back(i < 3 ? 0 : 1);
  }
  auto c1 = cluster_for_homogeneity(embs, labels);
  auto c2 = cluster_for_homogeneity(embs, labels);
  CHECK(c1 == c2);
  CHECK(homogeneity(labels, c1) == doctest::Approx(1.0));
  // identical embeddings collapse to one cluster
  std::vector<std::vector<float>> same(4, {1.0f, 2.0f});
  auto c3 = cluster_for_homogeneity(same, {0, 0, 1, 1});
  for (int c : c3) CHECK(c == c3[0]);
}

TEST_CASE("style loss is zero for single-app sequences and exp(-h) otherwise") {
  // build a tiny repository by hand
  SubtreeRepository repo;
  for (int i = 0; i < 6; ++i) {
    Subtree st;
    st.id = i;
    st.app_id = i < 3 ? "app_a" : "app_b";
    st.screen_id = "s";
    repo.subtrees.push_back(st);
    repo.app_index[st.app_id].push_back(i);
  }
  std::map<int, std::vector<float>> embeddings;
  for (int i = 0; i < 6; ++i)
    embeddings[i] = {i < 3 ? 0.0f : 5.0f, static_cast<float>(i % 3) * 0.01f};

  CHECK(style_loss({0, 1, 2}, repo, embeddings) == 0.0);       // single app
  CHECK(style_loss({4, 5}, repo, embeddings) == 0.0);          // single app
  double multi = style_loss({0, 1, 3, 4}, repo, embeddings);   // two apps, separable
  CHECK(multi == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
  // any multi-app value sits in [e^-1, 1]
  CHECK(multi >= std::exp(-1.0) - 1e-12);
  CHECK(multi <= 1.0 + 1e-12);

  std::map<int, std::vector<float>> missing = embeddings;
  missing.erase(3);
  CHECK_THROWS_AS(style_loss({0, 3}, repo, missing), MissingEmbedding);
}

TEST_CASE("structure loss is the batch-min normalized edit distance") {
  std::vector<std::string> real = {"abc", "abcd", "xy"};
  // exact match somewhere in the batch -> 0
  CHECK(structure_loss("abc", real) == doctest::Approx(0.0));
  // one insertion against "abcd", normalized by max(len)=4, beats 1/3 vs "abc"
  CHECK(structure_loss("abd", real) == doctest::Approx(1.0 / 4.0));
  // bounded in [0, 1]
  Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    std::string g = random_string(rng, 9, 4);
    double v = structure_loss(g, real);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK_THROWS_AS(structure_loss("abc", {}), EmptyBatch);
}

TEST_CASE("fuse computes fixed and trainable objectives with exact s-gradients") {
  FusionWeights fixed;
  fixed.mode = FusionMode::kFixed;
  fixed.lambda_fixed = {2.0, 0.5, 1.0};
  FuseResult fr = fuse(0.3, 0.4, 0.5, fixed);
  CHECK(fr.value == doctest::Approx(2.0 * 0.3 + 0.5 * 0.4 + 1.0 * 0.5));
  CHECK(fr.ds[0] == 0.0);

  FusionWeights tr;
  tr.mode = FusionMode::kTrainable;
  tr.s = {0.2, -0.3, 0.7};
  double lg = 0.6, lc = 0.25, ls = 0.8;
  FuseResult t = fuse(lg, lc, ls, tr);
  double expect = std::exp(-0.2) * lg + 0.2 + std::exp(0.3) * lc - 0.3 + std::exp(-0.7) * ls + 0.7;
  CHECK(t.value == doctest::Approx(expect).epsilon(1e-9));

  // central finite differences on each s_i, >= 20 seeds
  Rng rng(55);
  for (int trial = 0; trial < 25; ++trial) {
    FusionWeights w;
    w.mode = FusionMode::kTrainable;
    for (auto& s : w.s) s = rng.uniform(-1.0, 1.0);
    double g = rng.uniform(0.0, 1.0), c = rng.uniform(0.0, 1.0), sl = rng.uniform(0.0, 1.0);
    FuseResult res = fuse(g, c, sl, w);
    for (int i = 0; i < 3; ++i) {
      const double eps = 1e-6;
      FusionWeights up = w, down = w;
      up.s[static_cast<size_t>(i)] += eps;
      down.s[static_cast<size_t>(i)] -= eps;
      double numeric = (fuse(g, c, sl, up).value - fuse(g, c, sl, down).value) / (2 * eps);
      CHECK(res.ds[static_cast<size_t>(i)] == doctest::Approx(numeric).epsilon(1e-3));
    }
  }

  // effective lambdas follow exp(-s) in trainable mode
  auto lam = tr.effective_lambda();
  CHECK(lam[0] == doctest::Approx(std::exp(-0.2)));
  CHECK(lam[1] == doctest::Approx(std::exp(0.3)));
  CHECK(lam[2] == doctest::Approx(std::exp(-0.7)));
}

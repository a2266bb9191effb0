#include "guigan/style.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "guigan/errors.hpp"
#include "guigan/log.hpp"
#include "json.hpp"

using nlohmann::json;

namespace guigan {

SiameseConfig SiameseConfig::full_scale() {
  SiameseConfig cfg;
  cfg.input_h = 512;
  cfg.input_w = 256;
  cfg.first_filters = 64;
  cfg.kernels = {10, 7, 4, 4};
  cfg.epochs = 50;
  cfg.lr = 0.05;
  return cfg;
}

std::string SiameseConfig::to_json() const {
  json j{{"input_h", input_h},
         {"input_w", input_w},
         {"first_filters", first_filters},
         {"kernels", kernels},
         {"embedding_dim", embedding_dim},
         {"batch", batch},
         {"lr", lr},
         {"epochs", epochs},
         {"pairs_per_epoch", pairs_per_epoch},
         {"pad_to_square", pad_to_square}};
  return j.dump();
}

SiameseConfig SiameseConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  SiameseConfig cfg;
  cfg.input_h = j.value("input_h", cfg.input_h);
  cfg.input_w = j.value("input_w", cfg.input_w);
  cfg.first_filters = j.value("first_filters", cfg.first_filters);
  if (j.contains("kernels")) cfg.kernels = j.at("kernels").get<std::array<int, 4>>();
  cfg.embedding_dim = j.value("embedding_dim", cfg.embedding_dim);
  cfg.batch = j.value("batch", cfg.batch);
  cfg.lr = j.value("lr", cfg.lr);
  cfg.epochs = j.value("epochs", cfg.epochs);
  cfg.pairs_per_epoch = j.value("pairs_per_epoch", cfg.pairs_per_epoch);
  cfg.pad_to_square = j.value("pad_to_square", cfg.pad_to_square);
  return cfg;
}

namespace {

struct AppPool {
  std::vector<std::string> apps;
  std::vector<std::vector<int>> ids;  // ids[i] for apps[i]
};

std::vector<PairSample> sample_pairs_from(const AppPool& pool, Rng& rng, int count) {
  std::vector<size_t> usable;
  for (size_t i = 0; i < pool.apps.size(); ++i)
    if (pool.ids[i].size() >= 2) usable.push_back(i);
  if (usable.size() < 2)
    throw InsufficientCorpus("need >= 2 apps with >= 2 subtrees each for pair sampling");

  std::vector<PairSample> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    PairSample p;
    p.label = (i % 2 == 0) ? 1 : 0;  // exact 50/50 balance
    if (p.label == 1) {
      const auto& ids = pool.ids[usable[rng.uniform_int(static_cast<int>(usable.size()))]];
      p.a = ids[rng.uniform_int(static_cast<int>(ids.size()))];
      do {
        p.b = ids[rng.uniform_int(static_cast<int>(ids.size()))];
      } while (p.b == p.a);
    } else {
      int ia = rng.uniform_int(static_cast<int>(usable.size()));
      int ib;
      do {
        ib = rng.uniform_int(static_cast<int>(usable.size()));
      } while (ib == ia);
      const auto& a_ids = pool.ids[usable[ia]];
      const auto& b_ids = pool.ids[usable[ib]];
      p.a = a_ids[rng.uniform_int(static_cast<int>(a_ids.size()))];
      p.b = b_ids[rng.uniform_int(static_cast<int>(b_ids.size()))];
    }
    out.push_back(p);
  }
  return out;
}

AppPool full_pool(const SubtreeRepository& repo) {
  AppPool pool;
  for (const auto& [app, ids] : repo.app_index) {
    pool.apps.push_back(app);
    pool.ids.push_back(ids);
  }
  return pool;
}

}  // namespace

std::vector<PairSample> sample_pairs(const SubtreeRepository& repo, Rng& rng, int count) {
  return sample_pairs_from(full_pool(repo), rng, count);
}

SiameseNet::SiameseNet(const SiameseConfig& config, Rng& rng) : cfg_(config) {
  int c = 3, h = cfg_.input_h, w = cfg_.input_w;
  int filters = cfg_.first_filters;
  for (int b = 0; b < 4; ++b) {
    int k = cfg_.kernels[b];
    if (h < k || w < k || (h - k + 1) < 2 || (w - k + 1) < 2)
      throw InvalidSpec("siamese input " + std::to_string(cfg_.input_h) + "x" +
                        std::to_string(cfg_.input_w) + " does not survive conv block " +
                        std::to_string(b));
    convs_[b] = Conv2d(c, h, w, filters, k, k, rng);
    pools_[b] = MaxPool2(filters, convs_[b].out_h(), convs_[b].out_w());
    c = filters;
    h = pools_[b].out_h();
    w = pools_[b].out_w();
    if (h <= 0 || w <= 0)
      throw InvalidSpec("siamese spatial dims collapse at block " + std::to_string(b));
    filters *= 2;
  }
  fc_ = Dense(c * h * w, cfg_.embedding_dim, rng);
  head_w_ = Tensor({cfg_.embedding_dim});
  head_b_ = Tensor({1});
  head_w_.init_uniform(rng, cfg_.embedding_dim);
  head_b_.init_uniform(rng, cfg_.embedding_dim);

  for (int b = 0; b < 4; ++b) convs_[b].register_params(params_, "conv" + std::to_string(b));
  fc_.register_params(params_, "fc");
  params_.add("head.w", &head_w_);
  params_.add("head.b", &head_b_);
}

Vec SiameseNet::preprocess(const Image& img) const {
  if (img.empty()) throw EmptyImage("preprocess on empty image");
  Image src = img;
  if (cfg_.pad_to_square) {
    double aspect = static_cast<double>(img.width) / img.height;
    if (aspect > 4.0 || aspect < 0.25) {
      int side = std::max(img.width, img.height);
      Image padded(side, side, {128, 128, 128});
      int ox = (side - img.width) / 2;
      int oy = (side - img.height) / 2;
      for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
          const uint8_t* p = img.at(x, y);
          padded.set(x + ox, y + oy, {p[0], p[1], p[2]});
        }
      src = std::move(padded);
    }
  }
  Image resized = resize_nearest(src, cfg_.input_w, cfg_.input_h);
  Vec out(static_cast<size_t>(3) * cfg_.input_h * cfg_.input_w);
  for (int ch = 0; ch < 3; ++ch)
    for (int y = 0; y < cfg_.input_h; ++y)
      for (int x = 0; x < cfg_.input_w; ++x)
        out[(static_cast<size_t>(ch) * cfg_.input_h + y) * cfg_.input_w + x] =
            resized.at(x, y)[ch] / 255.0f;
  return out;
}

Vec SiameseNet::channel_forward(const Vec& input) {
  Vec x = input;
  for (int b = 0; b < 4; ++b) {
    x = convs_[b].forward(x);
    x = relus_[b].forward(x);
    x = pools_[b].forward(x);
  }
  return fc_.forward(x);
}

Vec SiameseNet::channel_backward(const Vec& d_embedding) {
  Vec d = fc_.backward(d_embedding);
  for (int b = 3; b >= 0; --b) {
    d = pools_[b].backward(d);
    d = relus_[b].backward(d);
    d = convs_[b].backward(d);
  }
  return d;
}

void SiameseNet::clear_caches() {
  for (int b = 0; b < 4; ++b) {
    convs_[b].clear_cache();
    relus_[b].clear_cache();
    pools_[b].clear_cache();
  }
  fc_.clear_cache();
  pair_cache_.clear();
}

Vec SiameseNet::embed_input(const Vec& input) {
  Vec v = channel_forward(input);
  clear_caches();
  return v;
}

Vec SiameseNet::embed(const Image& img) { return embed_input(preprocess(img)); }

double SiameseNet::pair_forward(const Vec& input_a, const Vec& input_b) {
  PairCache c;
  c.va = channel_forward(input_a);
  c.vb = channel_forward(input_b);
  const int n = cfg_.embedding_dim;
  c.absdiff.resize(n);
  c.diff_sign.resize(n);
  double z = head_b_.data[0];
  for (int k = 0; k < n; ++k) {
    float d = c.va[k] - c.vb[k];
    c.diff_sign[k] = d > 0.0f ? 1.0f : (d < 0.0f ? -1.0f : 0.0f);
    c.absdiff[k] = std::fabs(d);
    z += head_w_.data[k] * c.absdiff[k];
  }
  c.p = 1.0 / (1.0 + std::exp(-z));
  double p = c.p;
  pair_cache_.push_back(std::move(c));
  return p;
}

void SiameseNet::pair_backward(double dp) {
  if (pair_cache_.empty()) throw GuiganError("pair_backward without pair_forward");
  PairCache c = std::move(pair_cache_.back());
  pair_cache_.pop_back();
  head_w_.ensure_grad();
  head_b_.ensure_grad();
  const int n = cfg_.embedding_dim;
  double dz = dp * c.p * (1.0 - c.p);
  head_b_.grad[0] += static_cast<float>(dz);
  Vec dva(n), dvb(n);
  for (int k = 0; k < n; ++k) {
    head_w_.grad[k] += static_cast<float>(dz * c.absdiff[k]);
    float dd = static_cast<float>(dz * head_w_.data[k]);
    dva[k] = dd * c.diff_sign[k];
    dvb[k] = -dva[k];
  }
  channel_backward(dvb);  // LIFO: b was forwarded last
  channel_backward(dva);
}

void SiameseNet::save(const std::string& path) const {
  save_checkpoint(path, "siamese", cfg_.to_json(), const_cast<SiameseNet*>(this)->params_);
}

std::unique_ptr<SiameseNet> SiameseNet::load(const std::string& path) {
  auto [kind, hyper] = read_checkpoint_header(path);
  if (kind != "siamese") throw IoError("not a siamese checkpoint: " + path);
  Rng rng(0);
  auto net = std::make_unique<SiameseNet>(SiameseConfig::from_json(hyper), rng);
  load_checkpoint(path, "siamese", net->params());
  return net;
}

SiameseTrainResult train_siamese(const SiameseConfig& config, const SubtreeRepository& repo,
                                 Rng& rng) {
  SiameseTrainResult result;
  result.net = std::make_unique<SiameseNet>(config, rng);
  SiameseNet& net = *result.net;

  // held-out split by screen_id: one screen per app stays out of training
  std::set<std::string> heldout_screens;
  AppPool train_pool, heldout_pool;
  for (const auto& [app, ids] : repo.app_index) {
    std::set<std::string> screens;
    for (int id : ids) screens.insert(repo.at(id).screen_id);
    size_t holdout_count = std::max<size_t>(1, screens.size() / 10);
    std::vector<std::string> screen_list(screens.begin(), screens.end());
    for (size_t k = 0; k < holdout_count && screen_list.size() > 1; ++k) {
      size_t pick = rng.uniform_u64(screen_list.size());
      heldout_screens.insert(app + "/" + screen_list[pick]);
      screen_list.erase(screen_list.begin() + static_cast<long>(pick));
    }
    std::vector<int> train_ids, held_ids;
    for (int id : ids) {
      const Subtree& st = repo.at(id);
      if (heldout_screens.count(st.app_id + "/" + st.screen_id))
        held_ids.push_back(id);
      else
        train_ids.push_back(id);
    }
    train_pool.apps.push_back(app);
    train_pool.ids.push_back(std::move(train_ids));
    heldout_pool.apps.push_back(app);
    heldout_pool.ids.push_back(std::move(held_ids));
  }

  // preprocessed inputs are reused across epochs
  std::map<int, Vec> inputs;
  for (const auto& st : repo.subtrees) inputs[st.id] = net.preprocess(st.crop);

  std::vector<PairSample> heldout_pairs;
  try {
    heldout_pairs = sample_pairs_from(heldout_pool, rng, 64);
  } catch (const InsufficientCorpus&) {
    heldout_pairs = sample_pairs_from(train_pool, rng, 64);  // tiny corpora
  }
  auto heldout_accuracy = [&]() {
    int correct = 0;
    for (const auto& pr : heldout_pairs) {
      double p = net.pair_forward(inputs[pr.a], inputs[pr.b]);
      net.clear_caches();
      if ((p > 0.5 ? 1 : 0) == pr.label) ++correct;
    }
    return static_cast<double>(correct) / heldout_pairs.size();
  };

  // early stopping: keep the best held-out snapshot seen during training
  double best_acc = -1.0;
  std::vector<Vec> best_params;
  auto snapshot = [&](double acc) {
    if (acc <= best_acc) return;
    best_acc = acc;
    best_params.clear();
    for (const auto& [name, t] : net.params().entries) best_params.push_back(t->data);
  };

  Adam adam({.lr = config.lr});
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    auto pairs = sample_pairs_from(train_pool, rng, config.pairs_per_epoch);
    double epoch_loss = 0.0;
    for (size_t i = 0; i < pairs.size();) {
      net.params().zero_grad();
      size_t batch_end = std::min(pairs.size(), i + static_cast<size_t>(config.batch));
      for (; i < batch_end; ++i) {
        double p = net.pair_forward(inputs[pairs[i].a], inputs[pairs[i].b]);
        double loss = bce_loss(p, pairs[i].label);
        if (!std::isfinite(loss)) throw Divergence("non-finite siamese loss");
        epoch_loss += loss;
        net.pair_backward(bce_grad(p, pairs[i].label));
      }
      adam.step(net.params());
    }
    EpochLog log;
    log.epoch = epoch;
    log.loss = epoch_loss / pairs.size();
    log.heldout_accuracy = heldout_accuracy();
    GUIGAN_LOG_INFO("siamese epoch %d: loss %.4f heldout acc %.3f", epoch, log.loss,
                    log.heldout_accuracy);
    result.log.push_back(log);
    snapshot(log.heldout_accuracy);
  }
  if (best_acc < 0.0) snapshot(heldout_accuracy());
  for (size_t i = 0; i < net.params().entries.size(); ++i)
    net.params().entries[i].second->data = best_params[i];
  result.heldout_accuracy = best_acc;
  GUIGAN_LOG_INFO("siamese best held-out accuracy %.3f (snapshot restored)", best_acc);
  return result;
}

std::map<int, Vec> embed_repository(SiameseNet& net, const SubtreeRepository& repo) {
  std::map<int, Vec> out;
  for (const auto& st : repo.subtrees) out[st.id] = net.embed(st.crop);
  return out;
}

void save_embeddings(const std::map<int, Vec>& embeddings, const std::string& path) {
  json j = json::object();
  for (const auto& [id, vec] : embeddings) j[std::to_string(id)] = vec;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write embeddings: " + path);
  out << j.dump(2) << "\n";
}

std::map<int, Vec> load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read embeddings: " + path);
  json j;
  in >> j;
  std::map<int, Vec> out;
  for (auto& [key, val] : j.items()) out[std::stoi(key)] = val.get<Vec>();
  return out;
}

}  // namespace guigan

#include "guigan/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "guigan/compose.hpp"
#include "guigan/errors.hpp"
#include "guigan/eval.hpp"
#include "guigan/log.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace guigan {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

void write_resolved_config(const std::string& dir, json j) {
  fs::create_directories(dir);
  write_file((fs::path(dir) / "config_resolved.json").string(), j.dump(2) + "\n");
}

}  // namespace

void run_corpus_build(const std::string& input_dir, const std::string& output_dir,
                      const SegmentationParams& params) {
  auto screens = load_screen_tree(input_dir);
  auto [repo, sequences] = build_repository(screens, params);
  save_repository(repo, sequences, output_dir);
  write_resolved_config(output_dir, json{{"command", "corpus build"},
                                         {"input", input_dir},
                                         {"width_frac", params.width_frac},
                                         {"aspect_min", params.aspect_min},
                                         {"aspect_max", params.aspect_max}});
  GUIGAN_LOG_INFO("built repository: %d tokens from %zu screens", repo.size(), sequences.size());
}

void run_corpus_synth(const SynthSpec& spec, const std::string& output_dir) {
  auto screens = generate_corpus(spec);
  write_corpus(screens, output_dir);
  write_resolved_config(output_dir, json{{"command", "corpus synth"},
                                         {"seed", spec.seed},
                                         {"apps", spec.n_apps},
                                         {"screens", spec.screens_per_app},
                                         {"screen_width", spec.screen_width},
                                         {"screen_height", spec.screen_height}});
  GUIGAN_LOG_INFO("wrote %zu synthetic screens under %s", screens.size(), output_dir.c_str());
}

double run_style_train(const std::string& repo_dir, const std::string& config_path, uint64_t seed,
                       const std::string& output_ckpt) {
  auto [repo, sequences] = load_repository(repo_dir);
  SiameseConfig cfg;
  if (!config_path.empty()) cfg = SiameseConfig::from_json(read_file(config_path));
  Rng rng(seed);
  SiameseTrainResult result = train_siamese(cfg, repo, rng);
  result.net->save(output_ckpt);
  json echo{{"command", "style train"}, {"repo", repo_dir}, {"seed", seed},
            {"config", json::parse(cfg.to_json())}};
  write_file(output_ckpt + ".config_resolved.json", echo.dump(2) + "\n");
  GUIGAN_LOG_INFO("siamese training done: held-out accuracy %.3f", result.heldout_accuracy);
  return result.heldout_accuracy;
}

void run_style_embed(const std::string& repo_dir, const std::string& ckpt_path,
                     const std::string& output_path) {
  auto [repo, sequences] = load_repository(repo_dir);
  auto net = SiameseNet::load(ckpt_path);
  save_embeddings(embed_repository(*net, repo), output_path);
  GUIGAN_LOG_INFO("wrote embeddings for %d tokens", repo.size());
}

void run_gan_train(const std::string& repo_dir, const std::string& embeddings_path,
                   const std::string& config_path, const std::string& mode, uint64_t seed,
                   const std::string& run_dir) {
  auto [repo, sequences] = load_repository(repo_dir);
  auto embeddings = load_embeddings(embeddings_path);
  GanConfig cfg;
  if (!config_path.empty()) cfg = GanConfig::from_json(read_file(config_path));
  if (!mode.empty()) cfg.fusion_mode = mode;
  cfg.fusion_weights();  // validate

  GanTrainer trainer(cfg, repo, embeddings, sequences, seed);
  write_resolved_config(run_dir, json{{"command", "gan train"},
                                      {"repo", repo_dir},
                                      {"embeddings", embeddings_path},
                                      {"seed", seed},
                                      {"config", json::parse(cfg.to_json())}});
  trainer.pretrain();
  for (int round = 0; round < cfg.rounds; ++round) {
    for (int d = 0; d < cfg.d_steps; ++d) trainer.d_step();
    for (int g = 0; g < cfg.g_steps; ++g) trainer.g_step();
    trainer.save(run_dir);  // checkpoint every round
    GUIGAN_LOG_INFO("round %d/%d checkpointed", round + 1, cfg.rounds);
  }
  trainer.save(run_dir);
}

void run_generate(const std::string& run_dir, const GenerateOptions& opts,
                  const std::string& output_dir) {
  json resolved = json::parse(read_file((fs::path(run_dir) / "config_resolved.json").string()));
  GanConfig cfg = GanConfig::from_json(resolved.at("config").dump());
  auto [repo, sequences] = load_repository(resolved.at("repo").get<std::string>());
  Rng rng(opts.seed);
  Generator gen(repo, cfg, rng);
  gen.load((fs::path(run_dir) / "generator.ckpt").string());

  fs::create_directories(output_dir);
  json manifest;
  manifest["run"] = run_dir;
  manifest["seed"] = opts.seed;
  json items = json::array();
  for (int k = 0; k < opts.count; ++k) {
    GenSequence seq = gen.sample(rng);
    json item{{"tokens", seq.tokens}, {"terminated_by", termination_name(seq.terminated_by)}};
    if (opts.render) {
      std::string name = "gen_" + std::to_string(k) + ".png";
      Image img = render_sequence(seq.tokens, repo, repo.screen_width, repo.screen_height,
                                  opts.separators);
      write_png(img, (fs::path(output_dir) / name).string());
      item["image"] = name;
    }
    items.push_back(std::move(item));
  }
  manifest["sequences"] = std::move(items);
  write_file((fs::path(output_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
  write_resolved_config(output_dir, json{{"command", "generate"},
                                         {"run", run_dir},
                                         {"count", opts.count},
                                         {"render", opts.render},
                                         {"separators", opts.separators},
                                         {"seed", opts.seed}});
}

std::vector<Image> load_images_under(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  std::vector<fs::path> paths;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".png") paths.push_back(e.path());
  std::sort(paths.begin(), paths.end());
  std::vector<Image> out;
  for (const auto& p : paths) out.push_back(read_png(p.string()));
  return out;
}

EvalReport run_evaluate(const std::string& real_dir, const std::string& generated_dir,
                        const std::string& siamese_ckpt, const EvaluateOptions& opts,
                        const std::string& output_path) {
  auto net = SiameseNet::load(siamese_ckpt);
  std::vector<Image> real_images = load_images_under(real_dir);
  std::vector<Image> gen_images = load_images_under(generated_dir);

  // sequence metrics when the generated dir carries a manifest and a
  // repository is supplied
  std::vector<TokenSequence> gen_sequences;
  fs::path manifest_path = fs::path(generated_dir) / "manifest.json";
  if (fs::exists(manifest_path)) {
    json manifest = json::parse(read_file(manifest_path.string()));
    for (const auto& item : manifest.at("sequences"))
      gen_sequences.push_back(item.at("tokens").get<TokenSequence>());
  }

  EvalReport report;
  if (!opts.repo_dir.empty() && !gen_sequences.empty()) {
    auto [repo, sequences] = load_repository(opts.repo_dir);
    auto embeddings = embed_repository(*net, repo);
    std::vector<std::string> real_structures;
    for (const auto& seq : sequences) real_structures.push_back(sequence_structure(seq, repo));
    report = evaluate(real_images, gen_images, *net, &repo, &gen_sequences, &embeddings,
                      &real_structures, opts.seed);
  } else {
    report = evaluate(real_images, gen_images, *net, nullptr, nullptr, nullptr, nullptr,
                      opts.seed);
  }
  report.embedder_digest = checkpoint_digest(siamese_ckpt);
  if (!output_path.empty()) write_file(output_path, report.to_json() + "\n");
  return report;
}

}  // namespace guigan

#pragma once

#include <string>
#include <vector>

#include "guigan/corpus.hpp"
#include "guigan/eval.hpp"
#include "guigan/gan.hpp"
#include "guigan/style.hpp"
#include "guigan/synthcorpus.hpp"

namespace guigan {

// High-level entry points behind the CLI subcommands. Every function is
// deterministic for fixed seeds and inputs.

void run_corpus_build(const std::string& input_dir, const std::string& output_dir,
                      const SegmentationParams& params);

void run_corpus_synth(const SynthSpec& spec, const std::string& output_dir);

// config_path may be empty (defaults); returns final held-out accuracy.
double run_style_train(const std::string& repo_dir, const std::string& config_path, uint64_t seed,
                       const std::string& output_ckpt);

void run_style_embed(const std::string& repo_dir, const std::string& ckpt_path,
                     const std::string& output_path);

void run_gan_train(const std::string& repo_dir, const std::string& embeddings_path,
                   const std::string& config_path, const std::string& mode, uint64_t seed,
                   const std::string& run_dir);

struct GenerateOptions {
  int count = 8;
  bool render = false;
  bool separators = false;
  uint64_t seed = 1;
};
void run_generate(const std::string& run_dir, const GenerateOptions& opts,
                  const std::string& output_dir);

struct EvaluateOptions {
  std::string repo_dir;  // optional; enables sequence metrics
  uint64_t seed = 1;
};
EvalReport run_evaluate(const std::string& real_dir, const std::string& generated_dir,
                        const std::string& siamese_ckpt, const EvaluateOptions& opts,
                        const std::string& output_path);

// PNGs under a directory (recursive, sorted paths).
std::vector<Image> load_images_under(const std::string& dir);

}  // namespace guigan

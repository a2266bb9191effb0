#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "guigan/errors.hpp"
#include "guigan/eval.hpp"
#include "guigan/log.hpp"
#include "guigan/pipeline.hpp"

using namespace guigan;

int main(int argc, char** argv) {
  CLI::App app{"guigan: GUI subtree corpus, style embedding, sequence GAN, and evaluation"};
  app.require_subcommand(1);

  // corpus build / corpus synth
  auto* corpus = app.add_subcommand("corpus", "corpus construction");
  corpus->require_subcommand(1);

  std::string cb_input, cb_output;
  SegmentationParams seg;
  auto* cbuild = corpus->add_subcommand("build", "segment a screen tree into a repository");
  cbuild->add_option("--input", cb_input, "input tree: <app>/<screen>.json/.png")->required();
  cbuild->add_option("--output", cb_output, "repository output directory")->required();
  cbuild->add_option("--width-frac", seg.width_frac, "recursive width threshold fraction");
  cbuild->add_option("--aspect-min", seg.aspect_min, "minimum kept aspect ratio (w/h)");
  cbuild->add_option("--aspect-max", seg.aspect_max, "maximum kept aspect ratio (w/h)");

  SynthSpec synth;
  std::string cs_output;
  auto* csynth = corpus->add_subcommand("synth", "generate a synthetic screen tree");
  csynth->add_option("--seed", synth.seed, "random seed");
  csynth->add_option("--apps", synth.n_apps, "number of synthetic apps");
  csynth->add_option("--screens", synth.screens_per_app, "screens per app");
  csynth->add_option("--width", synth.screen_width, "screen width in pixels");
  csynth->add_option("--height", synth.screen_height, "screen height in pixels");
  csynth->add_option("--output", cs_output, "output directory")->required();

  // style train / style embed
  auto* style = app.add_subcommand("style", "siamese style embedding");
  style->require_subcommand(1);

  std::string st_repo, st_config, st_output;
  uint64_t st_seed = 1;
  auto* strain = style->add_subcommand("train", "train the siamese embedder");
  strain->add_option("--repo", st_repo, "repository directory")->required();
  strain->add_option("--config", st_config, "JSON config file (flags override)");
  strain->add_option("--seed", st_seed, "random seed");
  strain->add_option("--output", st_output, "checkpoint path")->required();

  std::string se_repo, se_ckpt, se_output;
  auto* sembed = style->add_subcommand("embed", "embed every repository token");
  sembed->add_option("--repo", se_repo, "repository directory")->required();
  sembed->add_option("--ckpt", se_ckpt, "siamese checkpoint")->required();
  sembed->add_option("--output", se_output, "embeddings JSON path")->required();

  // gan train
  auto* gan = app.add_subcommand("gan", "sequence GAN training");
  gan->require_subcommand(1);
  std::string gt_repo, gt_embeddings, gt_config, gt_mode, gt_output;
  uint64_t gt_seed = 1;
  auto* gtrain = gan->add_subcommand("train", "adversarial training with fused rewards");
  gtrain->add_option("--repo", gt_repo, "repository directory")->required();
  gtrain->add_option("--embeddings", gt_embeddings, "style embeddings JSON")->required();
  gtrain->add_option("--config", gt_config, "JSON config file (flags override)");
  gtrain->add_option("--mode", gt_mode, "full|style_only|structure_only|adversarial_only")
      ->check(CLI::IsMember({"full", "style_only", "structure_only", "adversarial_only"}));
  gtrain->add_option("--seed", gt_seed, "random seed");
  gtrain->add_option("--output", gt_output, "run output directory")->required();

  // generate
  std::string gn_run, gn_output;
  GenerateOptions gn_opts;
  auto* generate = app.add_subcommand("generate", "sample sequences from a trained run");
  generate->add_option("--run", gn_run, "training run directory")->required();
  generate->add_option("--count", gn_opts.count, "number of sequences");
  generate->add_flag("--render", gn_opts.render, "also render PNG compositions");
  generate->add_flag("--separators", gn_opts.separators, "draw red separators between crops");
  generate->add_option("--seed", gn_opts.seed, "random seed");
  generate->add_option("--output", gn_output, "output directory")->required();

  // evaluate
  std::string ev_real, ev_generated, ev_ckpt, ev_output;
  EvaluateOptions ev_opts;
  auto* evaluate = app.add_subcommand("evaluate", "FID / 1-NNA / sequence metrics report");
  evaluate->add_option("--real", ev_real, "directory of real images")->required();
  evaluate->add_option("--generated", ev_generated, "directory of generated images")->required();
  evaluate->add_option("--ckpt", ev_ckpt, "siamese checkpoint for features")->required();
  evaluate->add_option("--repo", ev_opts.repo_dir, "repository (enables sequence metrics)");
  evaluate->add_option("--seed", ev_opts.seed, "subsampling seed");
  evaluate->add_option("--output", ev_output, "report JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (cbuild->parsed()) {
      run_corpus_build(cb_input, cb_output, seg);
    } else if (csynth->parsed()) {
      run_corpus_synth(synth, cs_output);
    } else if (strain->parsed()) {
      double acc = run_style_train(st_repo, st_config, st_seed, st_output);
      std::printf("heldout_accuracy %.4f\n", acc);
    } else if (sembed->parsed()) {
      run_style_embed(se_repo, se_ckpt, se_output);
    } else if (gtrain->parsed()) {
      run_gan_train(gt_repo, gt_embeddings, gt_config, gt_mode, gt_seed, gt_output);
    } else if (generate->parsed()) {
      run_generate(gn_run, gn_opts, gn_output);
    } else if (evaluate->parsed()) {
      EvalReport report = run_evaluate(ev_real, ev_generated, ev_ckpt, ev_opts, ev_output);
      std::printf("fid %.6f\none_nna %.6f\nmean_homogeneity %.6f\nmean_structure_loss %.6f\n",
                  report.fid, report.one_nna, report.mean_homogeneity,
                  report.mean_structure_loss);
    }
  } catch (const Divergence& e) {
    GUIGAN_LOG_ERROR("training diverged: %s", e.what());
    return 3;
  } catch (const NonFiniteLoss& e) {
    GUIGAN_LOG_ERROR("training diverged: %s", e.what());
    return 3;
  } catch (const GuiganError& e) {
    GUIGAN_LOG_ERROR("data error: %s", e.what());
    return 2;
  } catch (const std::exception& e) {
    GUIGAN_LOG_ERROR("error: %s", e.what());
    return 2;
  }
  return 0;
}

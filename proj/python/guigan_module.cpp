#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <set>

#include "guigan/compose.hpp"
#include "guigan/corpus.hpp"
#include "guigan/errors.hpp"
#include "guigan/eval.hpp"
#include "guigan/losses.hpp"
#include "guigan/pipeline.hpp"
#include "guigan/synthcorpus.hpp"

namespace py = pybind11;
using namespace guigan;

PYBIND11_MODULE(_guigan, m) {
  m.doc() = "GUI subtree corpus, style embedding, sequence GAN, and evaluation toolkit";

  py::register_exception<GuiganError>(m, "GuiganError");

  py::class_<SegmentationParams>(m, "SegmentationParams")
      .def(py::init<>())
      .def_readwrite("width_frac", &SegmentationParams::width_frac)
      .def_readwrite("aspect_min", &SegmentationParams::aspect_min)
      .def_readwrite("aspect_max", &SegmentationParams::aspect_max);

  py::class_<SynthSpec>(m, "SynthSpec")
      .def(py::init<>())
      .def_readwrite("seed", &SynthSpec::seed)
      .def_readwrite("n_apps", &SynthSpec::n_apps)
      .def_readwrite("screens_per_app", &SynthSpec::screens_per_app)
      .def_readwrite("screen_width", &SynthSpec::screen_width)
      .def_readwrite("screen_height", &SynthSpec::screen_height);

  py::class_<GenerateOptions>(m, "GenerateOptions")
      .def(py::init<>())
      .def_readwrite("count", &GenerateOptions::count)
      .def_readwrite("render", &GenerateOptions::render)
      .def_readwrite("separators", &GenerateOptions::separators)
      .def_readwrite("seed", &GenerateOptions::seed);

  py::class_<EvaluateOptions>(m, "EvaluateOptions")
      .def(py::init<>())
      .def_readwrite("repo_dir", &EvaluateOptions::repo_dir)
      .def_readwrite("seed", &EvaluateOptions::seed);

  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("fid", &EvalReport::fid)
      .def_readonly("one_nna", &EvalReport::one_nna)
      .def_readonly("mean_homogeneity", &EvalReport::mean_homogeneity)
      .def_readonly("mean_structure_loss", &EvalReport::mean_structure_loss)
      .def_readonly("real_count", &EvalReport::real_count)
      .def_readonly("generated_count", &EvalReport::generated_count)
      .def_readonly("embedder_digest", &EvalReport::embedder_digest)
      .def("to_json", &EvalReport::to_json);

  // pipeline entry points
  m.def("corpus_build", &run_corpus_build, py::arg("input_dir"), py::arg("output_dir"),
        py::arg("params") = SegmentationParams{});
  m.def("corpus_synth", &run_corpus_synth, py::arg("spec"), py::arg("output_dir"));
  m.def("style_train", &run_style_train, py::arg("repo_dir"), py::arg("config_path") = "",
        py::arg("seed") = 1, py::arg("output_ckpt") = "siamese.ckpt");
  m.def("style_embed", &run_style_embed, py::arg("repo_dir"), py::arg("ckpt_path"),
        py::arg("output_path"));
  m.def("gan_train", &run_gan_train, py::arg("repo_dir"), py::arg("embeddings_path"),
        py::arg("config_path") = "", py::arg("mode") = "", py::arg("seed") = 1,
        py::arg("run_dir") = "run");
  m.def("generate", &run_generate, py::arg("run_dir"), py::arg("opts"), py::arg("output_dir"));
  m.def("evaluate_dirs", &run_evaluate, py::arg("real_dir"), py::arg("generated_dir"),
        py::arg("siamese_ckpt"), py::arg("opts") = EvaluateOptions{},
        py::arg("output_path") = "");

  // direct numeric operations
  m.def(
      "med",
      [](const std::string& a, const std::string& b) { return med(a, b); },
      py::arg("a"), py::arg("b"), "Levenshtein distance between two structure strings");
  m.def("homogeneity", &homogeneity, py::arg("classes"), py::arg("clusters"));
  m.def(
      "style_loss_value",
      [](const std::vector<int>& classes, const std::vector<std::vector<float>>& embeddings) {
        std::set<int> distinct(classes.begin(), classes.end());
        if (distinct.size() <= 1) return 0.0;
        return std::exp(-homogeneity(classes, cluster_for_homogeneity(embeddings, classes)));
      },
      py::arg("classes"), py::arg("embeddings"));
  m.def(
      "structure_loss",
      [](const std::string& generated, const std::vector<std::string>& real) {
        return structure_loss(generated, real);
      },
      py::arg("generated"), py::arg("real"));
  m.def(
      "fid",
      [](const std::vector<std::vector<double>>& real, const std::vector<std::vector<double>>& gen) {
        auto to_fm = [](const std::vector<std::vector<double>>& rows, const char* tag) {
          FeatureMatrix fm;
          fm.source = tag;
          fm.rows.resize(static_cast<Eigen::Index>(rows.size()),
                         rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
          for (size_t i = 0; i < rows.size(); ++i)
            for (size_t j = 0; j < rows[i].size(); ++j)
              fm.rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
          return fm;
        };
        return fid(to_fm(real, "real"), to_fm(gen, "generated"));
      },
      py::arg("real"), py::arg("generated"));
  m.def(
      "one_nna",
      [](const std::vector<std::vector<double>>& real, const std::vector<std::vector<double>>& gen) {
        auto to_fm = [](const std::vector<std::vector<double>>& rows, const char* tag) {
          FeatureMatrix fm;
          fm.source = tag;
          fm.rows.resize(static_cast<Eigen::Index>(rows.size()),
                         rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
          for (size_t i = 0; i < rows.size(); ++i)
            for (size_t j = 0; j < rows[i].size(); ++j)
              fm.rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
          return fm;
        };
        return one_nna(to_fm(real, "real"), to_fm(gen, "generated"));
      },
      py::arg("real"), py::arg("generated"));
}

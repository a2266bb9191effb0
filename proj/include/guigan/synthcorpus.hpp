#pragma once

#include <string>
#include <vector>

#include "guigan/corpus.hpp"

namespace guigan {

struct SynthSpec {
  uint64_t seed = 1;
  int n_apps = 2;
  int screens_per_app = 8;
  int screen_width = 360;
  int screen_height = 640;
  // optional explicit palettes (one base color per app); when empty a
  // default well-separated set is derived (up to 4 apps)
  std::vector<Rgb> palettes;
};

struct SynthScreen {
  GuiScreen screen;
  std::string metadata_json;
  // ground truth: the subtree bounds and structure strings segmentation
  // is expected to recover, in order
  std::vector<Bounds> expected_bounds;
  std::vector<std::string> expected_labels;  // block kind per expected subtree
};

// Deterministic synthetic corpus; same seed gives bit-identical screens.
// Throws InvalidSpec.
std::vector<SynthScreen> generate_corpus(const SynthSpec& spec);

// Base color of app `a` under the spec (after palette defaulting).
Rgb synth_app_color(const SynthSpec& spec, int app);

// Write the corpus in the on-disk input layout: <dir>/app_<i>/screen_<j>.json/.png
void write_corpus(const std::vector<SynthScreen>& screens, const std::string& dir);

}  // namespace guigan

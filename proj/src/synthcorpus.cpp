#include "guigan/synthcorpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "guigan/errors.hpp"
#include "guigan/rng.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace guigan {

namespace {

uint8_t shift(uint8_t v, int d) { return static_cast<uint8_t>(std::clamp(v + d, 0, 255)); }

Rgb light(Rgb c) { return {shift(c[0], 36), shift(c[1], 36), shift(c[2], 36)}; }
Rgb dark(Rgb c) { return {shift(c[0], -36), shift(c[1], -36), shift(c[2], -36)}; }

json node_json(const std::string& cls, const Bounds& b, json children = json::array()) {
  return {{"class", cls}, {"bounds", {b.x1, b.y1, b.x2, b.y2}}, {"children", std::move(children)}};
}

struct BlockPlan {
  std::string kind;
  int height;
};

}  // namespace

Rgb synth_app_color(const SynthSpec& spec, int app) {
  if (!spec.palettes.empty()) return spec.palettes[static_cast<size_t>(app)];
  uint8_t v = static_cast<uint8_t>(24 + 70 * app);
  return {v, v, static_cast<uint8_t>(255 - v)};
}

std::vector<SynthScreen> generate_corpus(const SynthSpec& spec) {
  if (spec.n_apps < 2 || spec.screens_per_app < 2)
    throw InvalidSpec("need n_apps >= 2 and screens_per_app >= 2");
  if (spec.screen_width < 120 || spec.screen_height < 240)
    throw InvalidSpec("screen size too small");
  if (spec.palettes.empty() && spec.n_apps > 4)
    throw InvalidSpec("default palettes support at most 4 apps; supply explicit palettes");
  if (!spec.palettes.empty() && spec.palettes.size() != static_cast<size_t>(spec.n_apps))
    throw InvalidSpec("palette count must equal n_apps");
  for (int a = 0; a < spec.n_apps; ++a)
    for (int b = a + 1; b < spec.n_apps; ++b) {
      Rgb ca = synth_app_color(spec, a), cb = synth_app_color(spec, b);
      for (int ch = 0; ch < 3; ++ch)
        if (std::abs(int(ca[ch]) - int(cb[ch])) < 64)
          throw InvalidSpec("app palettes are not separated by >= 64 per channel");
    }

  const int W = spec.screen_width;
  const int H = spec.screen_height;
  const int inset = static_cast<int>(std::lround(0.06 * W));  // 88% wide blocks
  const int wide_inset = static_cast<int>(std::lround(0.025 * W));  // 95% wide wrapper

  std::vector<SynthScreen> out;
  Rng master(spec.seed);
  for (int app = 0; app < spec.n_apps; ++app) {
    Rgb base = synth_app_color(spec, app);
    for (int sc = 0; sc < spec.screens_per_app; ++sc) {
      Rng rng = master.fork(static_cast<uint64_t>(app) * 100003ULL + sc);

      // plan blocks: header, middle blocks until the footer fits, footer
      std::vector<BlockPlan> plan;
      plan.push_back({"Header", 64 + rng.uniform_int(33)});
      int footer_h = 56 + rng.uniform_int(25);
      int y = plan[0].height;
      // per-app grammar: app index biases the middle-block mix
      int card_weight = 2 + (app % 3);
      while (true) {
        int pick = rng.uniform_int(6 + card_weight);
        BlockPlan b;
        if (app == 0 && pick == 0) {
          b = {"CellPair", 56 + rng.uniform_int(25)};
        } else if (pick < 6) {
          b = {"ListRow", 48 + rng.uniform_int(25)};
        } else {
          b = {"ImageCard", 120 + rng.uniform_int(61)};
        }
        if (y + b.height + footer_h > H) break;
        y += b.height;
        plan.push_back(b);
      }
      plan.push_back({"Footer", footer_h});

      SynthScreen synth;
      Image img(W, H, {245, 245, 245});
      json children = json::array();
      y = 0;
      for (const auto& b : plan) {
        int y2 = y + b.height;
        Rgb bg = (b.kind == "Header" || b.kind == "Footer") ? dark(base) : base;
        if (b.kind == "ImageCard") bg = light(base);
        if (b.kind == "Header" || b.kind == "Footer") {
          Bounds bounds{0, y, W, y2};
          fill_rect(img, bounds.x1, bounds.y1, bounds.x2, bounds.y2, bg);
          children.push_back(node_json(b.kind, bounds));
          synth.expected_bounds.push_back(bounds);
          synth.expected_labels.push_back(b.kind);
        } else if (b.kind == "CellPair") {
          // 95%-wide wrapper: the recursion rule descends into the cells
          Bounds wrap{wide_inset, y, W - wide_inset, y2};
          int mid = (wrap.x1 + wrap.x2) / 2;
          Bounds left{wrap.x1, y, mid - 4, y2};
          Bounds right{mid + 4, y, wrap.x2, y2};
          fill_rect(img, left.x1, left.y1, left.x2, left.y2, bg);
          fill_rect(img, right.x1, right.y1, right.x2, right.y2, light(base));
          json cells = json::array();
          for (const Bounds& cell : {left, right}) {
            Bounds text{cell.x1 + 8, y + 8, cell.x2 - 8, y2 - 8};
            fill_rect(img, text.x1, text.y1, text.x2, text.y2, dark(base));
            cells.push_back(node_json("Cell", cell, json::array({node_json("Text", text)})));
            synth.expected_bounds.push_back(cell);
            synth.expected_labels.push_back("Cell");
          }
          children.push_back(node_json("CellPair", wrap, std::move(cells)));
        } else {
          Bounds bounds{inset, y, W - inset, y2};
          fill_rect(img, bounds.x1, bounds.y1, bounds.x2, bounds.y2, bg);
          json inner = json::array();
          if (b.kind == "ListRow") {
            Bounds icon{bounds.x1 + 6, y + 6, bounds.x1 + b.height - 6, y2 - 6};
            Bounds text{bounds.x1 + b.height + 6, y + 6, bounds.x2 - 6, y2 - 6};
            fill_rect(img, icon.x1, icon.y1, icon.x2, icon.y2, dark(base));
            fill_rect(img, text.x1, text.y1, text.x2, text.y2, light(base));
            inner.push_back(node_json("Icon", icon));
            inner.push_back(node_json("Text", text));
          } else {  // ImageCard
            Bounds pic{bounds.x1 + 10, y + 10, bounds.x2 - 10, y2 - 10};
            fill_rect(img, pic.x1, pic.y1, pic.x2, pic.y2, dark(base));
            inner.push_back(node_json("Image", pic));
          }
          children.push_back(node_json(b.kind, bounds, std::move(inner)));
          synth.expected_bounds.push_back(bounds);
          synth.expected_labels.push_back(b.kind);
        }
        y = y2;
      }

      json doc = node_json("Root", {0, 0, W, H}, std::move(children));
      synth.metadata_json = doc.dump(2) + "\n";
      synth.screen = parse_screen(synth.metadata_json, std::move(img), "app_" + std::to_string(app),
                                  "screen_" + std::to_string(sc));
      out.push_back(std::move(synth));
    }
  }
  return out;
}

void write_corpus(const std::vector<SynthScreen>& screens, const std::string& dir) {
  for (const auto& s : screens) {
    fs::path app_dir = fs::path(dir) / s.screen.app_id;
    fs::create_directories(app_dir);
    std::ofstream meta(app_dir / (s.screen.screen_id + ".json"));
    if (!meta) throw IoError("cannot write metadata under " + dir);
    meta << s.metadata_json;
    write_png(s.screen.screenshot, (app_dir / (s.screen.screen_id + ".png")).string());
  }
}

}  // namespace guigan

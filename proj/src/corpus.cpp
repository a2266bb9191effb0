#include "guigan/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "guigan/errors.hpp"
#include "guigan/log.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace guigan {

namespace {

// printable symbol pool, excluding '#' and ';' (reserved for overflow tokens)
const std::string kSymbolPool = [] {
  std::string s;
  for (char c = 33; c <= 126; ++c)
    if (c != '#' && c != ';') s.push_back(c);
  return s;
}();

}  // namespace

std::string Alphabet::symbol_for(const std::string& label) {
  auto it = mapping_.find(label);
  if (it != mapping_.end()) return it->second;
  size_t n = order_.size();
  std::string sym;
  if (n < kSymbolPool.size()) {
    sym = std::string(1, kSymbolPool[n]);
  } else {
    sym = "#" + std::to_string(n) + ";";
  }
  mapping_.emplace(label, sym);
  order_.push_back(label);
  return sym;
}

void Alphabet::restore(const std::vector<std::string>& labels_in_order) {
  mapping_.clear();
  order_.clear();
  for (const auto& label : labels_in_order) symbol_for(label);
}

std::vector<std::string> symbol_tokens(const std::string& structure) {
  std::vector<std::string> out;
  for (size_t i = 0; i < structure.size();) {
    if (structure[i] == '#') {
      size_t end = structure.find(';', i);
      if (end == std::string::npos) end = structure.size() - 1;
      out.push_back(structure.substr(i, end - i + 1));
      i = end + 1;
    } else {
      out.push_back(std::string(1, structure[i]));
      ++i;
    }
  }
  return out;
}

const Subtree& SubtreeRepository::at(int id) const {
  if (id < 0 || id >= size()) throw UnknownToken("token id " + std::to_string(id));
  return subtrees[static_cast<size_t>(id)];
}

namespace {

ComponentNode parse_node(const json& j) {
  if (!j.is_object()) throw MalformedMetadata("node is not an object");
  ComponentNode node;
  node.component_label = j.value("class", std::string("View"));
  auto it = j.find("bounds");
  if (it == j.end() || !it->is_array() || it->size() != 4)
    throw MalformedMetadata("node missing bounds [x1,y1,x2,y2]");
  int b[4];
  for (int k = 0; k < 4; ++k) {
    if (!(*it)[k].is_number_integer()) throw MalformedMetadata("non-integer bound coordinate");
    b[k] = (*it)[k].get<int>();
  }
  node.bounds = {b[0], b[1], b[2], b[3]};
  if (node.bounds.x1 > node.bounds.x2 || node.bounds.y1 > node.bounds.y2)
    throw MalformedMetadata("inverted bounds");
  if (auto c = j.find("children"); c != j.end()) {
    if (!c->is_array()) throw MalformedMetadata("children is not an array");
    for (const auto& child : *c) node.children.push_back(parse_node(child));
  }
  return node;
}

}  // namespace

GuiScreen parse_screen(const std::string& metadata_json, Image screenshot,
                       const std::string& app_id, const std::string& screen_id) {
  json doc;
  try {
    doc = json::parse(metadata_json);
  } catch (const json::exception& e) {
    throw MalformedMetadata(std::string("invalid JSON: ") + e.what());
  }
  GuiScreen screen;
  screen.app_id = app_id;
  screen.screen_id = screen_id;
  screen.root = parse_node(doc);
  screen.width = screen.root.bounds.width();
  screen.height = screen.root.bounds.height();
  if (screen.width <= 0 || screen.height <= 0)
    throw MalformedMetadata("root bounds have non-positive size");
  if (screenshot.empty()) throw ImageMismatch("empty screenshot for " + screen_id);
  screen.screenshot = std::move(screenshot);
  if (screen.screenshot.width != screen.width || screen.screenshot.height != screen.height) {
    screen.scale_x = static_cast<double>(screen.screenshot.width) / screen.width;
    screen.scale_y = static_cast<double>(screen.screenshot.height) / screen.height;
    GUIGAN_LOG_DEBUG("screen %s: screenshot scale %.3f x %.3f", screen_id.c_str(), screen.scale_x,
                     screen.scale_y);
  }
  return screen;
}

std::string structure_string(const ComponentNode& node, Alphabet& alphabet) {
  std::string out = alphabet.symbol_for(node.component_label);
  for (const auto& child : node.children) out += structure_string(child, alphabet);
  return out;
}

namespace {

bool intersects(const Bounds& a, const Bounds& b) {
  int ix = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  int iy = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  return ix > 0 && iy > 0;
}

bool contains(const Bounds& outer, const Bounds& inner) {
  return outer.x1 <= inner.x1 && outer.y1 <= inner.y1 && outer.x2 >= inner.x2 &&
         outer.y2 >= inner.y2;
}

void collect_candidates(const ComponentNode& node, double max_width,
                        std::vector<const ComponentNode*>& out) {
  if (node.bounds.width() > max_width && !node.children.empty()) {
    for (const auto& child : node.children) collect_candidates(child, max_width, out);
  } else {
    // too-wide leaves are emitted as tokens as well
    out.push_back(&node);
  }
}

}  // namespace

std::vector<Subtree> segment_subtrees(const GuiScreen& screen, Alphabet& alphabet,
                                      const SegmentationParams& params) {
  std::vector<const ComponentNode*> candidates;
  double max_width = params.width_frac * screen.width;
  for (const auto& child : screen.root.children) collect_candidates(child, max_width, candidates);

  // duplicate bounds within one screen: keep the first in depth-first order
  std::vector<const ComponentNode*> unique_nodes;
  for (const ComponentNode* node : candidates) {
    bool dup = std::any_of(unique_nodes.begin(), unique_nodes.end(),
                           [&](const ComponentNode* kept) { return kept->bounds == node->bounds; });
    if (!dup) unique_nodes.push_back(node);
  }

  // partial overlap against already-kept subtrees drops the candidate
  std::vector<const ComponentNode*> kept;
  for (const ComponentNode* node : unique_nodes) {
    bool overlaps = std::any_of(kept.begin(), kept.end(), [&](const ComponentNode* k) {
      return intersects(k->bounds, node->bounds) && !contains(k->bounds, node->bounds) &&
             !contains(node->bounds, k->bounds);
    });
    if (!overlaps) kept.push_back(node);
  }

  std::vector<Subtree> out;
  for (const ComponentNode* node : kept) {
    int w = node->bounds.width();
    int h = node->bounds.height();
    if (w <= 0 || h <= 0) continue;
    double aspect = static_cast<double>(w) / h;
    if (aspect < params.aspect_min || aspect > params.aspect_max) continue;

    Subtree st;
    st.app_id = screen.app_id;
    st.screen_id = screen.screen_id;
    st.bounds = {std::clamp(node->bounds.x1, 0, screen.width),
                 std::clamp(node->bounds.y1, 0, screen.height),
                 std::clamp(node->bounds.x2, 0, screen.width),
                 std::clamp(node->bounds.y2, 0, screen.height)};
    if (st.bounds != node->bounds)
      GUIGAN_LOG_DEBUG("screen %s: clamped subtree bounds to screen", screen.screen_id.c_str());
    st.width_px = st.bounds.width();
    st.height_px = st.bounds.height();
    if (st.width_px <= 0 || st.height_px <= 0) continue;
    st.structure_string = structure_string(*node, alphabet);
    st.crop = crop(screen.screenshot, static_cast<int>(std::lround(st.bounds.x1 * screen.scale_x)),
                   static_cast<int>(std::lround(st.bounds.y1 * screen.scale_y)),
                   static_cast<int>(std::lround(st.bounds.x2 * screen.scale_x)),
                   static_cast<int>(std::lround(st.bounds.y2 * screen.scale_y)));
    out.push_back(std::move(st));
  }
  if (out.empty()) throw EmptySegmentation("no subtree survived on screen " + screen.screen_id);
  return out;
}

std::pair<SubtreeRepository, std::vector<TokenSequence>> build_repository(
    const std::vector<GuiScreen>& screens, const SegmentationParams& params) {
  SubtreeRepository repo;
  std::vector<TokenSequence> sequences;
  for (const auto& screen : screens) {
    std::vector<Subtree> subtrees;
    try {
      subtrees = segment_subtrees(screen, repo.alphabet, params);
    } catch (const EmptySegmentation&) {
      GUIGAN_LOG_INFO("screen %s excluded: empty segmentation", screen.screen_id.c_str());
      continue;
    }
    TokenSequence seq;
    for (auto& st : subtrees) {
      st.id = repo.size();
      seq.push_back(st.id);
      repo.app_index[st.app_id].push_back(st.id);
      repo.subtrees.push_back(std::move(st));
    }
    repo.start_ids.insert(seq.front());
    repo.end_ids.insert(seq.back());
    repo.screen_width = std::max(repo.screen_width, screen.width);
    repo.screen_height = std::max(repo.screen_height, screen.height);
    sequences.push_back(std::move(seq));
  }
  if (repo.subtrees.empty()) throw EmptyCorpus("no screen survived segmentation");
  return {std::move(repo), std::move(sequences)};
}

void save_repository(const SubtreeRepository& repo, const std::vector<TokenSequence>& sequences,
                     const std::string& dir) {
  fs::create_directories(fs::path(dir) / "crops");
  json j;
  j["format_version"] = 1;
  j["screen_width"] = repo.screen_width;
  j["screen_height"] = repo.screen_height;
  j["alphabet_labels"] = repo.alphabet.labels_in_order();
  j["start_ids"] = repo.start_ids;
  j["end_ids"] = repo.end_ids;
  j["sequences"] = sequences;
  json tokens = json::array();
  for (const auto& st : repo.subtrees) {
    tokens.push_back({{"id", st.id},
                      {"app_id", st.app_id},
                      {"screen_id", st.screen_id},
                      {"bounds", {st.bounds.x1, st.bounds.y1, st.bounds.x2, st.bounds.y2}},
                      {"structure", st.structure_string}});
    write_png(st.crop, (fs::path(dir) / "crops" / (std::to_string(st.id) + ".png")).string());
  }
  j["tokens"] = std::move(tokens);
  std::ofstream out(fs::path(dir) / "repo.json");
  if (!out) throw IoError("cannot write repo.json under " + dir);
  out << j.dump(2) << "\n";
}

std::pair<SubtreeRepository, std::vector<TokenSequence>> load_repository(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "repo.json");
  if (!in) throw IoError("cannot read repo.json under " + dir);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError(std::string("invalid repo.json: ") + e.what());
  }
  SubtreeRepository repo;
  repo.screen_width = j.at("screen_width").get<int>();
  repo.screen_height = j.at("screen_height").get<int>();
  repo.alphabet.restore(j.at("alphabet_labels").get<std::vector<std::string>>());
  for (int id : j.at("start_ids")) repo.start_ids.insert(id);
  for (int id : j.at("end_ids")) repo.end_ids.insert(id);
  for (const auto& t : j.at("tokens")) {
    Subtree st;
    st.id = t.at("id").get<int>();
    st.app_id = t.at("app_id").get<std::string>();
    st.screen_id = t.at("screen_id").get<std::string>();
    auto b = t.at("bounds");
    st.bounds = {b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()};
    st.width_px = st.bounds.width();
    st.height_px = st.bounds.height();
    st.structure_string = t.at("structure").get<std::string>();
    st.crop = read_png((fs::path(dir) / "crops" / (std::to_string(st.id) + ".png")).string());
    if (st.id != repo.size()) throw IoError("non-dense token ids in repo.json");
    repo.app_index[st.app_id].push_back(st.id);
    repo.subtrees.push_back(std::move(st));
  }
  std::vector<TokenSequence> sequences = j.at("sequences").get<std::vector<TokenSequence>>();
  return {std::move(repo), std::move(sequences)};
}

std::vector<GuiScreen> load_screen_tree(const std::string& input_dir) {
  std::vector<GuiScreen> screens;
  std::vector<fs::path> apps;
  if (!fs::is_directory(input_dir)) throw IoError("not a directory: " + input_dir);
  for (const auto& e : fs::directory_iterator(input_dir))
    if (e.is_directory()) apps.push_back(e.path());
  std::sort(apps.begin(), apps.end());
  for (const auto& app : apps) {
    std::vector<fs::path> metas;
    for (const auto& e : fs::directory_iterator(app))
      if (e.path().extension() == ".json") metas.push_back(e.path());
    std::sort(metas.begin(), metas.end());
    for (const auto& meta : metas) {
      std::ifstream in(meta);
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      fs::path png = meta;
      png.replace_extension(".png");
      screens.push_back(parse_screen(text, read_png(png.string()), app.filename().string(),
                                     meta.stem().string()));
    }
  }
  return screens;
}

}  // namespace guigan

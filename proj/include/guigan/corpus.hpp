#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "guigan/image.hpp"

namespace guigan {

struct Bounds {
  int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  int width() const { return x2 - x1; }
  int height() const { return y2 - y1; }
  bool operator==(const Bounds&) const = default;
};

struct ComponentNode {
  std::string component_label;
  Bounds bounds;
  std::vector<ComponentNode> children;
};

struct GuiScreen {
  std::string app_id;
  std::string screen_id;
  int width = 0;
  int height = 0;
  ComponentNode root;
  Image screenshot;
  // scale from declared coordinates to screenshot pixels, recorded when
  // the declared size and the image size disagree
  double scale_x = 1.0;
  double scale_y = 1.0;
};

struct Subtree {
  int id = -1;
  std::string app_id;
  std::string screen_id;
  Bounds bounds;
  int height_px = 0;
  int width_px = 0;
  std::string structure_string;
  Image crop;
};

using TokenSequence = std::vector<int>;

// Maps component labels to structure symbols, assigned in first-seen order.
// Beyond the printable range the string switches to "#<n>;" integer tokens;
// symbol_tokens() splits either form back into comparable units.
class Alphabet {
 public:
  std::string symbol_for(const std::string& label);
  const std::map<std::string, std::string>& mapping() const { return mapping_; }
  const std::vector<std::string>& labels_in_order() const { return order_; }
  void restore(const std::vector<std::string>& labels_in_order);

 private:
  std::map<std::string, std::string> mapping_;
  std::vector<std::string> order_;
};

std::vector<std::string> symbol_tokens(const std::string& structure);

struct SubtreeRepository {
  std::vector<Subtree> subtrees;  // index == token id (dense)
  std::set<int> start_ids;
  std::set<int> end_ids;
  std::map<std::string, std::vector<int>> app_index;
  Alphabet alphabet;
  int screen_width = 0;   // corpus screen size (max over screens)
  int screen_height = 0;

  int size() const { return static_cast<int>(subtrees.size()); }
  const Subtree& at(int id) const;
};

struct SegmentationParams {
  double width_frac = 0.90;
  double aspect_min = 0.25;
  double aspect_max = 50.0;
};

// Parse one screen's metadata document (see README for the schema) and
// attach its screenshot. Throws MalformedMetadata / ImageMismatch.
GuiScreen parse_screen(const std::string& metadata_json, Image screenshot,
                       const std::string& app_id, const std::string& screen_id);

// Recursive width rule + duplicate-bounds, overlap and aspect filters.
// Throws EmptySegmentation when nothing survives.
std::vector<Subtree> segment_subtrees(const GuiScreen& screen, Alphabet& alphabet,
                                      const SegmentationParams& params = {});

std::string structure_string(const ComponentNode& node, Alphabet& alphabet);

// Assigns dense token ids; one real TokenSequence per surviving screen.
// Screens whose segmentation is empty are skipped (logged). Throws
// EmptyCorpus if no screen survives.
std::pair<SubtreeRepository, std::vector<TokenSequence>> build_repository(
    const std::vector<GuiScreen>& screens, const SegmentationParams& params = {});

// On-disk layout: <dir>/repo.json + <dir>/crops/<id>.png, plus the real
// sequences inside repo.json.
void save_repository(const SubtreeRepository& repo, const std::vector<TokenSequence>& sequences,
                     const std::string& dir);
std::pair<SubtreeRepository, std::vector<TokenSequence>> load_repository(const std::string& dir);

// Load a corpus input tree: <input>/<app_id>/<screen_id>.json + .png
std::vector<GuiScreen> load_screen_tree(const std::string& input_dir);

}  // namespace guigan

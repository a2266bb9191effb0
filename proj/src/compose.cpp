#include "guigan/compose.hpp"

#include <cmath>

#include "guigan/errors.hpp"

namespace guigan {

Image render_sequence(const TokenSequence& seq, const SubtreeRepository& repo, int out_width,
                      int out_height, bool separators) {
  if (seq.empty()) throw EmptySequence("render_sequence on empty sequence");
  if (out_width <= 0 || out_height <= 0) throw EmptyImage("non-positive output size");
  Image out(out_width, out_height, {255, 255, 255});
  int y = 0;
  Rgb fill_color = {255, 255, 255};
  for (size_t i = 0; i < seq.size() && y < out_height; ++i) {
    const Subtree& st = repo.at(seq[i]);
    if (st.crop.empty()) throw UnknownToken("token " + std::to_string(seq[i]) + " has no crop");
    if (separators && i > 0) {
      fill_rect(out, 0, y, out_width, y + 4, {255, 0, 0});
      y += 4;
      if (y >= out_height) break;
    }
    int scaled_h = std::max(
        1, static_cast<int>(std::lround(static_cast<double>(st.crop.height) * out_width /
                                        st.crop.width)));
    Image scaled = resize_nearest(st.crop, out_width, scaled_h);
    int visible = std::min(scaled_h, out_height - y);  // bottom-clip at the budget
    for (int row = 0; row < visible; ++row) {
      const uint8_t* src = scaled.at(0, row);
      uint8_t* dst = out.at(0, y + row);
      std::copy(src, src + static_cast<size_t>(out_width) * 3, dst);
    }
    // remember the last crop's bottom row mean for the trailing fill
    long r = 0, g = 0, b = 0;
    const uint8_t* bottom = scaled.at(0, scaled_h - 1);
    for (int x = 0; x < out_width; ++x) {
      r += bottom[3 * x];
      g += bottom[3 * x + 1];
      b += bottom[3 * x + 2];
    }
    fill_color = {static_cast<uint8_t>(r / out_width), static_cast<uint8_t>(g / out_width),
                  static_cast<uint8_t>(b / out_width)};
    y += visible;
  }
  if (y < out_height) fill_rect(out, 0, y, out_width, out_height, fill_color);
  return out;
}

}  // namespace guigan

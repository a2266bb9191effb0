#include <string>

#include "doctest.h"
#include "guigan/compose.hpp"
#include "guigan/errors.hpp"

using namespace guigan;

namespace {

// one-token-per-color repository; crops are crop_w wide and crop_h tall
SubtreeRepository color_repo(const std::vector<Rgb>& colors, int crop_w = 20, int crop_h = 10) {
  SubtreeRepository repo;
  repo.screen_width = 40;
  repo.screen_height = 200;
  for (size_t i = 0; i < colors.size(); ++i) {
    Subtree st;
    st.id = static_cast<int>(i);
    st.app_id = "app";
    st.screen_id = "s";
    st.width_px = crop_w;
    st.height_px = crop_h;
    st.crop = Image(crop_w, crop_h, colors[i]);
    repo.app_index[st.app_id].push_back(st.id);
    repo.subtrees.push_back(std::move(st));
  }
  repo.start_ids = {0};
  return repo;
}

}  // namespace

TEST_CASE("render stacks scaled crops top to bottom") {
  // 20x10 crops rendered at width 40 -> each block is 20 rows tall
  SubtreeRepository repo = color_repo({{200, 0, 0}, {0, 200, 0}, {0, 0, 200}});
  Image img = render_sequence({0, 1, 2}, repo, 40, 80);
  CHECK(img.width == 40);
  CHECK(img.height == 80);
  CHECK(img.at(5, 0)[0] == 200);    // first block: red
  CHECK(img.at(5, 19)[0] == 200);
  CHECK(img.at(5, 20)[1] == 200);   // second block: green
  CHECK(img.at(5, 39)[1] == 200);
  CHECK(img.at(5, 40)[2] == 200);   // third block: blue
  CHECK(img.at(5, 59)[2] == 200);
  // trailing rows are filled with the last crop's bottom-row mean (blue)
  CHECK(img.at(5, 60)[0] == 0);
  CHECK(img.at(5, 79)[2] == 200);
}

TEST_CASE("separators insert 4px red bands between crops only") {
  SubtreeRepository repo = color_repo({{10, 10, 10}, {30, 30, 30}});
  Image img = render_sequence({0, 1}, repo, 40, 60, /*separators=*/true);
  CHECK(img.at(0, 0)[0] == 10);    // no separator before the first crop
  CHECK(img.at(0, 19)[0] == 10);
  for (int y = 20; y < 24; ++y) {  // separator rows
    CHECK(img.at(7, y)[0] == 255);
    CHECK(img.at(7, y)[1] == 0);
    CHECK(img.at(7, y)[2] == 0);
  }
  CHECK(img.at(0, 24)[0] == 30);   // second crop resumes after the band

  // without separators the second crop starts immediately
  Image plain = render_sequence({0, 1}, repo, 40, 60, /*separators=*/false);
  CHECK(plain.at(0, 20)[0] == 30);
}

TEST_CASE("crops crossing the bottom edge are clipped") {
  SubtreeRepository repo = color_repo({{100, 0, 0}, {0, 100, 0}});
  // each block is 20 rows at width 40; the second is clipped to 10 rows
  Image img = render_sequence({0, 1}, repo, 40, 30);
  CHECK(img.height == 30);
  CHECK(img.at(0, 19)[0] == 100);
  CHECK(img.at(0, 29)[1] == 100);  // clipped tail of the green block
  // overrun tokens after the budget are never drawn
  Image same = render_sequence({0, 1, 0, 1, 0}, repo, 40, 30);
  CHECK(same.pixels == img.pixels);
}

TEST_CASE("aspect ratio is preserved through width scaling") {
  // 10x30 crop at output width 40 -> 120 rows tall, clipped to 50
  SubtreeRepository repo = color_repo({{77, 88, 99}}, /*crop_w=*/10, /*crop_h=*/30);
  Image img = render_sequence({0}, repo, 40, 50);
  for (int y = 0; y < 50; ++y) CHECK(img.at(20, y)[0] == 77);
}

TEST_CASE("render rejects empty sequences, bad tokens, and empty output") {
  SubtreeRepository repo = color_repo({{1, 2, 3}});
  CHECK_THROWS_AS(render_sequence({}, repo, 40, 40), EmptySequence);
  CHECK_THROWS_AS(render_sequence({5}, repo, 40, 40), UnknownToken);
  CHECK_THROWS_AS(render_sequence({0}, repo, 0, 40), EmptyImage);
  SubtreeRepository no_crop = color_repo({{1, 2, 3}});
  no_crop.subtrees[0].crop = Image();
  CHECK_THROWS_AS(render_sequence({0}, no_crop, 40, 40), UnknownToken);
}

TEST_CASE("rendering is deterministic") {
  SubtreeRepository repo = color_repo({{5, 6, 7}, {8, 9, 10}, {11, 12, 13}});
  Image a = render_sequence({0, 2, 1, 2}, repo, 64, 128, true);
  Image b = render_sequence({0, 2, 1, 2}, repo, 64, 128, true);
  CHECK(a.pixels == b.pixels);
}

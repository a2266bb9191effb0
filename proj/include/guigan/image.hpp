#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace guigan {

using Rgb = std::array<uint8_t, 3>;

// Row-major interleaved RGB image.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;  // size = width * height * 3

  Image() = default;
  Image(int w, int h, Rgb fill = {0, 0, 0});

  bool empty() const { return width == 0 || height == 0; }

  uint8_t* at(int x, int y) { return pixels.data() + 3 * (static_cast<size_t>(y) * width + x); }
  const uint8_t* at(int x, int y) const {
    return pixels.data() + 3 * (static_cast<size_t>(y) * width + x);
  }

  void set(int x, int y, Rgb c) {
    uint8_t* p = at(x, y);
    p[0] = c[0];
    p[1] = c[1];
    p[2] = c[2];
  }
};

// Clamped rectangle fill, [x1,x2) x [y1,y2).
void fill_rect(Image& img, int x1, int y1, int x2, int y2, Rgb color);

// Crop [x1,x2) x [y1,y2); coordinates clamped to the image.
Image crop(const Image& img, int x1, int y1, int x2, int y2);

// Nearest-neighbor resize: src index = floor(dst * src_dim / dst_dim).
// Throws EmptyImage on an empty source.
Image resize_nearest(const Image& img, int target_w, int target_h);

// Per-channel mean over all pixels.
std::array<double, 3> mean_color(const Image& img);

// PNG round trip (8-bit RGB). write_png output is byte-stable for equal
// inputs. Throws IoError / ImageMismatch on failure.
void write_png(const Image& img, const std::string& path);
Image read_png(const std::string& path);

}  // namespace guigan

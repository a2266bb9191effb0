#include "guigan/image.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <memory>

#include "guigan/errors.hpp"

namespace guigan {

Image::Image(int w, int h, Rgb fill) : width(w), height(h), pixels(static_cast<size_t>(w) * h * 3) {
  for (size_t i = 0; i < pixels.size(); i += 3) {
    pixels[i] = fill[0];
    pixels[i + 1] = fill[1];
    pixels[i + 2] = fill[2];
  }
}

void fill_rect(Image& img, int x1, int y1, int x2, int y2, Rgb color) {
  x1 = std::clamp(x1, 0, img.width);
  x2 = std::clamp(x2, 0, img.width);
  y1 = std::clamp(y1, 0, img.height);
  y2 = std::clamp(y2, 0, img.height);
  for (int y = y1; y < y2; ++y)
    for (int x = x1; x < x2; ++x) img.set(x, y, color);
}

Image crop(const Image& img, int x1, int y1, int x2, int y2) {
  x1 = std::clamp(x1, 0, img.width);
  x2 = std::clamp(x2, x1, img.width);
  y1 = std::clamp(y1, 0, img.height);
  y2 = std::clamp(y2, y1, img.height);
  Image out(x2 - x1, y2 - y1);
  for (int y = y1; y < y2; ++y) {
    const uint8_t* src = img.at(x1, y);
    uint8_t* dst = out.at(0, y - y1);
    std::copy(src, src + static_cast<size_t>(out.width) * 3, dst);
  }
  return out;
}

Image resize_nearest(const Image& img, int target_w, int target_h) {
  if (img.empty()) throw EmptyImage("resize_nearest on empty image");
  if (target_w <= 0 || target_h <= 0) throw EmptyImage("non-positive target size");
  Image out(target_w, target_h);
  for (int y = 0; y < target_h; ++y) {
    int sy = static_cast<int>(static_cast<int64_t>(y) * img.height / target_h);
    for (int x = 0; x < target_w; ++x) {
      int sx = static_cast<int>(static_cast<int64_t>(x) * img.width / target_w);
      const uint8_t* p = img.at(sx, sy);
      out.set(x, y, {p[0], p[1], p[2]});
    }
  }
  return out;
}

std::array<double, 3> mean_color(const Image& img) {
  std::array<double, 3> sum = {0, 0, 0};
  size_t n = static_cast<size_t>(img.width) * img.height;
  if (n == 0) return sum;
  for (size_t i = 0; i < n; ++i) {
    sum[0] += img.pixels[3 * i];
    sum[1] += img.pixels[3 * i + 1];
    sum[2] += img.pixels[3 * i + 2];
  }
  for (double& c : sum) c /= static_cast<double>(n);
  return sum;
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

void write_png(const Image& img, const std::string& path) {
  if (img.empty()) throw EmptyImage("write_png on empty image");
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoError("cannot open for write: " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("png write error: " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  // fixed compression settings keep output bytes reproducible
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y)
    rows[y] = const_cast<png_bytep>(img.pixels.data() + static_cast<size_t>(y) * img.width * 3);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

Image read_png(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw ImageMismatch("cannot open image: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ImageMismatch("unreadable png: " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  // normalize any input format to 8-bit RGB
  png_byte color_type = png_get_color_type(png, info);
  png_byte bit_depth = png_get_bit_depth(png, info);
  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  Image img(static_cast<int>(png_get_image_width(png, info)),
            static_cast<int>(png_get_image_height(png, info)));
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y)
    rows[y] = img.pixels.data() + static_cast<size_t>(y) * img.width * 3;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

}  // namespace guigan

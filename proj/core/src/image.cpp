#include "rigforge/image.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>

#include "rigforge/error.hpp"

namespace rigforge {

Image Image::create(int width, int height, int channels) {
  if (width <= 0 || height <= 0 || (channels != 3 && channels != 4)) {
    throw ValidationError(ErrorCode::FormatError,
                          "image must be RGB or RGBA with positive size");
  }
  Image img;
  img.width = width;
  img.height = height;
  img.channels = channels;
  img.pixels.assign(static_cast<size_t>(width) * height * channels, 0.0f);
  return img;
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};

}  // namespace

Image load_png(const std::string& path) {
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "rb"));
  if (!file) {
    throw ValidationError(ErrorCode::IoError, "cannot open image " + path);
  }
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ValidationError(ErrorCode::FormatError, "failed to decode " + path);
  }
  png_init_io(png, file.get());
  png_read_info(png, info);

  // normalize everything to 8-bit RGB(A)
  png_set_strip_16(png);
  png_set_packing(png);
  png_set_expand(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY ||
      png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  png_read_update_info(png, info);

  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  const int channels = static_cast<int>(png_get_channels(png, info));
  if (channels != 3 && channels != 4) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ValidationError(ErrorCode::FormatError,
                          path + " is not an RGB/RGBA image");
  }

  std::vector<uint8_t> raw(static_cast<size_t>(width) * height * channels);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = raw.data() + static_cast<size_t>(y) * width * channels;
  }
  png_read_image(png, rows.data());
  png_destroy_read_struct(&png, &info, nullptr);

  Image img = Image::create(width, height, channels);
  for (size_t i = 0; i < raw.size(); ++i) {
    img.pixels[i] = raw[i] / 255.0f;
  }
  return img;
}

void save_png(const Image& image, const std::string& path) {
  if (image.channels != 3 && image.channels != 4) {
    throw ValidationError(ErrorCode::FormatError,
                          "only RGB/RGBA images can be written");
  }
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "wb"));
  if (!file) {
    throw ValidationError(ErrorCode::IoError, "cannot write image " + path);
  }
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw ValidationError(ErrorCode::IoError, "failed to encode " + path);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, image.width, image.height, 8,
               image.channels == 3 ? PNG_COLOR_TYPE_RGB
                                   : PNG_COLOR_TYPE_RGB_ALPHA,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<uint8_t> raw(image.pixels.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    const float v = std::min(1.0f, std::max(0.0f, image.pixels[i]));
    raw[i] = static_cast<uint8_t>(std::lround(v * 255.0f));
  }
  std::vector<png_bytep> rows(image.height);
  for (int y = 0; y < image.height; ++y) {
    rows[y] =
        raw.data() + static_cast<size_t>(y) * image.width * image.channels;
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace rigforge

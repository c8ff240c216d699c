#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rigforge {

// Float image, channels interleaved, values in [0,1]. 3 (RGB) or 4 (RGBA)
// channels; PNG I/O is 8-bit.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> pixels;  // width * height * channels

  static Image create(int width, int height, int channels);

  float& at(int x, int y, int c) {
    return pixels[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  float at(int x, int y, int c) const {
    return pixels[(static_cast<size_t>(y) * width + x) * channels + c];
  }
};

Image load_png(const std::string& path);
void save_png(const Image& image, const std::string& path);

}  // namespace rigforge

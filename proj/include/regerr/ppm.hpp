#pragma once

#include "regerr/core.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>

namespace regerr {

/// RGB image with channel values on [0, 1], stored row-major per channel.
struct Image {
  int width = 0;
  int height = 0;
  std::array<Vector, 3> channels;

  Index pixels() const { return static_cast<Index>(width) * height; }
  static Image blank(int width, int height);
};

/// Binary PPM (P6) with maxval <= 255. Samples are divided by maxval.
/// Throws ParseError naming the detected format for anything else.
Image read_ppm(std::istream& in);
Image read_ppm(const std::filesystem::path& path);

/// Writes P6 / 255; values are clamped to [0, 1] and rounded.
void write_ppm(std::ostream& out, const Image& image);
void write_ppm(const std::filesystem::path& path, const Image& image);

/// Deterministic smooth test image: red ramps left to right, green top to
/// bottom, blue is a radial bump.
Image gradient_image(int width, int height);

}  // namespace regerr

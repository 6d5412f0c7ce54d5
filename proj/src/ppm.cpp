#include "regerr/ppm.hpp"

#include "regerr/csv.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace regerr {

namespace {

void skip_space_and_comments(std::istream& in) {
  while (true) {
    const int c = in.peek();
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

int read_header_int(std::istream& in, const char* what) {
  skip_space_and_comments(in);
  int value = 0;
  if (!(in >> value) || value <= 0) throw ParseError(std::string("PPM: bad ") + what);
  return value;
}

std::string describe_magic(const unsigned char* m) {
  if (m[0] == 'P' && m[1] >= '1' && m[1] <= '7') {
    static const char* names[] = {"P1 (ASCII PBM)", "P2 (ASCII PGM)", "P3 (ASCII PPM)",
                                  "P4 (binary PBM)", "P5 (binary PGM)", "P6",
                                  "P7 (PAM)"};
    return names[m[1] - '1'];
  }
  if (m[0] == 0x89 && m[1] == 'P') return "PNG";
  if (m[0] == 0xFF && m[1] == 0xD8) return "JPEG";
  if (m[0] == 'B' && m[1] == 'M') return "BMP";
  if (m[0] == 'G' && m[1] == 'I') return "GIF";
  return "unknown";
}

}  // namespace

Image Image::blank(int width, int height) {
  Image img;
  img.width = width;
  img.height = height;
  for (auto& c : img.channels) c = Vector::Zero(img.pixels());
  return img;
}

Image read_ppm(std::istream& in) {
  unsigned char magic[2] = {0, 0};
  in.read(reinterpret_cast<char*>(magic), 2);
  if (in.gcount() != 2) throw ParseError("image file is empty or truncated");
  if (magic[0] != 'P' || magic[1] != '6')
    throw ParseError("unsupported image format: " + describe_magic(magic) +
                     "; only binary PPM (P6) is supported");

  const int width = read_header_int(in, "width");
  const int height = read_header_int(in, "height");
  const int maxval = read_header_int(in, "maxval");
  if (maxval > 255) throw ParseError("unsupported image format: 16-bit PPM (maxval > 255)");
  if (!std::isspace(in.get())) throw ParseError("PPM: missing whitespace after header");

  Image img = Image::blank(width, height);
  std::vector<unsigned char> raw(static_cast<std::size_t>(img.pixels()) * 3);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    throw ParseError("PPM: truncated pixel data");
  for (Index p = 0; p < img.pixels(); ++p)
    for (int c = 0; c < 3; ++c)
      img.channels[static_cast<std::size_t>(c)](p) =
          raw[static_cast<std::size_t>(p) * 3 + static_cast<std::size_t>(c)] /
          static_cast<double>(maxval);
  return img;
}

Image read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open image '" + path.string() + "'");
  return read_ppm(in);
}

void write_ppm(std::ostream& out, const Image& image) {
  out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  std::vector<unsigned char> raw(static_cast<std::size_t>(image.pixels()) * 3);
  for (Index p = 0; p < image.pixels(); ++p) {
    for (int c = 0; c < 3; ++c) {
      const double v = std::clamp(image.channels[static_cast<std::size_t>(c)](p), 0.0, 1.0);
      raw[static_cast<std::size_t>(p) * 3 + static_cast<std::size_t>(c)] =
          static_cast<unsigned char>(std::lround(v * 255.0));
    }
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

void write_ppm(const std::filesystem::path& path, const Image& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write image '" + path.string() + "'");
  write_ppm(out, image);
}

Image gradient_image(int width, int height) {
  if (width < 1 || height < 1) throw ArgumentError("image dimensions must be positive");
  Image img = Image::blank(width, height);
  const double wx = std::max(1, width - 1);
  const double wy = std::max(1, height - 1);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Index p = static_cast<Index>(y) * width + x;
      const double u = x / wx;
      const double v = y / wy;
      const double r2 = (u - 0.5) * (u - 0.5) + (v - 0.5) * (v - 0.5);
      img.channels[0](p) = 0.1 + 0.8 * u;
      img.channels[1](p) = 0.1 + 0.8 * v;
      img.channels[2](p) = 0.2 + 0.6 * std::exp(-8.0 * r2);
    }
  }
  return img;
}

}  // namespace regerr

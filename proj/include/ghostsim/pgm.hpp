#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ghostsim/errors.hpp"
#include "ghostsim/grid.hpp"
#include "ghostsim/objects.hpp"

namespace ghostsim {

// Binary portable graymap (magic P5), 8- or 16-bit. 16-bit samples are
// big-endian per the format. No comment lines are emitted, so identical data
// produces identical bytes.
struct PgmImage {
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<std::uint16_t> pixels;  // row-major
};

inline void write_pgm(const std::filesystem::path& path, const PgmImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "P5\n" << img.width << " " << img.height << "\n" << img.maxval << "\n";
  if (img.maxval > 255) {
    for (std::uint16_t v : img.pixels) {
      const char bytes[2] = {char(v >> 8), char(v & 0xff)};
      out.write(bytes, 2);
    }
  } else {
    for (std::uint16_t v : img.pixels) {
      const char byte = char(v & 0xff);
      out.write(&byte, 1);
    }
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline PgmImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  auto next_token = [&]() -> std::string {
    std::string tok;
    for (;;) {
      int c = in.get();
      if (c == EOF) break;
      if (c == '#') {
        while (c != EOF && c != '\n') c = in.get();
        continue;
      }
      if (std::isspace(c)) {
        if (!tok.empty()) break;
        continue;
      }
      tok.push_back(char(c));
    }
    return tok;
  };
  if (next_token() != "P5") throw IoError("'" + path.string() + "' is not a binary PGM (P5)");
  PgmImage img;
  try {
    img.width = std::stoi(next_token());
    img.height = std::stoi(next_token());
    img.maxval = std::stoi(next_token());
  } catch (const std::exception&) {
    throw IoError("malformed PGM header in '" + path.string() + "'");
  }
  if (img.width <= 0 || img.height <= 0 || img.maxval <= 0 || img.maxval > 65535)
    throw IoError("malformed PGM header in '" + path.string() + "'");
  const std::size_t count = std::size_t(img.width) * std::size_t(img.height);
  img.pixels.resize(count);
  if (img.maxval > 255) {
    std::vector<char> raw(count * 2);
    in.read(raw.data(), std::streamsize(raw.size()));
    if (std::size_t(in.gcount()) != raw.size())
      throw IoError("truncated PGM data in '" + path.string() + "'");
    for (std::size_t i = 0; i < count; ++i)
      img.pixels[i] = std::uint16_t((std::uint8_t(raw[2 * i]) << 8) | std::uint8_t(raw[2 * i + 1]));
  } else {
    std::vector<char> raw(count);
    in.read(raw.data(), std::streamsize(raw.size()));
    if (std::size_t(in.gcount()) != raw.size())
      throw IoError("truncated PGM data in '" + path.string() + "'");
    for (std::size_t i = 0; i < count; ++i) img.pixels[i] = std::uint8_t(raw[i]);
  }
  return img;
}

// Object masks map linearly between transmittance [0, 1] and 8-bit gray.
inline void save_mask_pgm(const ObjectMask& mask, const std::filesystem::path& path) {
  PgmImage img;
  img.width = mask.grid.n;
  img.height = mask.grid.dims == 2 ? mask.grid.n : 1;
  img.maxval = 255;
  img.pixels.resize(mask.transmittance.size());
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const double t = std::clamp(std::abs(mask.transmittance[i]), 0.0, 1.0);
    img.pixels[i] = std::uint16_t(std::lround(t * 255.0));
  }
  write_pgm(path, img);
}

inline ObjectMask load_mask_pgm(const std::filesystem::path& path, const GridGeometry& grid) {
  const PgmImage img = read_pgm(path);
  const int expect_h = grid.dims == 2 ? grid.n : 1;
  if (img.width != grid.n || img.height != expect_h)
    throw IoError("PGM '" + path.string() + "' is " + std::to_string(img.width) + "x" +
                  std::to_string(img.height) + " but the scenario grid needs " +
                  std::to_string(grid.n) + "x" + std::to_string(expect_h));
  ObjectMask mask{grid, std::vector<cdouble>(grid.size())};
  for (std::size_t i = 0; i < mask.transmittance.size(); ++i)
    mask.transmittance[i] = cdouble(double(img.pixels[i]) / double(img.maxval), 0.0);
  return mask;
}

// 16-bit scalar export with a linear [lo, hi] -> [0, 65535] map; the caller
// records lo/hi in a sidecar so values can be reconstructed.
inline PgmImage quantize_scalar_map(const std::vector<double>& values, int width, int height,
                                    double& lo, double& hi) {
  lo = values.empty() ? 0.0 : values[0];
  hi = lo;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  PgmImage img;
  img.width = width;
  img.height = height;
  img.maxval = 65535;
  img.pixels.resize(values.size());
  const double span = hi - lo;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double t = span > 0 ? (values[i] - lo) / span : 0.0;
    img.pixels[i] = std::uint16_t(std::lround(t * 65535.0));
  }
  return img;
}

}  // namespace ghostsim

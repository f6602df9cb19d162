#pragma once

#include "pli/image.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pli {

/// Decoded 8-bit raster; interleaved channels (1 = grayscale, 3 = RGB).
struct RasterImage {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> data;

  std::uint8_t at(int row, int col, int ch) const {
    return data[(static_cast<std::size_t>(row) * width + col) * channels + ch];
  }
};

/// Reads a PNG (any 8/16-bit colour type, reduced to 8-bit gray or RGB)
/// or a PGM/PPM (P2, P5, P6). Format detected from magic bytes.
RasterImage read_image(const std::string& path);

void write_png_gray(const std::string& path, const Image<std::uint8_t>& img);
void write_png_rgb(const std::string& path,
                   const Image<std::uint8_t>& r,
                   const Image<std::uint8_t>& g,
                   const Image<std::uint8_t>& b);

void write_pgm(const std::string& path, const Image<std::uint8_t>& img);

/// 16-bit binary PGM (P5 with maxval 65535, big-endian samples).
void write_pgm16(const std::string& path, const Image<std::uint16_t>& img);

}  // namespace pli

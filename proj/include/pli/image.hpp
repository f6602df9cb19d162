#pragma once

#include <Eigen/Core>

#include <array>
#include <compare>
#include <cstdint>
#include <vector>

namespace pli {

/// Dense raster, row-major, indexed (row, col).
template <typename Scalar>
using Image = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using MaskImage = Image<std::uint8_t>;

/// Integer pixel coordinate, image convention: row grows downward.
struct Pixel {
  int row = 0;
  int col = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
  // Lexicographic (row, then col); used for deterministic tie-breaking.
  friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

inline Pixel operator+(Pixel a, Pixel b) { return {a.row + b.row, a.col + b.col}; }
inline Pixel operator-(Pixel a, Pixel b) { return {a.row - b.row, a.col - b.col}; }

/// 8-neighbourhood offsets, clockwise starting at north (screen convention).
inline constexpr std::array<Pixel, 8> kNeighbours8{{{-1, 0},
                                                    {-1, 1},
                                                    {0, 1},
                                                    {1, 1},
                                                    {1, 0},
                                                    {1, -1},
                                                    {0, -1},
                                                    {-1, -1}}};

/// 4-neighbourhood offsets: north, east, south, west.
inline constexpr std::array<Pixel, 4> kNeighbours4{{{-1, 0}, {0, 1}, {1, 0}, {0, -1}}};

inline int chebyshev(Pixel a, Pixel b) {
  const int dr = a.row > b.row ? a.row - b.row : b.row - a.row;
  const int dc = a.col > b.col ? a.col - b.col : b.col - a.col;
  return dr > dc ? dr : dc;
}

inline int manhattan(Pixel a, Pixel b) {
  const int dr = a.row > b.row ? a.row - b.row : b.row - a.row;
  const int dc = a.col > b.col ? a.col - b.col : b.col - a.col;
  return dr + dc;
}

template <typename Scalar>
bool in_bounds(const Image<Scalar>& img, Pixel p) {
  return p.row >= 0 && p.row < img.rows() && p.col >= 0 && p.col < img.cols();
}

/// All pixels with value != 0, raster order.
std::vector<Pixel> foreground_pixels(const MaskImage& mask);

long foreground_count(const MaskImage& mask);

/// Connected-component labelling of a binary image.
/// Labels are assigned 1..count in raster order of first encounter.
struct Components {
  Image<int> labels;  // 0 = background
  int count = 0;
  std::vector<long> sizes;       // indexed by label, entry 0 unused
  std::vector<Pixel> bbox_min;   // top-left bounding-box corner per label, entry 0 unused
};

Components label_components(const MaskImage& mask, bool eight_connected = true);

/// Nearest-neighbour resampling by a factor in (0, 1]. Exact identity at scale 1.
template <typename Scalar>
Image<Scalar> resample_nearest(const Image<Scalar>& src, double scale) {
  const auto out_rows = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::llround(static_cast<double>(src.rows()) * scale)));
  const auto out_cols = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::llround(static_cast<double>(src.cols()) * scale)));
  Image<Scalar> out(out_rows, out_cols);
  const double row_ratio = static_cast<double>(src.rows()) / static_cast<double>(out_rows);
  const double col_ratio = static_cast<double>(src.cols()) / static_cast<double>(out_cols);
  for (Eigen::Index r = 0; r < out_rows; ++r) {
    const auto sr = std::min<Eigen::Index>(src.rows() - 1, static_cast<Eigen::Index>((static_cast<double>(r) + 0.5) * row_ratio));
    for (Eigen::Index c = 0; c < out_cols; ++c) {
      const auto sc = std::min<Eigen::Index>(src.cols() - 1, static_cast<Eigen::Index>((static_cast<double>(c) + 0.5) * col_ratio));
      out(r, c) = src(sr, sc);
    }
  }
  return out;
}

}  // namespace pli

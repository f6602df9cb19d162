#pragma once

#include "pli/image.hpp"
#include "pli/mask_io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pli {

/// One-pixel-wide skeleton with the Euclidean distance transform of its source mask.
/// distance(p) is the distance to the nearest background pixel; local branch
/// width at a skeleton pixel is 2 * distance.
struct Skeleton {
  MaskImage mask;           // 1 = skeleton pixel
  Image<double> distance;   // EDT over the whole source mask

  int rows() const { return static_cast<int>(mask.rows()); }
  int cols() const { return static_cast<int>(mask.cols()); }
  bool at(Pixel p) const { return mask(p.row, p.col) != 0; }
  double distance_at(Pixel p) const { return distance(p.row, p.col); }
  std::vector<Pixel> pixels() const { return foreground_pixels(mask); }
};

/// Exact squared Euclidean distance transform. The image border counts as
/// background: a mask touching the frame still gets finite distances.
Image<std::int64_t> squared_distance_transform(const MaskImage& mask);

Image<double> distance_transform(const MaskImage& mask);

/// Topology-preserving thinning to a one-pixel-wide skeleton.
/// Erodes one boundary layer per round from north, south, east and west in
/// turn so constant-width ribbons collapse onto their centreline; end points
/// (single-neighbour pixels) are never removed.
MaskImage thin(const MaskImage& mask);

/// Medial axis transform: thinning plus per-pixel distance (half-width).
/// Throws on an empty mask.
Skeleton medial_axis_transform(const BinaryMask& mask);

enum class PixelKind : std::uint8_t { kEndPoint, kBodyPoint, kTJunction, kBlock };

struct PixelClass {
  PixelKind kind = PixelKind::kEndPoint;
  int neighbour_count = 0;
};

/// Classification by 8-connected skeleton neighbour count:
/// 1 -> end point, 2 -> body point, 3 -> T-junction, >=4 -> block.
PixelClass classify(int neighbour_count);

/// Count of 8-connected skeleton neighbours for every skeleton pixel (0 elsewhere).
Image<std::uint8_t> neighbour_counts(const MaskImage& skeleton);

struct SkeletonClasses {
  Image<std::uint8_t> counts;
  std::vector<Pixel> endpoints;      // neighbour count <= 1
  std::vector<Pixel> intersections;  // neighbour count >= 3 (T-junctions and blocks)
};

SkeletonClasses classify_pixels(const Skeleton& skeleton);

/// Debug export: distance * 100 rendered to a 16-bit PGM, saturating.
void write_distance_debug_pgm(const std::string& path, const Skeleton& skeleton);

}  // namespace pli

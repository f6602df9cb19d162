#pragma once

#include "pli/image.hpp"
#include "pli/morphology.hpp"

#include <vector>

namespace pli {

/// Junction-free skeleton segment: an ordered pixel polyline with per-pixel widths.
struct Branch {
  int label = 0;
  std::vector<Pixel> pixels;      // consecutive entries are 8-adjacent, no repeats
  std::vector<double> widths_px;  // widths_px[i] = 2 * skeleton distance at pixels[i]

  int length_px() const { return static_cast<int>(pixels.size()); }
  Pixel first() const { return pixels.front(); }
  Pixel last() const { return pixels.back(); }
};

/// Removes the intersection pixels and labels the residual 8-connected
/// segments 1..n (raster order of first encounter). The returned sets are
/// unordered. Throws when nothing remains (degenerate tree).
std::vector<std::vector<Pixel>> section_branches(const Skeleton& skeleton,
                                                 const std::vector<Pixel>& intersections);

/// Orders a junction-free 8-connected pixel set end to end by tracing the
/// one-pixel-wide curve (Moore neighbourhood walk, out-and-back deduplicated).
/// Closed loops start at the topmost-leftmost pixel and run clockwise.
/// Throws "unsectioned branch" if the set still contains a junction pixel.
std::vector<Pixel> order_branch_pixels(const std::vector<Pixel>& unordered);

/// Fills widths_px from the skeleton distance map (width = 2 * distance).
void attach_widths(Branch& branch, const Skeleton& skeleton);

/// section + order + widths for every segment.
std::vector<Branch> extract_branches(const Skeleton& skeleton,
                                     const std::vector<Pixel>& intersections);

}  // namespace pli

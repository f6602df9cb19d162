#pragma once

#include "pli/image.hpp"

#include <optional>
#include <string>

namespace pli {

/// Smallest mask edge accepted; the 3x3/4x4 scanning kernels are meaningless below this.
inline constexpr int kMinMaskDimension = 16;

/// How raster samples are mapped to foreground.
enum class ForegroundPolicy {
  kThreshold,   // sample (max channel for RGB) > threshold
  kAnyNonzero,  // any channel > 0
};

struct LoadOptions {
  ForegroundPolicy policy = ForegroundPolicy::kThreshold;
  int threshold = 127;
};

/// Binary raster of the tree foreground. data holds 0/1, origin top-left, row-major.
struct BinaryMask {
  MaskImage data;
  double source_scale = 1.0;

  int width() const { return static_cast<int>(data.cols()); }
  int height() const { return static_cast<int>(data.rows()); }
  bool at(Pixel p) const { return data(p.row, p.col) != 0; }
  long foreground() const { return foreground_count(data); }
};

struct BBox {
  int min_row = 0;
  int min_col = 0;
  int max_row = -1;
  int max_col = -1;

  int height() const { return max_row - min_row + 1; }
  int width() const { return max_col - min_col + 1; }
  bool empty() const { return max_row < min_row; }
};

BBox foreground_bbox(const MaskImage& mask);

enum class CalibrationMethod { kWholeTreeHeight, kExplicit };

/// Spatial calibration relating pixels to physical length.
struct PixelCalibration {
  double mm_per_px = 10.0;
  double assumed_tree_height_m = 0.0;
  CalibrationMethod method = CalibrationMethod::kExplicit;
};

/// Loads a PNG/PGM raster, binarises it, and resamples by `scale` (nearest-neighbour).
/// Throws on unreadable files, empty foreground, or dimensions below kMinMaskDimension.
BinaryMask load_mask(const std::string& path, double scale = 1.0, const LoadOptions& options = {});

/// Wraps an in-memory 0/1 raster as a mask (validation as in load_mask).
BinaryMask make_mask(MaskImage data, double source_scale = 1.0);

/// Retains only the largest 8-connected component. Ties break on the smallest
/// bounding-box top-left corner (row, then column). Idempotent.
BinaryMask keep_largest_component(const BinaryMask& mask);

/// mm/px from an assumed whole-tree height spanning the foreground bounding box.
PixelCalibration compute_calibration(const BinaryMask& mask, double assumed_tree_height_m);

PixelCalibration explicit_calibration(double mm_per_px);

void write_mask_png(const std::string& path, const BinaryMask& mask);
void write_mask_pgm(const std::string& path, const BinaryMask& mask);

}  // namespace pli

#include "pli/mask_io.hpp"

#include "pli/error.hpp"
#include "pli/image_io.hpp"

#include <algorithm>

namespace pli {

BBox foreground_bbox(const MaskImage& mask) {
  BBox box;
  box.min_row = static_cast<int>(mask.rows());
  box.min_col = static_cast<int>(mask.cols());
  for (Eigen::Index r = 0; r < mask.rows(); ++r) {
    for (Eigen::Index c = 0; c < mask.cols(); ++c) {
      if (mask(r, c) == 0) continue;
      box.min_row = std::min(box.min_row, static_cast<int>(r));
      box.min_col = std::min(box.min_col, static_cast<int>(c));
      box.max_row = std::max(box.max_row, static_cast<int>(r));
      box.max_col = std::max(box.max_col, static_cast<int>(c));
    }
  }
  return box;
}

namespace {

void validate_mask(const BinaryMask& mask) {
  if (mask.width() < kMinMaskDimension || mask.height() < kMinMaskDimension) {
    fail("mask dimensions below minimum (" + std::to_string(kMinMaskDimension) + " px)");
  }
  if (mask.foreground() == 0) fail("empty foreground");
}

}  // namespace

BinaryMask load_mask(const std::string& path, double scale, const LoadOptions& options) {
  if (!(scale > 0.0 && scale <= 1.0)) fail("scale must lie in (0, 1]");
  const RasterImage raster = read_image(path);

  MaskImage full(raster.height, raster.width);
  for (int r = 0; r < raster.height; ++r) {
    for (int c = 0; c < raster.width; ++c) {
      int sample = 0;
      for (int ch = 0; ch < raster.channels; ++ch) {
        sample = std::max(sample, static_cast<int>(raster.at(r, c, ch)));
      }
      const bool fg = options.policy == ForegroundPolicy::kAnyNonzero
                          ? sample > 0
                          : sample > options.threshold;
      full(r, c) = fg ? 1 : 0;
    }
  }
  if (foreground_count(full) == 0) fail("empty foreground");

  BinaryMask mask;
  mask.data = scale == 1.0 ? std::move(full) : resample_nearest(full, scale);
  mask.source_scale = scale;
  validate_mask(mask);
  return mask;
}

BinaryMask make_mask(MaskImage data, double source_scale) {
  BinaryMask mask;
  mask.data = std::move(data);
  mask.source_scale = source_scale;
  validate_mask(mask);
  return mask;
}

BinaryMask keep_largest_component(const BinaryMask& mask) {
  if (mask.foreground() == 0) fail("empty foreground");
  const Components comps = label_components(mask.data, /*eight_connected=*/true);
  int best = 1;
  for (int label = 2; label <= comps.count; ++label) {
    if (comps.sizes[label] > comps.sizes[best] ||
        (comps.sizes[label] == comps.sizes[best] && comps.bbox_min[label] < comps.bbox_min[best])) {
      best = label;
    }
  }
  BinaryMask out;
  out.source_scale = mask.source_scale;
  out.data = (comps.labels == best).cast<std::uint8_t>();
  return out;
}

PixelCalibration compute_calibration(const BinaryMask& mask, double assumed_tree_height_m) {
  if (assumed_tree_height_m <= 0.0) fail("assumed tree height must be positive");
  const BBox box = foreground_bbox(mask.data);
  if (box.empty() || box.height() <= 0) fail("zero bounding-box height");
  PixelCalibration cal;
  cal.assumed_tree_height_m = assumed_tree_height_m;
  cal.mm_per_px = assumed_tree_height_m * 1000.0 / static_cast<double>(box.height());
  cal.method = CalibrationMethod::kWholeTreeHeight;
  return cal;
}

PixelCalibration explicit_calibration(double mm_per_px) {
  if (mm_per_px <= 0.0) fail("mm_per_px must be positive");
  PixelCalibration cal;
  cal.mm_per_px = mm_per_px;
  cal.method = CalibrationMethod::kExplicit;
  return cal;
}

void write_mask_png(const std::string& path, const BinaryMask& mask) {
  write_png_gray(path, (mask.data * 255).cast<std::uint8_t>());
}

void write_mask_pgm(const std::string& path, const BinaryMask& mask) {
  write_pgm(path, (mask.data * 255).cast<std::uint8_t>());
}

}  // namespace pli

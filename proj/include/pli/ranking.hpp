#pragma once

#include "pli/window_analysis.hpp"

#include <vector>

namespace pli {

/// Viable window with its ranking penalty.
struct PerchCandidate {
  WindowProfile profile;
  double penalty = 0.0;
};

enum class PerchStatus { kFound, kNoViableBranch, kDegenerateTree };

/// Final output: the chosen window midpoint plus the full ranked list.
struct PerchResult {
  PerchStatus status = PerchStatus::kNoViableBranch;
  PerchCandidate chosen;                 // valid only when status == kFound
  Pixel midpoint_px;
  double midpoint_mm_x = 0.0;            // millimetres right of the image's left edge
  double midpoint_mm_y = 0.0;            // millimetres up from the image's bottom edge
  std::vector<PerchCandidate> ranked;    // ascending penalty
  double lambda_angle = 0.0;
  double lambda_width = 0.0;
};

/// Weighted sum of range-normalised deviations from the ideal branch
/// (0 degrees slope, central width at the lower spec bound), clamped to [0, 1].
/// Curvature filters viability but never enters the penalty.
double penalty(const WindowProfile& profile, const ViabilityThresholds& thresholds,
               const DroneSpec& spec);

/// Ranks candidates ascending by penalty and picks the argmin. Ties break on
/// smaller angle, then smaller width deviation, then smaller (row, col).
PerchResult select_perch(const std::vector<WindowProfile>& viable,
                         const ViabilityThresholds& thresholds, const DroneSpec& spec,
                         const PixelCalibration& cal, int image_height);

}  // namespace pli

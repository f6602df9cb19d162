#pragma once

#include "pli/branch_extraction.hpp"
#include "pli/tree_graph.hpp"

#include <span>
#include <utility>
#include <vector>

namespace pli {

/// Calibration at which the default pixel-domain thresholds were tuned.
inline constexpr double kReferenceMmPerPx = 10.0;

/// Default curvature cutoff (1/px) at the reference calibration. Sits above
/// the staircase noise floor of the finite-difference estimator (~0.086 1/px
/// for shallow rasterised lines at smoothing window 5) while still rejecting
/// bends tighter than roughly an 80 mm radius.
inline constexpr double kDefaultCurvatureThresholdAtRef = 0.12;

/// Viability cutoffs; lenient by design so a handful of options survive.
struct ViabilityThresholds {
  double max_theta_deg = 30.0;
  double max_abs_curvature_per_px = kDefaultCurvatureThresholdAtRef;
  double width_min_px = 0.0;
  double width_max_px = 0.0;
  int smoothing_window_px = 5;  // odd, >= 3
  int claw_width_px = 5;

  void validate() const;

  /// Width window from the drone spec; curvature cutoff rescaled by
  /// mm_per_px / reference so the physical bend tolerance is scale-invariant.
  static ViabilityThresholds from_spec(const DroneSpec& spec, const PixelCalibration& cal);
};

/// Window length: the claw engagement span in pixels, floor 5.
int window_length_px(const DroneSpec& spec, const PixelCalibration& cal);

/// Default stride between window starts: max(1, window / 4).
int window_stride_px(int window_px);

/// Profile of one sliding window over a branch.
struct WindowProfile {
  int branch_label = 0;
  int start_index = 0;
  int end_index = 0;  // inclusive
  Pixel midpoint;
  double theta_deg = 0.0;              // unsigned angle to horizontal, [0, 90]
  std::vector<double> curvature;       // smoothed per-pixel values
  double max_abs_curvature = 0.0;
  double width_min_px = 0.0;
  double width_max_px = 0.0;
  double width_avg_central_px = 0.0;
  bool monotonic = true;
};

/// Start/end index pairs for windows of `window_px` pixels every `stride_px`;
/// branches shorter than the window yield none.
std::vector<std::pair<int, int>> slide_windows(int branch_length, int window_px, int stride_px);

/// Unsigned angle to the horizontal from the window endpoints, folded into
/// [0, 90] degrees (image rows are converted to mathematical y before atan2).
double window_angle(std::span<const Pixel> pixels);

/// Signed curvature from central finite differences over the pixel index
/// (one-sided at the ends), followed by a centred moving average. Returns the
/// smoothed series and its maximum absolute value. Requires >= 5 pixels.
std::pair<std::vector<double>, double> window_curvature(std::span<const Pixel> pixels,
                                                        int smoothing_window_px);

struct WidthStats {
  double min = 0.0;
  double max = 0.0;
  double avg_central = 0.0;  // mean over a centred claw-width sub-range
};

WidthStats window_width_stats(std::span<const double> widths, int claw_width_px);

/// False iff the smoothed per-step vertical gradient changes sign
/// (values above +eps and below -eps both present); plateaus are monotone.
bool monotonicity_check(std::span<const Pixel> pixels, int smoothing_window_px);

/// All windows of one branch, fully profiled.
std::vector<WindowProfile> analyze_branch(const Branch& branch, int window_px, int stride_px,
                                          const ViabilityThresholds& thresholds);

struct ViabilityVerdict {
  bool angle_ok = false;
  bool curvature_ok = false;
  bool width_ok = false;
  bool monotonic_ok = false;

  bool viable() const { return angle_ok && curvature_ok && width_ok && monotonic_ok; }
};

ViabilityVerdict check_viability(const WindowProfile& profile,
                                 const ViabilityThresholds& thresholds);

/// Keeps the profiles passing every criterion. An empty result is legal and
/// means the tree offers no suitable perch.
std::vector<WindowProfile> viability_filter(const std::vector<WindowProfile>& profiles,
                                            const ViabilityThresholds& thresholds);

}  // namespace pli

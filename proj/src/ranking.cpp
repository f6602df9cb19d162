#include "pli/ranking.hpp"

#include "pli/error.hpp"

#include <algorithm>
#include <cmath>

namespace pli {

double penalty(const WindowProfile& profile, const ViabilityThresholds& thresholds,
               const DroneSpec& spec) {
  if (!(thresholds.max_theta_deg > 0.0)) fail("degenerate angle threshold range");
  if (!(thresholds.width_max_px > thresholds.width_min_px)) {
    fail("degenerate width threshold range");
  }
  const double angle_dev = std::abs(profile.theta_deg) / thresholds.max_theta_deg;
  const double width_dev = std::abs(profile.width_avg_central_px - thresholds.width_min_px) /
                           (thresholds.width_max_px - thresholds.width_min_px);
  const double p = spec.lambda_angle * angle_dev + spec.lambda_width * width_dev;
  return std::clamp(p, 0.0, 1.0);
}

PerchResult select_perch(const std::vector<WindowProfile>& viable,
                         const ViabilityThresholds& thresholds, const DroneSpec& spec,
                         const PixelCalibration& cal, int image_height) {
  PerchResult result;
  result.lambda_angle = spec.lambda_angle;
  result.lambda_width = spec.lambda_width;
  if (viable.empty()) {
    result.status = PerchStatus::kNoViableBranch;
    return result;
  }

  result.ranked.reserve(viable.size());
  for (const WindowProfile& p : viable) {
    result.ranked.push_back({p, penalty(p, thresholds, spec)});
  }
  const auto better = [&thresholds](const PerchCandidate& a, const PerchCandidate& b) {
    if (a.penalty != b.penalty) return a.penalty < b.penalty;
    if (a.profile.theta_deg != b.profile.theta_deg) {
      return a.profile.theta_deg < b.profile.theta_deg;
    }
    const double da = std::abs(a.profile.width_avg_central_px - thresholds.width_min_px);
    const double db = std::abs(b.profile.width_avg_central_px - thresholds.width_min_px);
    if (da != db) return da < db;
    return a.profile.midpoint < b.profile.midpoint;
  };
  std::stable_sort(result.ranked.begin(), result.ranked.end(), better);

  result.status = PerchStatus::kFound;
  result.chosen = result.ranked.front();
  result.midpoint_px = result.chosen.profile.midpoint;
  result.midpoint_mm_x = result.midpoint_px.col * cal.mm_per_px;
  result.midpoint_mm_y = (image_height - 1 - result.midpoint_px.row) * cal.mm_per_px;
  return result;
}

}  // namespace pli

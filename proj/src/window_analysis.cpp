#include "pli/window_analysis.hpp"

#include "pli/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pli {

void ViabilityThresholds::validate() const {
  if (!(max_theta_deg > 0.0)) fail("angle threshold must be positive");
  if (!(max_abs_curvature_per_px > 0.0)) fail("curvature threshold must be positive");
  if (!(width_min_px > 0.0) || !(width_max_px > width_min_px)) {
    fail("width window requires 0 < min < max");
  }
  if (smoothing_window_px < 3 || smoothing_window_px % 2 == 0) {
    fail("smoothing window must be odd and >= 3");
  }
  if (claw_width_px < 1) fail("claw width must be >= 1 px");
}

ViabilityThresholds ViabilityThresholds::from_spec(const DroneSpec& spec,
                                                   const PixelCalibration& cal) {
  ViabilityThresholds t;
  const WidthSpecPx range = width_spec_px(spec, cal);
  t.width_min_px = range.min_px;
  t.width_max_px = range.max_px;
  t.max_abs_curvature_per_px =
      kDefaultCurvatureThresholdAtRef * (cal.mm_per_px / kReferenceMmPerPx);
  t.claw_width_px = std::max(1, static_cast<int>(std::llround(spec.claw_width_mm / cal.mm_per_px)));
  t.validate();
  return t;
}

int window_length_px(const DroneSpec& spec, const PixelCalibration& cal) {
  return std::max(5, static_cast<int>(std::llround(spec.claw_width_mm / cal.mm_per_px)));
}

int window_stride_px(int window_px) { return std::max(1, window_px / 4); }

std::vector<std::pair<int, int>> slide_windows(int branch_length, int window_px, int stride_px) {
  if (window_px < 3) fail("window must be >= 3 px");
  if (stride_px < 1) fail("stride must be >= 1 px");
  std::vector<std::pair<int, int>> out;
  for (int start = 0; start + window_px <= branch_length; start += stride_px) {
    out.emplace_back(start, start + window_px - 1);
  }
  return out;
}

double window_angle(std::span<const Pixel> pixels) {
  if (pixels.size() < 2) fail("window needs at least 2 pixels");
  const Pixel a = pixels.front();
  const Pixel b = pixels.back();
  if (a == b) fail("coincident window endpoints");
  // Image rows grow downward; mathematical y grows upward.
  const double dy = -static_cast<double>(b.row - a.row);
  const double dx = static_cast<double>(b.col - a.col);
  double theta = std::abs(std::atan2(dy, dx)) * 180.0 / std::numbers::pi;
  if (theta > 90.0) theta = 180.0 - theta;
  return theta;
}

namespace {

std::vector<double> central_gradient(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> g(n, 0.0);
  if (n < 2) return g;
  g[0] = v[1] - v[0];
  g[n - 1] = v[n - 1] - v[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (v[i + 1] - v[i - 1]) / 2.0;
  return g;
}

std::vector<double> moving_average(const std::vector<double>& v, int window) {
  const int n = static_cast<int>(v.size());
  const int half = window / 2;
  std::vector<double> out(v.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (int j = lo; j <= hi; ++j) sum += v[j];
    out[i] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

}  // namespace

std::pair<std::vector<double>, double> window_curvature(std::span<const Pixel> pixels,
                                                        int smoothing_window_px) {
  if (pixels.size() < 5) fail("window too short for curvature (needs >= 5 pixels)");
  if (smoothing_window_px < 3 || smoothing_window_px % 2 == 0) {
    fail("smoothing window must be odd and >= 3");
  }
  const std::size_t n = pixels.size();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<double>(pixels[i].col);
    y[i] = -static_cast<double>(pixels[i].row);  // mathematical y
  }
  const std::vector<double> dx = central_gradient(x);
  const std::vector<double> dy = central_gradient(y);
  const std::vector<double> ddx = central_gradient(dx);
  const std::vector<double> ddy = central_gradient(dy);

  std::vector<double> kappa(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double speed_sq = dx[i] * dx[i] + dy[i] * dy[i];
    if (speed_sq <= 0.0) fail("degenerate window: repeated coordinates");
    kappa[i] = (dx[i] * ddy[i] - dy[i] * ddx[i]) / std::pow(speed_sq, 1.5);
  }
  std::vector<double> smoothed = moving_average(kappa, smoothing_window_px);
  double max_abs = 0.0;
  for (const double k : smoothed) max_abs = std::max(max_abs, std::abs(k));
  return {std::move(smoothed), max_abs};
}

WidthStats window_width_stats(std::span<const double> widths, int claw_width_px) {
  if (widths.empty()) fail("empty width list");
  if (claw_width_px < 1) fail("claw width must be >= 1 px");
  WidthStats stats;
  stats.min = *std::min_element(widths.begin(), widths.end());
  stats.max = *std::max_element(widths.begin(), widths.end());
  const int n = static_cast<int>(widths.size());
  const int m = std::min(claw_width_px, n);
  const int start = (n - m) / 2;
  double sum = 0.0;
  for (int i = start; i < start + m; ++i) sum += widths[i];
  stats.avg_central = sum / static_cast<double>(m);
  return stats;
}

bool monotonicity_check(std::span<const Pixel> pixels, int smoothing_window_px) {
  if (pixels.size() < 3) fail("monotonicity needs at least 3 pixels");
  constexpr double kEps = 1e-6;
  std::vector<double> dy(pixels.size() - 1);
  for (std::size_t i = 0; i + 1 < pixels.size(); ++i) {
    dy[i] = -static_cast<double>(pixels[i + 1].row - pixels[i].row);  // mathematical y
  }
  const std::vector<double> smoothed = moving_average(dy, smoothing_window_px);
  bool rising = false;
  bool falling = false;
  for (const double v : smoothed) {
    if (v > kEps) rising = true;
    if (v < -kEps) falling = true;
  }
  return !(rising && falling);
}

std::vector<WindowProfile> analyze_branch(const Branch& branch, int window_px, int stride_px,
                                          const ViabilityThresholds& thresholds) {
  std::vector<WindowProfile> profiles;
  if (branch.length_px() < std::max(window_px, 5)) return profiles;
  for (const auto& [start, end] : slide_windows(branch.length_px(), window_px, stride_px)) {
    const std::span<const Pixel> pts(branch.pixels.data() + start,
                                     static_cast<std::size_t>(end - start + 1));
    const std::span<const double> widths(branch.widths_px.data() + start,
                                         static_cast<std::size_t>(end - start + 1));
    WindowProfile p;
    p.branch_label = branch.label;
    p.start_index = start;
    p.end_index = end;
    p.midpoint = branch.pixels[static_cast<std::size_t>((start + end) / 2)];
    p.theta_deg = window_angle(pts);
    auto [kappa, max_abs] = window_curvature(pts, thresholds.smoothing_window_px);
    p.curvature = std::move(kappa);
    p.max_abs_curvature = max_abs;
    const WidthStats ws = window_width_stats(widths, thresholds.claw_width_px);
    p.width_min_px = ws.min;
    p.width_max_px = ws.max;
    p.width_avg_central_px = ws.avg_central;
    p.monotonic = monotonicity_check(pts, thresholds.smoothing_window_px);
    profiles.push_back(std::move(p));
  }
  return profiles;
}

ViabilityVerdict check_viability(const WindowProfile& profile,
                                 const ViabilityThresholds& thresholds) {
  ViabilityVerdict v;
  v.angle_ok = profile.theta_deg <= thresholds.max_theta_deg;
  v.curvature_ok = profile.max_abs_curvature <= thresholds.max_abs_curvature_per_px;
  v.width_ok = profile.width_avg_central_px >= thresholds.width_min_px &&
               profile.width_avg_central_px <= thresholds.width_max_px;
  v.monotonic_ok = profile.monotonic;
  return v;
}

std::vector<WindowProfile> viability_filter(const std::vector<WindowProfile>& profiles,
                                            const ViabilityThresholds& thresholds) {
  std::vector<WindowProfile> out;
  for (const WindowProfile& p : profiles) {
    if (check_viability(p, thresholds).viable()) out.push_back(p);
  }
  return out;
}

}  // namespace pli

#pragma once

#include "pli/mask_io.hpp"
#include "pli/morphology.hpp"
#include "pli/ranking.hpp"
#include "pli/tree_graph.hpp"
#include "pli/window_analysis.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pli {

/// Full pipeline configuration; every override is validated at construction of
/// the owning type.
struct PipelineConfig {
  std::string mask_path;
  std::string image_path;  // optional RGB backdrop for the overlay
  double scale = 1.0;
  LoadOptions load;
  DroneSpec spec;

  double assumed_tree_height_m = 8.0;
  std::optional<double> mm_per_px;  // explicit calibration override

  std::optional<double> max_theta_deg;
  std::optional<double> max_abs_curvature_per_px;
  std::optional<int> smoothing_window_px;
  std::optional<int> window_px;
  std::optional<int> stride_px;

  bool skip_prune = false;
  bool verbose_candidates = false;

  bool stress_check_enabled = false;
  double lever_m = 2.0;
  double mor_mpa = 27.0;
  double stress_safety_factor = 2.0;

  std::string out_json;
  std::string overlay_path;
  std::string dump_skeleton_path;
  std::string dump_graph_path;
};

/// Wall time per stage, milliseconds (monotonic clock).
struct StageTimings {
  double load_ms = 0.0;
  double mat_ms = 0.0;
  double classify_ms = 0.0;
  double section_ms = 0.0;
  double order_ms = 0.0;
  double graph_ms = 0.0;
  double weight_ms = 0.0;
  double prune_ms = 0.0;
  double windows_ms = 0.0;
  double rank_ms = 0.0;
  double total_ms = 0.0;

  double max_stage_ms() const;
};

struct PipelineOutcome {
  PerchResult result;
  StageTimings timings;
  PixelCalibration calibration;
  BinaryMask mask;  // after scaling and largest-component filtering
  Skeleton skeleton;
  TreeGraph graph;
  std::map<int, Branch> branches;  // surviving branches analysed for windows
  std::vector<WindowProfile> all_windows;
  std::vector<ViabilityVerdict> window_verdicts;
  ViabilityThresholds thresholds;
  int window_px = 0;
  int stride_px = 0;

  /// 0 found, 2 no viable branch, 3 degenerate tree.
  int exit_code() const;
};

/// Runs load -> MAT -> classify -> section -> order -> graph -> weight ->
/// prune (unless skipped) -> windows -> rank. Stage errors propagate with the
/// stage name attached.
PipelineOutcome run_pipeline(const PipelineConfig& config);

/// Same pipeline on an in-memory mask (the load stage covers only
/// largest-component filtering and calibration).
PipelineOutcome run_pipeline_on_mask(BinaryMask mask, const PipelineConfig& config);

/// Stable report, schema "pli-report/1". Identical config and input produce
/// identical output except for the timings block.
nlohmann::json report_json(const PipelineOutcome& outcome, const PipelineConfig& config);

/// Skeleton drawn thin, viable windows outlined, chosen midpoint marked red;
/// with verbose candidates the failing windows are traced in orange.
void render_overlay(const PipelineOutcome& outcome, const PipelineConfig& config,
                    const std::string& path);

/// Node/edge list as JSON lines.
void write_graph_dump(const PipelineOutcome& outcome, const std::string& path);

struct ProfileRow {
  double scale = 0.0;
  StageTimings timings;
};

/// One pipeline run per scale on the same input; rows ordered by scale descending.
std::vector<ProfileRow> profile_scales(const PipelineConfig& config,
                                       const std::vector<double>& scales);

std::string profile_csv(const std::vector<ProfileRow>& rows);

}  // namespace pli

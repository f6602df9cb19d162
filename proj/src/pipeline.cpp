#include "pli/pipeline.hpp"

#include "pli/error.hpp"
#include "pli/image_io.hpp"
#include "pli/mechanics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pli {

namespace {

using Clock = std::chrono::steady_clock;

class StageTimer {
 public:
  explicit StageTimer(double& slot) : slot_(slot), start_(Clock::now()) {}
  ~StageTimer() {
    slot_ = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

 private:
  double& slot_;
  Clock::time_point start_;
};

template <typename Fn>
auto run_stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(std::string(name) + ": " + e.what());
  }
}

}  // namespace

double StageTimings::max_stage_ms() const {
  return std::max({load_ms, mat_ms, classify_ms, section_ms, order_ms, graph_ms, weight_ms,
                   prune_ms, windows_ms, rank_ms});
}

int PipelineOutcome::exit_code() const {
  switch (result.status) {
    case PerchStatus::kFound:
      return 0;
    case PerchStatus::kNoViableBranch:
      return 2;
    case PerchStatus::kDegenerateTree:
      return 3;
  }
  return 1;
}

PipelineOutcome run_pipeline(const PipelineConfig& config) {
  BinaryMask mask;
  double load_ms = 0.0;
  {
    StageTimer t(load_ms);
    mask = run_stage("load", [&] { return load_mask(config.mask_path, config.scale, config.load); });
  }
  PipelineOutcome outcome = run_pipeline_on_mask(std::move(mask), config);
  outcome.timings.load_ms += load_ms;
  outcome.timings.total_ms += load_ms;
  return outcome;
}

PipelineOutcome run_pipeline_on_mask(BinaryMask mask, const PipelineConfig& config) {
  config.spec.validate();
  PipelineOutcome out;
  const auto total_start = Clock::now();

  {
    StageTimer t(out.timings.load_ms);
    run_stage("load", [&] {
      out.mask = keep_largest_component(mask);
      out.calibration = config.mm_per_px
                            ? explicit_calibration(*config.mm_per_px)
                            : compute_calibration(out.mask, config.assumed_tree_height_m);
      return 0;
    });
  }

  out.thresholds = run_stage("load", [&] {
    ViabilityThresholds t = ViabilityThresholds::from_spec(config.spec, out.calibration);
    if (config.max_theta_deg) t.max_theta_deg = *config.max_theta_deg;
    if (config.max_abs_curvature_per_px) t.max_abs_curvature_per_px = *config.max_abs_curvature_per_px;
    if (config.smoothing_window_px) t.smoothing_window_px = *config.smoothing_window_px;
    t.validate();
    return t;
  });
  out.window_px = config.window_px ? *config.window_px
                                   : window_length_px(config.spec, out.calibration);
  out.stride_px = config.stride_px ? *config.stride_px : window_stride_px(out.window_px);
  if (out.window_px < 3 || out.stride_px < 1) fail("load: invalid window geometry");

  {
    StageTimer t(out.timings.mat_ms);
    run_stage("mat", [&] {
      out.skeleton = medial_axis_transform(out.mask);
      return 0;
    });
  }

  SkeletonClasses classes;
  {
    StageTimer t(out.timings.classify_ms);
    classes = run_stage("classify", [&] { return classify_pixels(out.skeleton); });
  }

  bool degenerate = false;
  std::vector<std::vector<Pixel>> sections;
  {
    StageTimer t(out.timings.section_ms);
    try {
      sections = section_branches(out.skeleton, classes.intersections);
    } catch (const Error&) {
      degenerate = true;
    }
  }

  if (!degenerate) {
    std::vector<Branch> branch_list;
    {
      StageTimer t(out.timings.order_ms);
      run_stage("order", [&] {
        branch_list.reserve(sections.size());
        for (std::size_t i = 0; i < sections.size(); ++i) {
          Branch b;
          b.label = static_cast<int>(i) + 1;
          b.pixels = order_branch_pixels(sections[i]);
          attach_widths(b, out.skeleton);
          branch_list.push_back(std::move(b));
        }
        return 0;
      });
    }

    TreeStats stats;
    {
      StageTimer t(out.timings.graph_ms);
      run_stage("graph", [&] {
        for (Branch& b : branch_list) out.branches.emplace(b.label, std::move(b));
        out.graph = build_graph(out.branches, classes.intersections, out.skeleton);
        return 0;
      });
    }
    {
      StageTimer t(out.timings.weight_ms);
      run_stage("weight", [&] {
        std::vector<Branch> all;
        all.reserve(out.branches.size());
        for (const auto& [label, b] : out.branches) all.push_back(b);
        stats = compute_stats(all);
        compute_weights(out.graph, out.branches, stats, config.spec, out.calibration);
        return 0;
      });
    }
    if (!config.skip_prune) {
      StageTimer t(out.timings.prune_ms);
      run_stage("prune", [&] {
        prune_graph(out.graph, out.branches, config.spec, stats, out.calibration);
        return 0;
      });
    }

    {
      StageTimer t(out.timings.windows_ms);
      run_stage("windows", [&] {
        for (const auto& [id, edge] : out.graph.edges) {
          const Branch& b = out.branches.at(edge.branch_label);
          for (WindowProfile& p : analyze_branch(b, out.window_px, out.stride_px, out.thresholds)) {
            out.window_verdicts.push_back(check_viability(p, out.thresholds));
            out.all_windows.push_back(std::move(p));
          }
        }
        return 0;
      });
    }
  }

  {
    StageTimer t(out.timings.rank_ms);
    run_stage("rank", [&] {
      if (degenerate) {
        out.result.status = PerchStatus::kDegenerateTree;
        out.result.lambda_angle = config.spec.lambda_angle;
        out.result.lambda_width = config.spec.lambda_width;
        return 0;
      }
      std::vector<WindowProfile> viable;
      for (std::size_t i = 0; i < out.all_windows.size(); ++i) {
        if (out.window_verdicts[i].viable()) viable.push_back(out.all_windows[i]);
      }
      out.result = select_perch(viable, out.thresholds, config.spec, out.calibration,
                                out.mask.height());
      return 0;
    });
  }

  out.timings.total_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - total_start).count();

  if (!config.dump_skeleton_path.empty()) {
    write_distance_debug_pgm(config.dump_skeleton_path, out.skeleton);
  }
  if (!config.dump_graph_path.empty()) write_graph_dump(out, config.dump_graph_path);
  if (!config.overlay_path.empty()) render_overlay(out, config, config.overlay_path);
  if (!config.out_json.empty()) {
    std::ofstream f(config.out_json);
    if (!f) fail("cannot write report to '" + config.out_json + "'");
    f << report_json(out, config).dump(2) << "\n";
  }
  return out;
}

namespace {

nlohmann::json candidate_json(const PerchCandidate& cand, const PixelCalibration& cal) {
  const WindowProfile& p = cand.profile;
  return {
      {"midpoint_px", {p.midpoint.row, p.midpoint.col}},
      {"penalty", cand.penalty},
      {"theta_deg", p.theta_deg},
      {"max_abs_curvature", p.max_abs_curvature},
      {"width_avg_central_px", p.width_avg_central_px},
      {"width_avg_mm", p.width_avg_central_px * cal.mm_per_px},
      {"branch_label", p.branch_label},
      {"window", {p.start_index, p.end_index}},
  };
}

std::string status_string(PerchStatus status) {
  switch (status) {
    case PerchStatus::kFound:
      return "found";
    case PerchStatus::kNoViableBranch:
      return "no_viable_branch";
    case PerchStatus::kDegenerateTree:
      return "degenerate_tree";
  }
  return "unknown";
}

}  // namespace

nlohmann::json report_json(const PipelineOutcome& outcome, const PipelineConfig& config) {
  const PerchResult& r = outcome.result;
  nlohmann::json doc;
  doc["schema"] = "pli-report/1";
  doc["status"] = status_string(r.status);
  doc["lambdas"] = {{"angle", config.spec.lambda_angle}, {"width", config.spec.lambda_width}};
  doc["calibration"] = {
      {"mm_per_px", outcome.calibration.mm_per_px},
      {"method", outcome.calibration.method == CalibrationMethod::kWholeTreeHeight
                     ? "whole-tree-height"
                     : "explicit"}};
  if (r.status == PerchStatus::kFound) {
    doc["midpoint_px"] = {r.midpoint_px.row, r.midpoint_px.col};
    doc["midpoint_mm"] = {r.midpoint_mm_x, r.midpoint_mm_y};
    doc["penalty"] = r.chosen.penalty;
    doc["theta_deg"] = r.chosen.profile.theta_deg;
    doc["width_avg_mm"] = r.chosen.profile.width_avg_central_px * outcome.calibration.mm_per_px;
  } else {
    doc["midpoint_px"] = nullptr;
    doc["midpoint_mm"] = nullptr;
    doc["penalty"] = nullptr;
    doc["theta_deg"] = nullptr;
    doc["width_avg_mm"] = nullptr;
  }
  doc["candidates"] = nlohmann::json::array();
  for (const PerchCandidate& cand : r.ranked) {
    nlohmann::json c = candidate_json(cand, outcome.calibration);
    if (config.stress_check_enabled) {
      const double radius_m =
          cand.profile.width_avg_central_px * outcome.calibration.mm_per_px / 2.0 / 1000.0;
      const double sigma = bending_stress_mpa(config.spec.drone_mass_kg, config.lever_m, radius_m);
      c["stress_mpa"] = sigma;
      c["stress_ok"] = stress_check(sigma, config.mor_mpa, config.stress_safety_factor);
    }
    doc["candidates"].push_back(std::move(c));
  }
  if (config.verbose_candidates) {
    nlohmann::json windows = nlohmann::json::array();
    for (std::size_t i = 0; i < outcome.all_windows.size(); ++i) {
      const WindowProfile& p = outcome.all_windows[i];
      const ViabilityVerdict& v = outcome.window_verdicts[i];
      windows.push_back({{"branch_label", p.branch_label},
                         {"window", {p.start_index, p.end_index}},
                         {"midpoint_px", {p.midpoint.row, p.midpoint.col}},
                         {"theta_deg", p.theta_deg},
                         {"max_abs_curvature", p.max_abs_curvature},
                         {"width_avg_central_px", p.width_avg_central_px},
                         {"monotonic", p.monotonic},
                         {"angle_ok", v.angle_ok},
                         {"curvature_ok", v.curvature_ok},
                         {"width_ok", v.width_ok},
                         {"viable", v.viable()}});
    }
    doc["windows"] = std::move(windows);
  }
  doc["timings"] = {{"load_ms", outcome.timings.load_ms},
                    {"mat_ms", outcome.timings.mat_ms},
                    {"classify_ms", outcome.timings.classify_ms},
                    {"section_ms", outcome.timings.section_ms},
                    {"order_ms", outcome.timings.order_ms},
                    {"graph_ms", outcome.timings.graph_ms},
                    {"weight_ms", outcome.timings.weight_ms},
                    {"prune_ms", outcome.timings.prune_ms},
                    {"windows_ms", outcome.timings.windows_ms},
                    {"rank_ms", outcome.timings.rank_ms},
                    {"total_ms", outcome.timings.total_ms}};
  return doc;
}

namespace {

struct Canvas {
  Image<std::uint8_t> r, g, b;

  void paint(Pixel p, std::uint8_t pr, std::uint8_t pg, std::uint8_t pb) {
    if (p.row < 0 || p.row >= r.rows() || p.col < 0 || p.col >= r.cols()) return;
    r(p.row, p.col) = pr;
    g(p.row, p.col) = pg;
    b(p.row, p.col) = pb;
  }

  void disk(Pixel centre, int radius, std::uint8_t pr, std::uint8_t pg, std::uint8_t pb) {
    for (int dr = -radius; dr <= radius; ++dr) {
      for (int dc = -radius; dc <= radius; ++dc) {
        if (dr * dr + dc * dc <= radius * radius) {
          paint({centre.row + dr, centre.col + dc}, pr, pg, pb);
        }
      }
    }
  }
};

}  // namespace

void render_overlay(const PipelineOutcome& outcome, const PipelineConfig& config,
                    const std::string& path) {
  const int h = outcome.mask.height();
  const int w = outcome.mask.width();
  Canvas canvas;
  canvas.r = Image<std::uint8_t>::Zero(h, w);
  canvas.g = Image<std::uint8_t>::Zero(h, w);
  canvas.b = Image<std::uint8_t>::Zero(h, w);

  if (!config.image_path.empty()) {
    const RasterImage img = read_image(config.image_path);
    for (int r = 0; r < h; ++r) {
      const int sr = std::min(img.height - 1, r * img.height / h);
      for (int c = 0; c < w; ++c) {
        const int sc = std::min(img.width - 1, c * img.width / w);
        canvas.r(r, c) = img.at(sr, sc, 0);
        canvas.g(r, c) = img.at(sr, sc, img.channels == 3 ? 1 : 0);
        canvas.b(r, c) = img.at(sr, sc, img.channels == 3 ? 2 : 0);
      }
    }
  } else {
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        const std::uint8_t v = outcome.mask.data(r, c) ? 70 : 0;
        canvas.r(r, c) = v;
        canvas.g(r, c) = v;
        canvas.b(r, c) = v;
      }
    }
  }

  for (const Pixel p : outcome.skeleton.pixels()) canvas.paint(p, 255, 255, 255);

  for (std::size_t i = 0; i < outcome.all_windows.size(); ++i) {
    const WindowProfile& p = outcome.all_windows[i];
    const bool viable = outcome.window_verdicts[i].viable();
    if (!viable && !config.verbose_candidates) continue;
    const Branch& branch = outcome.branches.at(p.branch_label);
    for (int k = p.start_index; k <= p.end_index; ++k) {
      if (viable) {
        canvas.paint(branch.pixels[static_cast<std::size_t>(k)], 0, 200, 0);
      } else {
        canvas.paint(branch.pixels[static_cast<std::size_t>(k)], 230, 120, 0);
      }
    }
  }

  if (outcome.result.status == PerchStatus::kFound) {
    canvas.disk(outcome.result.midpoint_px, 4, 255, 0, 0);
  }
  write_png_rgb(path, canvas.r, canvas.g, canvas.b);
}

void write_graph_dump(const PipelineOutcome& outcome, const std::string& path) {
  std::ofstream f(path);
  if (!f) fail("cannot write graph dump to '" + path + "'");
  for (const auto& [id, node] : outcome.graph.nodes) {
    const nlohmann::json line = {
        {"type", "node"},
        {"id", id},
        {"pos", {node.pos.row, node.pos.col}},
        {"kind", node.kind == NodeKind::kIntersection ? "intersection" : "endpoint"}};
    f << line.dump() << "\n";
  }
  for (const auto& [id, edge] : outcome.graph.edges) {
    const auto it = outcome.branches.find(edge.branch_label);
    const int length = it == outcome.branches.end() ? 0 : it->second.length_px();
    const nlohmann::json line = {{"type", "edge"},       {"a", edge.node_front},
                                 {"b", edge.node_back},  {"label", edge.branch_label},
                                 {"weight", edge.weight}, {"length", length}};
    f << line.dump() << "\n";
  }
}

std::vector<ProfileRow> profile_scales(const PipelineConfig& config,
                                       const std::vector<double>& scales) {
  for (const double s : scales) {
    if (!(s > 0.0 && s <= 1.0)) fail("profile scales must lie in (0, 1]");
  }
  std::vector<double> ordered = scales;
  std::sort(ordered.begin(), ordered.end(), std::greater<>());
  std::vector<ProfileRow> rows;
  for (const double s : ordered) {
    PipelineConfig run = config;
    run.scale = s;
    run.out_json.clear();
    run.overlay_path.clear();
    run.dump_skeleton_path.clear();
    run.dump_graph_path.clear();
    const PipelineOutcome outcome = run_pipeline(run);
    rows.push_back({s, outcome.timings});
  }
  return rows;
}

std::string profile_csv(const std::vector<ProfileRow>& rows) {
  std::ostringstream out;
  out << "scale,load_ms,mat_ms,classify_ms,section_ms,order_ms,graph_ms,weight_ms,prune_ms,"
         "windows_ms,rank_ms,total_ms\n";
  for (const ProfileRow& row : rows) {
    const StageTimings& t = row.timings;
    out << row.scale << "," << t.load_ms << "," << t.mat_ms << "," << t.classify_ms << ","
        << t.section_ms << "," << t.order_ms << "," << t.graph_ms << "," << t.weight_ms << ","
        << t.prune_ms << "," << t.windows_ms << "," << t.rank_ms << "," << t.total_ms << "\n";
  }
  return out.str();
}

}  // namespace pli

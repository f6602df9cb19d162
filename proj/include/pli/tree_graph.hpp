#pragma once

#include "pli/branch_extraction.hpp"
#include "pli/mask_io.hpp"

#include <map>
#include <vector>

namespace pli {

/// Drone and claw parameters driving weighting, viability and ranking.
struct DroneSpec {
  double claw_min_radius_mm = 30.0;
  double claw_max_radius_mm = 110.0;
  double claw_width_mm = 150.0;  // physical claw footprint along the branch
  double drone_mass_kg = 1.5;
  double alpha = 0.6;            // length-to-width bias in the branch weighting
  double lambda_angle = 0.8;
  double lambda_width = 0.2;
  double prune_threshold = 0.1;

  void validate() const;
};

/// Claw radius range expressed as branch-width (diameter) thresholds in pixels.
struct WidthSpecPx {
  double min_px = 0.0;
  double max_px = 0.0;
};

WidthSpecPx width_spec_px(const DroneSpec& spec, const PixelCalibration& cal);

/// Tree extrema used to normalise branch weights; computed once over the
/// pre-pruning branch set.
struct TreeStats {
  double longest_branch_px = 0.0;  // L_max
  double max_width_px = 0.0;       // W_max
};

TreeStats compute_stats(const std::vector<Branch>& branches);

/// Branch weighting: alpha * l / L_max + (1 - alpha) * in_spec_fraction * mean_width / W_max,
/// where in_spec_fraction averages the indicator of widths inside [min_px, max_px].
double branch_weight(const Branch& branch, const TreeStats& stats, const DroneSpec& spec,
                     const PixelCalibration& cal);

enum class NodeKind { kIntersection, kEndpoint };

struct GraphNode {
  int id = 0;
  Pixel pos;                          // cluster centroid, rounded to nearest pixel
  NodeKind kind = NodeKind::kEndpoint;
  std::vector<Pixel> cluster;         // intersection pixels collapsed into this node
  std::vector<double> cluster_widths;
};

struct GraphEdge {
  int id = 0;
  int node_front = 0;  // node at branch.pixels.front()
  int node_back = 0;   // node at branch.pixels.back()
  int branch_label = 0;
  double weight = 0.0;
};

/// Undirected multigraph: intersections/endpoints as nodes, branches as edges.
/// Parallel edges and self-loops are permitted; a branch label appears on at
/// most one edge.
struct TreeGraph {
  std::map<int, GraphNode> nodes;
  std::map<int, GraphEdge> edges;
  int next_node_id = 0;
  int next_edge_id = 0;

  int degree(int node_id) const;                 // self-loops count twice
  std::vector<int> edges_at(int node_id) const;  // edge ids, ascending
};

/// Builds the node/edge lists. Each 8-connected cluster of intersection pixels
/// becomes one node; a branch endpoint attaches to a node when it falls inside
/// the 4x4 window anchored at (row-1, col-1) of any cluster pixel; unattached
/// branch endpoints become endpoint nodes of degree 1.
TreeGraph build_graph(const std::map<int, Branch>& branches,
                      const std::vector<Pixel>& intersections, const Skeleton& skeleton);

void compute_weights(TreeGraph& graph, const std::map<int, Branch>& branches,
                     const TreeStats& stats, const DroneSpec& spec, const PixelCalibration& cal);

/// Removes every degree-2 node whose two incident edges are distinct,
/// concatenating the edges (node cluster pixels inserted between) and
/// recomputing the merged weight against the frozen stats.
void merge_degree2_nodes(TreeGraph& graph, std::map<int, Branch>& branches,
                         const TreeStats& stats, const DroneSpec& spec,
                         const PixelCalibration& cal);

/// Iteratively removes below-threshold edges that touch a degree-1 node, drops
/// orphaned nodes and merges degree-2 chains, until a full pass changes
/// nothing. The maximum-weight edge is never removable, so at least one edge
/// survives.
void prune_graph(TreeGraph& graph, std::map<int, Branch>& branches, const DroneSpec& spec,
                 const TreeStats& stats, const PixelCalibration& cal);

}  // namespace pli

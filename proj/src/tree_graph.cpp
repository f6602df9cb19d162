#include "pli/tree_graph.hpp"

#include "pli/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pli {

void DroneSpec::validate() const {
  if (!(claw_min_radius_mm > 0.0) || !(claw_min_radius_mm < claw_max_radius_mm)) {
    fail("claw radius range requires 0 < min < max");
  }
  if (claw_width_mm <= 0.0) fail("claw width must be positive");
  if (drone_mass_kg < 0.0) fail("drone mass must be non-negative");
  if (alpha < 0.0 || alpha > 1.0) fail("alpha must lie in [0, 1]");
  if (lambda_angle < 0.0 || lambda_width < 0.0 ||
      std::abs(lambda_angle + lambda_width - 1.0) > 1e-9) {
    fail("lambda weights must be non-negative and sum to 1");
  }
  if (prune_threshold < 0.0 || prune_threshold > 1.0) fail("prune threshold must lie in [0, 1]");
}

WidthSpecPx width_spec_px(const DroneSpec& spec, const PixelCalibration& cal) {
  // Claw radii are specified in mm; widths are diameters.
  return {2.0 * spec.claw_min_radius_mm / cal.mm_per_px,
          2.0 * spec.claw_max_radius_mm / cal.mm_per_px};
}

TreeStats compute_stats(const std::vector<Branch>& branches) {
  if (branches.empty()) fail("no branches to compute stats over");
  TreeStats stats;
  for (const Branch& b : branches) {
    stats.longest_branch_px = std::max(stats.longest_branch_px, static_cast<double>(b.length_px()));
    for (const double w : b.widths_px) stats.max_width_px = std::max(stats.max_width_px, w);
  }
  if (!(stats.longest_branch_px >= 1.0) || !(stats.max_width_px > 0.0)) {
    fail("degenerate tree stats");
  }
  return stats;
}

double branch_weight(const Branch& branch, const TreeStats& stats, const DroneSpec& spec,
                     const PixelCalibration& cal) {
  if (!(stats.longest_branch_px > 0.0) || !(stats.max_width_px > 0.0)) {
    fail("stats extrema must be positive");
  }
  const WidthSpecPx range = width_spec_px(spec, cal);
  const double n = static_cast<double>(branch.length_px());
  double in_spec = 0.0;
  double width_sum = 0.0;
  for (const double w : branch.widths_px) {
    if (w >= range.min_px && w <= range.max_px) in_spec += 1.0;
    width_sum += w;
  }
  const double in_spec_fraction = in_spec / n;
  const double mean_width = width_sum / n;
  return spec.alpha * (n / stats.longest_branch_px) +
         (1.0 - spec.alpha) * in_spec_fraction * (mean_width / stats.max_width_px);
}

int TreeGraph::degree(int node_id) const {
  int d = 0;
  for (const auto& [id, e] : edges) {
    if (e.node_front == node_id) ++d;
    if (e.node_back == node_id) ++d;
  }
  return d;
}

std::vector<int> TreeGraph::edges_at(int node_id) const {
  std::vector<int> out;
  for (const auto& [id, e] : edges) {
    if (e.node_front == node_id || e.node_back == node_id) out.push_back(id);
  }
  return out;
}

namespace {

bool in_attach_window(Pixel endpoint, Pixel cluster_pixel) {
  // 4x4 window anchored with its top-left at (row-1, col-1) of the cluster pixel.
  return endpoint.row >= cluster_pixel.row - 1 && endpoint.row <= cluster_pixel.row + 2 &&
         endpoint.col >= cluster_pixel.col - 1 && endpoint.col <= cluster_pixel.col + 2;
}

double cluster_distance(Pixel p, const GraphNode& node) {
  double best = std::numeric_limits<double>::infinity();
  for (const Pixel q : node.cluster) {
    const double dr = p.row - q.row;
    const double dc = p.col - q.col;
    best = std::min(best, dr * dr + dc * dc);
  }
  return best;
}

// Node ids matching the endpoint's attach window, nearest first.
std::vector<int> attach_candidates(Pixel endpoint, const TreeGraph& graph) {
  std::vector<std::pair<double, int>> hits;
  for (const auto& [id, node] : graph.nodes) {
    if (node.kind != NodeKind::kIntersection) continue;
    for (const Pixel q : node.cluster) {
      if (in_attach_window(endpoint, q)) {
        hits.emplace_back(cluster_distance(endpoint, node), id);
        break;
      }
    }
  }
  std::sort(hits.begin(), hits.end());
  std::vector<int> out;
  out.reserve(hits.size());
  for (const auto& [d, id] : hits) out.push_back(id);
  return out;
}

}  // namespace

TreeGraph build_graph(const std::map<int, Branch>& branches,
                      const std::vector<Pixel>& intersections, const Skeleton& skeleton) {
  TreeGraph graph;

  // Cluster adjacent intersection pixels into single nodes (centroid position).
  MaskImage inter_mask = MaskImage::Zero(skeleton.mask.rows(), skeleton.mask.cols());
  for (const Pixel p : intersections) inter_mask(p.row, p.col) = 1;
  const Components comps = label_components(inter_mask, /*eight_connected=*/true);
  std::vector<std::vector<Pixel>> clusters(comps.count);
  for (const Pixel p : intersections) clusters[comps.labels(p.row, p.col) - 1].push_back(p);
  for (auto& cluster : clusters) {
    std::sort(cluster.begin(), cluster.end());
    GraphNode node;
    node.id = graph.next_node_id++;
    node.kind = NodeKind::kIntersection;
    node.cluster = cluster;
    double row_sum = 0.0, col_sum = 0.0;
    for (const Pixel p : cluster) {
      row_sum += p.row;
      col_sum += p.col;
      node.cluster_widths.push_back(2.0 * skeleton.distance_at(p));
    }
    node.pos = {static_cast<int>(std::llround(row_sum / cluster.size())),
                static_cast<int>(std::llround(col_sum / cluster.size()))};
    graph.nodes.emplace(node.id, std::move(node));
  }

  const auto endpoint_node = [&graph](Pixel p, const Skeleton& skel) {
    GraphNode node;
    node.id = graph.next_node_id++;
    node.kind = NodeKind::kEndpoint;
    node.pos = p;
    graph.nodes.emplace(node.id, node);
    return node.id;
  };

  for (const auto& [label, branch] : branches) {
    const Pixel front = branch.first();
    const Pixel back = branch.last();
    std::vector<int> front_candidates = attach_candidates(front, graph);
    std::vector<int> back_candidates = attach_candidates(back, graph);

    GraphEdge edge;
    edge.id = graph.next_edge_id++;
    edge.branch_label = label;

    if (branch.length_px() == 1 && front_candidates.size() >= 2) {
      // A single-pixel bridge between two junction clusters: connect the two
      // nearest distinct nodes rather than forming a spurious self-loop.
      edge.node_front = front_candidates[0];
      edge.node_back = front_candidates[1];
    } else {
      edge.node_front =
          front_candidates.empty() ? endpoint_node(front, skeleton) : front_candidates[0];
      edge.node_back =
          back_candidates.empty() ? endpoint_node(back, skeleton) : back_candidates[0];
    }
    graph.edges.emplace(edge.id, edge);
  }
  return graph;
}

void compute_weights(TreeGraph& graph, const std::map<int, Branch>& branches,
                     const TreeStats& stats, const DroneSpec& spec, const PixelCalibration& cal) {
  for (auto& [id, edge] : graph.edges) {
    const auto it = branches.find(edge.branch_label);
    if (it == branches.end()) fail("edge references missing branch");
    edge.weight = branch_weight(it->second, stats, spec, cal);
  }
}

namespace {

// Orders cluster pixels into a short path starting near `from`, greedy nearest.
std::vector<std::size_t> order_cluster(const std::vector<Pixel>& cluster, Pixel from) {
  std::vector<std::size_t> order;
  std::vector<bool> used(cluster.size(), false);
  Pixel cursor = from;
  for (std::size_t step = 0; step < cluster.size(); ++step) {
    std::size_t best = cluster.size();
    int best_d = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < cluster.size(); ++i) {
      if (used[i]) continue;
      const int d = chebyshev(cursor, cluster[i]);
      if (d < best_d || (d == best_d && best < cluster.size() && cluster[i] < cluster[best])) {
        best = i;
        best_d = d;
      }
    }
    used[best] = true;
    order.push_back(best);
    cursor = cluster[best];
  }
  return order;
}

}  // namespace

void merge_degree2_nodes(TreeGraph& graph, std::map<int, Branch>& branches,
                         const TreeStats& stats, const DroneSpec& spec,
                         const PixelCalibration& cal) {
  while (true) {
    int target = -1;
    std::vector<int> incident;
    for (const auto& [id, node] : graph.nodes) {
      if (graph.degree(id) != 2) continue;
      incident = graph.edges_at(id);
      if (incident.size() != 2) continue;  // a single self-loop is left alone
      target = id;
      break;
    }
    if (target < 0) return;

    GraphEdge e1 = graph.edges.at(incident[0]);
    GraphEdge e2 = graph.edges.at(incident[1]);
    const GraphNode node = graph.nodes.at(target);

    Branch p = branches.at(e1.branch_label);
    Branch q = branches.at(e2.branch_label);

    // Orient p to end at the merged node and q to start at it.
    int far_front;  // node id at the far end of p
    if (e1.node_back == target) {
      far_front = e1.node_front;
    } else {
      std::reverse(p.pixels.begin(), p.pixels.end());
      std::reverse(p.widths_px.begin(), p.widths_px.end());
      far_front = e1.node_back;
    }
    int far_back;
    if (e2.node_front == target) {
      far_back = e2.node_back;
    } else {
      std::reverse(q.pixels.begin(), q.pixels.end());
      std::reverse(q.widths_px.begin(), q.widths_px.end());
      far_back = e2.node_front;
    }

    Branch merged;
    merged.label = std::min(e1.branch_label, e2.branch_label);
    merged.pixels = p.pixels;
    merged.widths_px = p.widths_px;
    for (const std::size_t i : order_cluster(node.cluster, p.pixels.back())) {
      merged.pixels.push_back(node.cluster[i]);
      merged.widths_px.push_back(node.cluster_widths[i]);
    }
    merged.pixels.insert(merged.pixels.end(), q.pixels.begin(), q.pixels.end());
    merged.widths_px.insert(merged.widths_px.end(), q.widths_px.begin(), q.widths_px.end());

    branches.erase(e1.branch_label);
    branches.erase(e2.branch_label);
    branches.emplace(merged.label, merged);

    GraphEdge edge;
    edge.id = graph.next_edge_id++;
    edge.node_front = far_front;
    edge.node_back = far_back;
    edge.branch_label = merged.label;
    edge.weight = branch_weight(merged, stats, spec, cal);

    graph.edges.erase(e1.id);
    graph.edges.erase(e2.id);
    graph.edges.emplace(edge.id, edge);
    graph.nodes.erase(target);
  }
}

namespace {

// The maximum-weight edge is immune to pruning so a result always survives.
int protected_edge_id(const TreeGraph& graph) {
  int best = -1;
  for (const auto& [id, e] : graph.edges) {
    if (best < 0) {
      best = id;
      continue;
    }
    const GraphEdge& b = graph.edges.at(best);
    if (e.weight > b.weight ||
        (e.weight == b.weight && e.branch_label < b.branch_label)) {
      best = id;
    }
  }
  return best;
}

}  // namespace

void prune_graph(TreeGraph& graph, std::map<int, Branch>& branches, const DroneSpec& spec,
                 const TreeStats& stats, const PixelCalibration& cal) {
  bool changed = true;
  while (changed) {
    changed = false;
    const int keep = protected_edge_id(graph);

    std::vector<int> removal;
    for (const auto& [id, e] : graph.edges) {
      if (id == keep) continue;
      if (e.weight >= spec.prune_threshold) continue;
      if (graph.degree(e.node_front) == 1 || graph.degree(e.node_back) == 1) {
        removal.push_back(id);
      }
    }
    for (const int id : removal) {
      branches.erase(graph.edges.at(id).branch_label);
      graph.edges.erase(id);
      changed = true;
    }

    std::vector<int> orphans;
    for (const auto& [id, node] : graph.nodes) {
      if (graph.degree(id) == 0) orphans.push_back(id);
    }
    for (const int id : orphans) {
      graph.nodes.erase(id);
      changed = true;
    }

    const std::size_t nodes_before = graph.nodes.size();
    merge_degree2_nodes(graph, branches, stats, spec, cal);
    if (graph.nodes.size() != nodes_before) changed = true;
  }
}

}  // namespace pli

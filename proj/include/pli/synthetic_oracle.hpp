#pragma once

#include "pli/mask_io.hpp"
#include "pli/pipeline.hpp"
#include "pli/ranking.hpp"
#include "pli/tree_graph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pli {

/// Ground-truth stroke: a constant-width segment rendered with round caps.
struct TruthBranch {
  double r0 = 0.0, c0 = 0.0;  // centreline start (row, col)
  double r1 = 0.0, c1 = 0.0;  // centreline end
  double width_px = 0.0;
  double theta_deg = 0.0;     // unsigned angle to horizontal
  bool in_spec = false;       // satisfies every default viability threshold by margin
};

/// Procedurally generated tree mask with exact branch geometry. Deterministic
/// per seed, byte-identical masks included.
struct SyntheticTree {
  BinaryMask mask;
  std::vector<TruthBranch> branches;  // index 0 is the trunk
  int ideal_index = -1;               // index of the single in-spec branch, -1 if none
  std::uint64_t seed = 0;
  double mm_per_px = 0.0;             // calibration implied by the rendered bounding box
  int window_px = 0;
};

struct OracleOptions {
  int canvas = 768;
  bool all_out_of_spec = false;  // every branch violates a threshold by margin
  double assumed_tree_height_m = 8.0;
};

/// Vertical out-of-spec trunk with 3-7 children at randomised angles and
/// widths; exactly one child is forced in-spec (>= 20% inside every
/// threshold) unless all_out_of_spec is set, in which case every child
/// violates at least one threshold by >= 20%.
SyntheticTree generate_tree(std::uint64_t seed, const DroneSpec& spec,
                            const OracleOptions& options = {});

struct TreeEvaluation {
  std::uint64_t seed = 0;
  PerchStatus status = PerchStatus::kNoViableBranch;
  bool has_ideal = false;
  bool success = false;            // found within one window length of the ideal centreline
  bool correct_rejection = false;  // no viable branch reported on an all-out-of-spec tree
  double dist_to_ideal_px = -1.0;
  Pixel midpoint_px;
  int window_px = 0;
};

TreeEvaluation evaluate_tree(const SyntheticTree& tree, const DroneSpec& spec,
                             const OracleOptions& options = {});

struct CorpusResult {
  int n_trees = 0;
  int successes = 0;
  int correct_rejections = 0;  // reported separately, not part of the rate
  double success_rate = 0.0;
  std::vector<TreeEvaluation> rows;
};

/// Runs the full pipeline over n seeded trees and compares each selection to
/// the generator truth. success_rate counts trees with an ideal branch only.
CorpusResult evaluate_corpus(int n_trees, const DroneSpec& spec, const OracleOptions& options = {},
                             std::uint64_t seed_base = 0);

/// Distance from a point to a segment, in pixels.
double point_segment_distance(double pr, double pc, const TruthBranch& branch);

/// Corpus files: <dir>/tree_NNNNN.png plus <dir>/tree_NNNNN.json truth.
void write_tree(const std::string& dir, int index, const SyntheticTree& tree);
SyntheticTree read_tree(const std::string& mask_path, const std::string& truth_path);

std::string evaluation_csv(const CorpusResult& result);

}  // namespace pli

#include "pli/branch_extraction.hpp"

#include "pli/error.hpp"

#include <algorithm>
#include <map>

namespace pli {

std::vector<std::vector<Pixel>> section_branches(const Skeleton& skeleton,
                                                 const std::vector<Pixel>& intersections) {
  MaskImage residual = skeleton.mask;
  for (const Pixel p : intersections) {
    if (!in_bounds(residual, p) || residual(p.row, p.col) == 0) {
      fail("intersection pixel not on skeleton");
    }
    residual(p.row, p.col) = 0;
  }
  if (foreground_count(residual) == 0) fail("degenerate tree: no branch pixels remain");

  const Components comps = label_components(residual, /*eight_connected=*/true);
  std::vector<std::vector<Pixel>> branches(comps.count);
  for (Eigen::Index r = 0; r < residual.rows(); ++r) {
    for (Eigen::Index c = 0; c < residual.cols(); ++c) {
      const int label = comps.labels(r, c);
      if (label > 0) branches[label - 1].push_back({static_cast<int>(r), static_cast<int>(c)});
    }
  }
  return branches;
}

namespace {

// Index into kNeighbours8 (clockwise from north) of the offset b - a.
int direction_index(Pixel from, Pixel to) {
  const Pixel d = to - from;
  for (std::size_t i = 0; i < kNeighbours8.size(); ++i) {
    if (kNeighbours8[i] == d) return static_cast<int>(i);
  }
  fail("pixels are not 8-adjacent");
}

}  // namespace

std::vector<Pixel> order_branch_pixels(const std::vector<Pixel>& unordered) {
  if (unordered.empty()) fail("empty branch pixel set");
  if (unordered.size() == 1) return unordered;

  std::map<Pixel, int> degree;
  for (const Pixel p : unordered) degree[p] = 0;
  for (const Pixel p : unordered) {
    for (const Pixel d : kNeighbours8) {
      const auto it = degree.find(p + d);
      if (it != degree.end()) ++degree[p];
    }
  }
  for (const auto& [p, deg] : degree) {
    if (deg >= 3) fail("unsectioned branch: junction pixel present");
    if (deg == 0) fail("disconnected branch pixel set");
  }

  // Open curve: start at the lexicographically smaller endpoint. Closed loop:
  // start at the topmost-leftmost pixel and head clockwise (east first).
  Pixel start{};
  bool have_endpoint = false;
  for (const auto& [p, deg] : degree) {
    if (deg == 1) {
      start = p;
      have_endpoint = true;
      break;  // map iteration is ordered, first hit is the smallest
    }
  }
  if (!have_endpoint) start = degree.begin()->first;

  const auto contains = [&degree](Pixel p) { return degree.count(p) != 0; };

  std::vector<Pixel> ordered;
  ordered.reserve(unordered.size());
  std::map<Pixel, bool> visited;
  const auto emit = [&](Pixel p) {
    if (!visited[p]) {
      visited[p] = true;
      ordered.push_back(p);
    }
  };

  emit(start);
  // First step: for an endpoint there is a single neighbour; for a loop start,
  // scan clockwise from north (the topmost-leftmost pixel has no neighbours
  // above or to its west, so the first hit heads east or downward).
  Pixel current = start;
  Pixel previous = start;
  {
    int first = -1;
    for (std::size_t i = 0; i < kNeighbours8.size(); ++i) {
      if (contains(start + kNeighbours8[i])) {
        first = static_cast<int>(i);
        break;
      }
    }
    current = start + kNeighbours8[first];
    emit(current);
  }

  const std::size_t step_budget = 4 * unordered.size() + 8;
  std::size_t steps = 0;
  while (current != start) {
    if (++steps > step_budget) fail("branch tracing failed to terminate");
    const int back = direction_index(current, previous);
    Pixel next = current;  // placeholder
    for (int k = 1; k <= 8; ++k) {
      const Pixel cand = current + kNeighbours8[(back + k) % 8];
      if (contains(cand)) {
        next = cand;
        break;
      }
    }
    previous = current;
    current = next;
    emit(current);
  }

  if (ordered.size() != unordered.size()) fail("branch tracing missed pixels");
  return ordered;
}

void attach_widths(Branch& branch, const Skeleton& skeleton) {
  branch.widths_px.resize(branch.pixels.size());
  for (std::size_t i = 0; i < branch.pixels.size(); ++i) {
    const Pixel p = branch.pixels[i];
    if (!in_bounds(skeleton.mask, p) || skeleton.mask(p.row, p.col) == 0) {
      fail("branch pixel missing from skeleton");
    }
    const double d = skeleton.distance_at(p);
    if (!(d > 0.0)) fail("missing distance entry at branch pixel");
    branch.widths_px[i] = 2.0 * d;
  }
}

std::vector<Branch> extract_branches(const Skeleton& skeleton,
                                     const std::vector<Pixel>& intersections) {
  const auto sets = section_branches(skeleton, intersections);
  std::vector<Branch> branches;
  branches.reserve(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    Branch b;
    b.label = static_cast<int>(i) + 1;
    b.pixels = order_branch_pixels(sets[i]);
    attach_widths(b, skeleton);
    branches.push_back(std::move(b));
  }
  return branches;
}

}  // namespace pli

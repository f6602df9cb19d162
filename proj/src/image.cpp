#include "pli/image.hpp"

namespace pli {

std::vector<Pixel> foreground_pixels(const MaskImage& mask) {
  std::vector<Pixel> out;
  for (Eigen::Index r = 0; r < mask.rows(); ++r) {
    for (Eigen::Index c = 0; c < mask.cols(); ++c) {
      if (mask(r, c) != 0) out.push_back({static_cast<int>(r), static_cast<int>(c)});
    }
  }
  return out;
}

long foreground_count(const MaskImage& mask) {
  return static_cast<long>((mask != 0).count());
}

Components label_components(const MaskImage& mask, bool eight_connected) {
  Components comps;
  comps.labels = Image<int>::Zero(mask.rows(), mask.cols());
  std::vector<Pixel> queue;
  for (Eigen::Index r = 0; r < mask.rows(); ++r) {
    for (Eigen::Index c = 0; c < mask.cols(); ++c) {
      if (mask(r, c) == 0 || comps.labels(r, c) != 0) continue;
      const int label = ++comps.count;
      long size = 0;
      Pixel bbox{static_cast<int>(r), static_cast<int>(c)};
      queue.clear();
      queue.push_back({static_cast<int>(r), static_cast<int>(c)});
      comps.labels(r, c) = label;
      while (!queue.empty()) {
        const Pixel p = queue.back();
        queue.pop_back();
        ++size;
        bbox.row = std::min(bbox.row, p.row);
        bbox.col = std::min(bbox.col, p.col);
        const auto visit = [&](Pixel n) {
          if (!in_bounds(mask, n) || mask(n.row, n.col) == 0) return;
          if (comps.labels(n.row, n.col) != 0) return;
          comps.labels(n.row, n.col) = label;
          queue.push_back(n);
        };
        if (eight_connected) {
          for (const Pixel d : kNeighbours8) visit(p + d);
        } else {
          for (const Pixel d : kNeighbours4) visit(p + d);
        }
      }
      comps.sizes.push_back(size);
      comps.bbox_min.push_back(bbox);
    }
  }
  // Shift per-label vectors so they are indexed by label value.
  comps.sizes.insert(comps.sizes.begin(), 0);
  comps.bbox_min.insert(comps.bbox_min.begin(), Pixel{});
  return comps;
}

}  // namespace pli

#include "pli/morphology.hpp"

#include "pli/error.hpp"
#include "pli/image_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>

namespace pli {

Image<std::int64_t> squared_distance_transform(const MaskImage& mask) {
  const int h = static_cast<int>(mask.rows());
  const int w = static_cast<int>(mask.cols());
  // Vertical pass: distance in rows to the nearest background pixel within the
  // column; virtual background sits just above row 0 and just below row h-1.
  Image<std::int32_t> vert(h, w);
  for (int c = 0; c < w; ++c) {
    std::int32_t dist = 1;
    for (int r = 0; r < h; ++r) {
      if (mask(r, c) == 0) {
        vert(r, c) = 0;
        dist = 1;
      } else {
        vert(r, c) = dist++;
      }
    }
    dist = 1;
    for (int r = h - 1; r >= 0; --r) {
      if (mask(r, c) == 0) {
        dist = 1;
      } else {
        vert(r, c) = std::min(vert(r, c), dist++);
      }
    }
  }

  // Horizontal pass: lower envelope of parabolas (Felzenszwalb-Huttenlocher),
  // with zero-valued virtual sites at columns -1 and w for the border.
  Image<std::int64_t> out(h, w);
  std::vector<int> v(w + 3);
  std::vector<double> z(w + 4);
  std::vector<std::int64_t> f(w + 2);
  for (int r = 0; r < h; ++r) {
    f[0] = 0;  // virtual site at column -1
    for (int c = 0; c < w; ++c) {
      const std::int64_t g = vert(r, c);
      f[c + 1] = g * g;
    }
    f[w + 1] = 0;  // virtual site at column w
    const auto site = [](int idx) { return idx - 1; };  // f index -> column
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < w + 2; ++q) {
      const double fq = static_cast<double>(f[q]);
      const double cq = static_cast<double>(site(q));
      while (true) {
        const double cp = static_cast<double>(site(v[k]));
        const double s = (fq + cq * cq - (static_cast<double>(f[v[k]]) + cp * cp)) / (2.0 * cq - 2.0 * cp);
        if (s <= z[k]) {
          --k;
        } else {
          ++k;
          v[k] = q;
          z[k] = s;
          z[k + 1] = std::numeric_limits<double>::infinity();
          break;
        }
      }
    }
    k = 0;
    for (int c = 0; c < w; ++c) {
      while (z[k + 1] < static_cast<double>(c)) ++k;
      const std::int64_t dc = c - site(v[k]);
      out(r, c) = dc * dc + f[v[k]];
    }
  }
  return out;
}

Image<double> distance_transform(const MaskImage& mask) {
  const Image<std::int64_t> sq = squared_distance_transform(mask);
  return sq.cast<double>().sqrt();
}

namespace {

// Neighbourhood bit code: bit i set when kNeighbours8[i] is foreground.
int neighbourhood_code(const MaskImage& img, Pixel p) {
  int code = 0;
  for (std::size_t i = 0; i < kNeighbours8.size(); ++i) {
    const Pixel n = p + kNeighbours8[i];
    if (in_bounds(img, n) && img(n.row, n.col) != 0) code |= 1 << i;
  }
  return code;
}

// A pixel is simple when removing it preserves both foreground 8-connectivity
// and background 4-connectivity in its 3x3 neighbourhood.
std::array<bool, 256> build_simple_point_table() {
  std::array<bool, 256> table{};
  for (int code = 0; code < 256; ++code) {
    // Foreground components under 8-adjacency between ring cells.
    std::array<int, 8> comp{};
    comp.fill(-1);
    int fg_components = 0;
    for (int i = 0; i < 8; ++i) {
      if (!(code & (1 << i)) || comp[i] >= 0) continue;
      const int id = fg_components++;
      std::vector<int> stack{i};
      comp[i] = id;
      while (!stack.empty()) {
        const int a = stack.back();
        stack.pop_back();
        for (int b = 0; b < 8; ++b) {
          if (!(code & (1 << b)) || comp[b] >= 0) continue;
          if (chebyshev(kNeighbours8[a], kNeighbours8[b]) <= 1) {
            comp[b] = id;
            stack.push_back(b);
          }
        }
      }
    }
    // Background components under 4-adjacency, counted only when they touch a
    // 4-neighbour of the centre (ring indices 0, 2, 4, 6).
    std::array<int, 8> bcomp{};
    bcomp.fill(-1);
    int bg_components = 0;
    for (int i = 0; i < 8; ++i) {
      if ((code & (1 << i)) || bcomp[i] >= 0) continue;
      const int id = bg_components;
      bool touches_orthogonal = false;
      std::vector<int> stack{i};
      bcomp[i] = id;
      while (!stack.empty()) {
        const int a = stack.back();
        stack.pop_back();
        if (a % 2 == 0) touches_orthogonal = true;
        for (int b = 0; b < 8; ++b) {
          if ((code & (1 << b)) || bcomp[b] >= 0) continue;
          if (manhattan(kNeighbours8[a], kNeighbours8[b]) == 1) {
            bcomp[b] = id;
            stack.push_back(b);
          }
        }
      }
      if (touches_orthogonal) ++bg_components;
    }
    table[code] = fg_components == 1 && bg_components == 1;
  }
  return table;
}

const std::array<bool, 256>& simple_point_table() {
  static const std::array<bool, 256> table = build_simple_point_table();
  return table;
}

bool removable(const MaskImage& img, Pixel p) {
  const int code = neighbourhood_code(img, p);
  return std::popcount(static_cast<unsigned>(code)) >= 2 && simple_point_table()[code];
}

}  // namespace

MaskImage thin(const MaskImage& mask) {
  MaskImage img = mask;
  const int h = static_cast<int>(img.rows());
  const int w = static_cast<int>(img.cols());
  const std::array<Pixel, 4> directions{{{-1, 0}, {1, 0}, {0, 1}, {0, -1}}};  // N, S, E, W
  std::vector<Pixel> border;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Pixel dir : directions) {
      border.clear();
      for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
          if (img(r, c) == 0) continue;
          const Pixel n{r + dir.row, c + dir.col};
          if (!in_bounds(img, n) || img(n.row, n.col) == 0) border.push_back({r, c});
        }
      }
      for (const Pixel p : border) {
        if (removable(img, p)) {
          img(p.row, p.col) = 0;
          changed = true;
        }
      }
    }
    // Pixels whose only background contact is diagonal never sit on a
    // directional border; dissolve them here (thick corners, 2x2 blocks).
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        if (img(r, c) == 0) continue;
        bool orthogonal_bg = false;
        for (const Pixel d : kNeighbours4) {
          const Pixel n = Pixel{r, c} + d;
          if (!in_bounds(img, n) || img(n.row, n.col) == 0) {
            orthogonal_bg = true;
            break;
          }
        }
        if (!orthogonal_bg && removable(img, {r, c})) {
          img(r, c) = 0;
          changed = true;
        }
      }
    }
  }
  return img;
}

Skeleton medial_axis_transform(const BinaryMask& mask) {
  if (mask.foreground() == 0) fail("empty mask");
  Skeleton skel;
  skel.distance = distance_transform(mask.data);
  skel.mask = thin(mask.data);
  return skel;
}

PixelClass classify(int neighbour_count) {
  PixelClass pc;
  pc.neighbour_count = neighbour_count;
  if (neighbour_count <= 1) {
    pc.kind = PixelKind::kEndPoint;
  } else if (neighbour_count == 2) {
    pc.kind = PixelKind::kBodyPoint;
  } else if (neighbour_count == 3) {
    pc.kind = PixelKind::kTJunction;
  } else {
    pc.kind = PixelKind::kBlock;
  }
  return pc;
}

Image<std::uint8_t> neighbour_counts(const MaskImage& skeleton) {
  Image<std::uint8_t> counts = Image<std::uint8_t>::Zero(skeleton.rows(), skeleton.cols());
  for (Eigen::Index r = 0; r < skeleton.rows(); ++r) {
    for (Eigen::Index c = 0; c < skeleton.cols(); ++c) {
      if (skeleton(r, c) == 0) continue;
      int n = 0;
      for (const Pixel d : kNeighbours8) {
        const Pixel q = Pixel{static_cast<int>(r), static_cast<int>(c)} + d;
        if (in_bounds(skeleton, q) && skeleton(q.row, q.col) != 0) ++n;
      }
      counts(r, c) = static_cast<std::uint8_t>(n);
    }
  }
  return counts;
}

SkeletonClasses classify_pixels(const Skeleton& skeleton) {
  if (foreground_count(skeleton.mask) == 0) fail("empty skeleton");
  SkeletonClasses out;
  out.counts = neighbour_counts(skeleton.mask);
  for (Eigen::Index r = 0; r < skeleton.mask.rows(); ++r) {
    for (Eigen::Index c = 0; c < skeleton.mask.cols(); ++c) {
      if (skeleton.mask(r, c) == 0) continue;
      const int n = out.counts(r, c);
      const Pixel p{static_cast<int>(r), static_cast<int>(c)};
      if (n <= 1) out.endpoints.push_back(p);
      if (n >= 3) out.intersections.push_back(p);
    }
  }
  return out;
}

void write_distance_debug_pgm(const std::string& path, const Skeleton& skeleton) {
  Image<std::uint16_t> img(skeleton.rows(), skeleton.cols());
  for (int r = 0; r < skeleton.rows(); ++r) {
    for (int c = 0; c < skeleton.cols(); ++c) {
      if (skeleton.mask(r, c) == 0) {
        img(r, c) = 0;
        continue;
      }
      const double v = skeleton.distance(r, c) * 100.0;
      img(r, c) = static_cast<std::uint16_t>(std::min(v, 65535.0));
    }
  }
  write_pgm16(path, img);
}

}  // namespace pli

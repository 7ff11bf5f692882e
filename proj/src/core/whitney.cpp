#include "core/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "core/error.hpp"

namespace wnil {

namespace {

struct MaskView {
  const GridFunction* g = nullptr;
  int dim = 1;
  int nx = 0, ny = 1;
  std::vector<Point> complement;   // centers of unmarked cells

  bool marked(int ix, int iy) const {
    return (*g)[static_cast<std::size_t>(iy) * nx + ix] != 0.0;
  }
  Point center(int ix, int iy) const {
    return g->center(static_cast<std::size_t>(iy) * nx + ix);
  }
  double dist_to_complement(const Point& x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& z : complement) best = std::min(best, distance(x, z, dim));
    return best;
  }
};

MaskView make_view(const GridFunction& mask) {
  MaskView v;
  v.g = &mask;
  v.dim = mask.dim();
  v.nx = static_cast<int>(mask.nx(0));
  v.ny = v.dim == 2 ? static_cast<int>(mask.nx(1)) : 1;
  bool any = false;
  for (int iy = 0; iy < v.ny; ++iy)
    for (int ix = 0; ix < v.nx; ++ix) {
      if (!v.marked(ix, iy)) {
        v.complement.push_back(v.center(ix, iy));
        continue;
      }
      any = true;
      const bool edge_x = ix < 2 || ix >= v.nx - 2;
      const bool edge_y = v.dim == 2 && (iy < 2 || iy >= v.ny - 2);
      require(!edge_x && !edge_y, ErrorCode::NotProper,
              "set reaches the outer two cell layers; enlarge the grid");
    }
  require(any, ErrorCode::EmptySet, "mask marks no cells");
  return v;
}

}  // namespace

WhitneyCover whitney_decompose(const GridFunction& mask) {
  MaskView v = make_view(mask);
  const double h = mask.spacing();
  const double root_n = v.dim == 2 ? std::sqrt(2.0) : 1.0;

  int k_max = 0;
  while ((2 << k_max) <= std::min(v.nx, v.ny == 1 ? v.nx : v.ny)) ++k_max;

  // level[cell] = log2 side of the coarsest admissible dyadic block holding
  // the cell; admissible blocks sit fully inside the grid, contain only
  // marked cells, and keep twice their diameter below the distance to the
  // complement. Coarsest-first assignment makes the chosen blocks disjoint.
  std::vector<int> level(mask.size(), -1);
  for (int k = k_max; k >= 1; --k) {
    const int side = 1 << k;
    for (int by = 0; by < (v.dim == 2 ? v.ny / side : 1); ++by)
      for (int bx = 0; bx < v.nx / side; ++bx) {
        bool all_marked = true;
        for (int iy = by * side; all_marked && iy < (v.dim == 2 ? (by + 1) * side : 1); ++iy)
          for (int ix = bx * side; ix < (bx + 1) * side; ++ix)
            if (!v.marked(ix, iy) ||
                level[static_cast<std::size_t>(iy) * v.nx + ix] >= 0) {
              all_marked = false;
              break;
            }
        if (!all_marked) continue;
        Point c = {mask.box().lo[0] + (bx * side + side * 0.5) * h, 0.0};
        if (v.dim == 2) c[1] = mask.box().lo[1] + (by * side + side * 0.5) * h;
        const double d = v.dist_to_complement(c);
        if (2.0 * side * h * root_n > d) continue;
        for (int iy = by * side; iy < (v.dim == 2 ? (by + 1) * side : 1); ++iy)
          for (int ix = bx * side; ix < (bx + 1) * side; ++ix)
            level[static_cast<std::size_t>(iy) * v.nx + ix] = k;
      }
  }

  WhitneyCover cover;
  std::vector<char> emitted(mask.size(), 0);
  for (int iy = 0; iy < v.ny; ++iy)
    for (int ix = 0; ix < v.nx; ++ix) {
      const std::size_t idx = static_cast<std::size_t>(iy) * v.nx + ix;
      if (!v.marked(ix, iy)) continue;
      const int k = level[idx];
      if (k < 0) {
        const Point c = v.center(ix, iy);
        cover.balls.push_back({c, v.dist_to_complement(c) / 3.5});
        continue;
      }
      const int side = 1 << k;
      const int bx = ix / side, by = iy / side;
      const std::size_t anchor =
          static_cast<std::size_t>(by * side) * v.nx + static_cast<std::size_t>(bx) * side;
      if (emitted[anchor]) continue;
      emitted[anchor] = 1;
      Point c = {mask.box().lo[0] + (bx * side + side * 0.5) * h, 0.0};
      if (v.dim == 2) c[1] = mask.box().lo[1] + (by * side + side * 0.5) * h;
      cover.balls.push_back({c, v.dist_to_complement(c) / 3.5});
    }
  return cover;
}

CoverCheck verify_cover(const WhitneyCover& cover, const GridFunction& mask) {
  MaskView v = make_view(mask);
  require(!cover.balls.empty(), ErrorCode::EmptySet, "cover holds no balls");

  CoverCheck check;
  check.covers = true;
  check.quarter_disjoint = true;
  check.scaled_inside = true;
  check.touches_complement = true;

  for (int iy = 0; iy < v.ny; ++iy)
    for (int ix = 0; ix < v.nx; ++ix) {
      const Point c = v.center(ix, iy);
      int hits = 0;
      int doubled = 0;
      int quarters = 0;
      for (const Ball& b : cover.balls) {
        if (b.contains(c, v.dim)) ++hits;
        if (b.scaled(2.0).contains(c, v.dim)) ++doubled;
        if (b.scaled(0.25).contains(c, v.dim)) ++quarters;
      }
      check.max_overlap = std::max(check.max_overlap, doubled);
      if (quarters > 1) check.quarter_disjoint = false;
      if (v.marked(ix, iy) && hits == 0) check.covers = false;
    }

  for (const Ball& b : cover.balls) {
    const Ball twice = b.scaled(2.0);
    const Ball quad = b.scaled(4.0);
    bool reached = false;
    for (int iy = 0; iy < v.ny; ++iy)
      for (int ix = 0; ix < v.nx; ++ix) {
        const Point c = v.center(ix, iy);
        if (!v.marked(ix, iy)) {
          if (twice.contains(c, v.dim)) check.scaled_inside = false;
          if (quad.contains(c, v.dim)) reached = true;
        }
      }
    if (!reached) check.touches_complement = false;
  }
  return check;
}

void save_cover_csv(const WhitneyCover& cover, int dim, const std::string& path) {
  require(dim == 1 || dim == 2, ErrorCode::InvalidArgument, "dim must be 1 or 2");
  std::FILE* out = std::fopen(path.c_str(), "w");
  require(out != nullptr, ErrorCode::IOFailure, "cannot open " + path);
  std::fprintf(out, dim == 1 ? "center_x,radius\n" : "center_x,center_y,radius\n");
  for (const Ball& b : cover.balls) {
    if (dim == 1)
      std::fprintf(out, "%.17g,%.17g\n", b.center[0], b.radius);
    else
      std::fprintf(out, "%.17g,%.17g,%.17g\n", b.center[0], b.center[1], b.radius);
  }
  std::fclose(out);
}

}  // namespace wnil

#include "core/corpus.hpp"

#include <cmath>
#include <random>

#include "core/error.hpp"

namespace wnil {

namespace {

using Rng = std::mt19937_64;

GridFunction gaussian_bumps(const Box& box, double h, Rng& rng) {
  std::uniform_int_distribution<int> count_dist(1, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int dim = box.dim;
  const int bumps = count_dist(rng);
  struct BumpParams {
    Point c;
    double width, amp;
  };
  std::vector<BumpParams> params;
  for (int b = 0; b < bumps; ++b) {
    BumpParams p;
    for (int a = 0; a < dim; ++a)
      p.c[a] = box.lo[a] + (0.15 + 0.7 * unit(rng)) * box.width(a);
    p.width = (0.03 + 0.12 * unit(rng)) * box.diameter();
    p.amp = (unit(rng) < 0.25 ? -1.0 : 1.0) * (0.5 + 1.5 * unit(rng));
    params.push_back(p);
  }
  return GridFunction::sample(box, h, [&](const Point& x) {
    double v = 0.0;
    for (const BumpParams& p : params) {
      const double d = distance(x, p.c, dim);
      v += p.amp * std::exp(-0.5 * d * d / (p.width * p.width));
    }
    return v;
  });
}

GridFunction box_indicator(const Box& box, double h, Rng& rng, bool unit_box) {
  const int dim = box.dim;
  Point lo{0.0, 0.0}, hi{1.0, 1.0};
  if (!unit_box) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int a = 0; a < dim; ++a) {
      const double start = box.lo[a] + (0.1 + 0.5 * unit(rng)) * box.width(a);
      const double len = (0.05 + 0.3 * unit(rng)) * box.width(a);
      lo[a] = start;
      hi[a] = start + len;
    }
  }
  return GridFunction::sample(box, h, [&](const Point& x) {
    for (int a = 0; a < dim; ++a)
      if (x[a] < lo[a] || x[a] >= hi[a]) return 0.0;
    return 1.0;
  });
}

GridFunction wave_sum(const Box& box, double h, Rng& rng) {
  std::uniform_int_distribution<int> count_dist(1, 3);
  std::uniform_int_distribution<int> freq(1, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int dim = box.dim;
  struct Wave {
    double kx, ky, phase, amp;
  };
  std::vector<Wave> waves;
  const int terms = count_dist(rng);
  for (int w = 0; w < terms; ++w) {
    Wave wv;
    wv.kx = 2.0 * 3.14159265358979323846 * freq(rng) / box.width(0);
    wv.ky = dim == 2 ? 2.0 * 3.14159265358979323846 * freq(rng) / box.width(1) : 0.0;
    wv.phase = 2.0 * 3.14159265358979323846 * unit(rng);
    wv.amp = 0.3 + unit(rng);
    waves.push_back(wv);
  }
  // Gaussian envelope keeps mass finite and concentrated.
  Point mid{0.5 * (box.lo[0] + box.hi[0]), dim == 2 ? 0.5 * (box.lo[1] + box.hi[1]) : 0.0};
  const double spread = 0.25 * box.diameter();
  return GridFunction::sample(box, h, [&](const Point& x) {
    double v = 0.0;
    for (const Wave& wv : waves)
      v += wv.amp * std::cos(wv.kx * (x[0] - mid[0]) +
                             (dim == 2 ? wv.ky * (x[1] - mid[1]) : 0.0) + wv.phase);
    const double d = distance(x, mid, dim);
    return v * std::exp(-0.5 * d * d / (spread * spread));
  });
}

GridFunction odd_profile(const Box& box, double h) {
  // x exp(-x^2/2) about the box center, odd in the first coordinate
  const int dim = box.dim;
  Point mid{0.5 * (box.lo[0] + box.hi[0]), dim == 2 ? 0.5 * (box.lo[1] + box.hi[1]) : 0.0};
  const double scale = 0.15 * box.diameter();
  return GridFunction::sample(box, h, [&](const Point& x) {
    const double u = (x[0] - mid[0]) / scale;
    double v = u * std::exp(-0.5 * u * u);
    if (dim == 2) {
      const double w = (x[1] - mid[1]) / scale;
      v *= std::exp(-0.5 * w * w);
    }
    return v;
  });
}

}  // namespace

std::vector<GridFunction> make_corpus(const Box& box, double h, const CorpusSpec& spec) {
  require(spec.count > 0, ErrorCode::InvalidArgument, "corpus count must be positive");
  require(spec.kind == "bumps" || spec.kind == "indicators" || spec.kind == "bandlimited" ||
              spec.kind == "mixed",
          ErrorCode::InvalidArgument, "unknown corpus kind '" + spec.kind + "'");
  Rng rng(spec.seed);
  std::vector<GridFunction> out;
  out.reserve(spec.count);
  for (int i = 0; i < spec.count; ++i) {
    if (spec.kind == "bumps") {
      out.push_back(gaussian_bumps(box, h, rng));
    } else if (spec.kind == "indicators") {
      out.push_back(box_indicator(box, h, rng, i == 0));
    } else if (spec.kind == "bandlimited") {
      out.push_back(wave_sum(box, h, rng));
    } else {
      if (i == 0) {
        out.push_back(odd_profile(box, h));
      } else if (i % 3 == 1) {
        out.push_back(gaussian_bumps(box, h, rng));
      } else if (i % 3 == 2) {
        out.push_back(box_indicator(box, h, rng, i == 2));
      } else {
        out.push_back(wave_sum(box, h, rng));
      }
    }
  }
  return out;
}

}  // namespace wnil

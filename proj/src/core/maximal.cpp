#include "core/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace wnil {
namespace {

GridFunction maximal_impl(const GridFunction& f, double gamma, const BallFamily& family,
                          std::vector<std::size_t>* witness) {
  require(f.box().dim == family.domain.dim && f.spacing() == family.h &&
              f.box().lo == family.domain.lo && f.box().hi == family.domain.hi,
          ErrorCode::GridMismatch, "maximal: function grid does not match the family domain");
  GridFunction out = GridFunction::zeros(f.box(), f.spacing());
  std::vector<double> best(f.size(), -1.0);
  if (witness) witness->assign(f.size(), 0);
  const double cell = f.cell_measure();
  for (std::size_t b = 0; b < family.balls.size(); ++b) {
    const CellSet cells = f.cells_in_ball(family.balls[b]);
    if (cells.empty()) continue;
    double sum = 0.0;
    for (std::size_t i : cells) sum += std::abs(f[i]);
    const double avg = sum / static_cast<double>(cells.size());
    const double measure = static_cast<double>(cells.size()) * cell;
    const double value = gamma == 0.0 ? avg : std::pow(measure, gamma) * avg;
    for (std::size_t i : cells)
      if (value > best[i]) {
        best[i] = value;
        if (witness) (*witness)[i] = b;
      }
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    require(best[i] >= 0.0, ErrorCode::UncoveredPoint,
            "maximal: a cell lies in no ball of the family");
    out[i] = best[i];
  }
  return out;
}

}  // namespace

GridFunction hl_maximal(const GridFunction& f, const BallFamily& family,
                        std::vector<std::size_t>* witness) {
  return maximal_impl(f, 0.0, family, witness);
}

GridFunction fractional_maximal(const GridFunction& f, double gamma, const BallFamily& family,
                                std::vector<std::size_t>* witness) {
  require(gamma >= 0.0 && gamma < 1.0, ErrorCode::InvalidArgument,
          "fractional_maximal: gamma must lie in [0, 1)");
  return maximal_impl(f, gamma, family, witness);
}

double level_set_measure(const GridFunction& g, double lambda) {
  return distribution_measure(g, lambda);
}

CellSet level_set(const GridFunction& g, double lambda) {
  CellSet out;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::abs(g[i]) > lambda) out.push_back(i);
  return out;
}

double weak_type_ratio(const GridFunction& g, double denom) {
  require(denom > 0.0, ErrorCode::InvalidArgument, "weak_type_ratio: denominator must be positive");
  std::vector<double> levels;
  levels.reserve(g.size());
  for (double v : g.values())
    if (std::abs(v) > 0.0) levels.push_back(std::abs(v));
  if (levels.empty()) return 0.0;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  // lambda |{|g| > lambda}| is maximized as lambda approaches a jump level
  // from below, where the set is {|g| >= level}.
  const double cell = g.cell_measure();
  double best = 0.0;
  std::size_t count_ge = 0;
  std::vector<double> sorted(g.values());
  for (double& v : sorted) v = std::abs(v);
  std::sort(sorted.begin(), sorted.end());
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    const double level = *it;
    count_ge = sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), level);
    best = std::max(best, level * static_cast<double>(count_ge) * cell);
  }
  return best / denom;
}

double weak_11_constant(const std::vector<GridFunction>& corpus, const BallFamily& family) {
  require(!corpus.empty(), ErrorCode::InvalidArgument, "weak_11_constant: empty corpus");
  double worst = 0.0;
  for (const GridFunction& f : corpus) {
    double l1 = 0.0;
    for (double v : f.values()) l1 += std::abs(v);
    l1 *= f.cell_measure();
    if (l1 == 0.0) continue;
    worst = std::max(worst, weak_type_ratio(hl_maximal(f, family), l1));
  }
  return worst;
}

LocalizationReport localization_check(const GridFunction& f, const Ball& ball, double lambda,
                                      const BallFamily& family) {
  require(lambda > 0.0, ErrorCode::HypothesisFailed,
          "localization_check: lambda must be positive");
  const GridFunction mf = hl_maximal(f, family);
  bool hypothesis = false;
  for (std::size_t i : f.cells_in_ball(ball.scaled(4.0)))
    if (mf[i] <= lambda) {
      hypothesis = true;
      break;
    }
  require(hypothesis, ErrorCode::HypothesisFailed,
          "localization_check: no cell of 4B has M f <= lambda");

  GridFunction f8 = GridFunction::zeros(f.box(), f.spacing());
  for (std::size_t i : f.cells_in_ball(ball.scaled(8.0))) f8[i] = f[i];
  const GridFunction mf8 = hl_maximal(f8, family);
  const CellSet b_cells = f.cells_in_ball(ball);

  LocalizationReport report;
  report.lambda = lambda;
  for (int e = 0; e <= 10; ++e) report.k_grid.push_back(std::exp2(e));
  for (double k0 : report.k_grid) {
    bool ok = true;
    for (double k : report.k_grid) {
      if (k < k0) continue;
      for (std::size_t i : b_cells)
        if (mf[i] > k * lambda && mf8[i] <= (k / k0) * lambda) {
          ok = false;
          break;
        }
      if (!ok) break;
    }
    if (ok) {
      report.empirical_k0 = k0;
      report.found = true;
      break;
    }
  }
  return report;
}

}  // namespace wnil

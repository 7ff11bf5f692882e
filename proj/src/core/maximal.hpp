#pragma once

#include <vector>

#include "core/geometry.hpp"
#include "core/grid_function.hpp"

namespace wnil {

// Uncentered Hardy-Littlewood maximal function over the finite family:
// M f(x) = max over balls containing x of avg_B |f|. Every cell must lie in
// at least one ball (UncoveredPoint otherwise); the default family policy
// includes the singleton radius-h balls, which forces M f >= |f|.
// witness, when non-null, receives the index of the attaining ball per cell.
GridFunction hl_maximal(const GridFunction& f, const BallFamily& family,
                        std::vector<std::size_t>* witness = nullptr);

// M_gamma f(x) = max over balls containing x of |B|^gamma avg_B |f| with |B|
// the covered measure of the ball; gamma = 0 coincides with hl_maximal.
GridFunction fractional_maximal(const GridFunction& f, double gamma, const BallFamily& family,
                                std::vector<std::size_t>* witness = nullptr);

// Lebesgue measure of {|g| > lambda}.
double level_set_measure(const GridFunction& g, double lambda);
CellSet level_set(const GridFunction& g, double lambda);

// sup over lambda of lambda * |{|g| > lambda}| / denom, the sup realized
// exactly over the jump levels of the step distribution.
double weak_type_ratio(const GridFunction& g, double denom);

// max over the corpus of weak_type_ratio(M f, ||f||_1).
double weak_11_constant(const std::vector<GridFunction>& corpus, const BallFamily& family);

// Empirical localization constant: smallest K0 from the sweep such that for
// every K >= K0 in the K grid, {x in B : M f(x) > K lambda} is contained in
// {M(f 1_{8B}) > (K/K0) lambda}. Requires a cell x0 in 4B with
// M f(x0) <= lambda (HypothesisFailed otherwise).
struct LocalizationReport {
  double lambda = 0.0;
  double empirical_k0 = 0.0;
  bool found = false;
  std::vector<double> k_grid;
};
LocalizationReport localization_check(const GridFunction& f, const Ball& ball, double lambda,
                                      const BallFamily& family);

}  // namespace wnil

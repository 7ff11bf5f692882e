#pragma once

#include <vector>

#include "core/geometry.hpp"
#include "core/grid_function.hpp"
#include "core/weights.hpp"

namespace wnil {

// Level-comparison certificate search. For levels lambda in a sweep and a
// dilation beta > 1 the claim is
//   omega(|Tf| > beta lambda)
//     <= beta^{-(s-1)a/s} omega(|Tf| > lambda)
//        + omega(M_gamma(|f|^{p2}) > (kappa lambda)^{p2/p1}),
// with s = inf read as the exponent -a. The search reports the smallest beta
// in the candidate list for which some kappa makes the claim hold at every
// level, and whether every larger candidate also works with that kappa.
struct GoodLambdaParams {
  double p1 = 0.5;
  double p2 = 1.0;
  double gamma = 0.0;
  double a = 2.0;
  double s = 2.0;                 // may be infinity
  std::vector<double> lambdas;    // empty: dyadic sweep below max |Tf|
  std::vector<double> betas;      // empty: 2^1 .. 2^10
  std::vector<double> kappas;     // empty: 2^0 .. 2^-12
};

struct GoodLambdaPoint {
  double lambda = 0.0;
  double beta = 0.0;
  double kappa = 0.0;
  double lhs = 0.0;
  double decay = 0.0;
  double tail = 0.0;
  bool holds = false;
};

struct GoodLambdaTrace {
  std::vector<GoodLambdaPoint> points;   // full grid, for reporting
  bool found = false;
  double minimal_beta = 0.0;
  double kappa_at_minimal = 0.0;
  bool upward_closed = false;            // larger candidates keep working
};

GoodLambdaTrace good_lambda_trace(const GridFunction& tf, const GridFunction& f,
                                  const WeightSpec& omega, const BallFamily& family,
                                  const GoodLambdaParams& params);

}  // namespace wnil

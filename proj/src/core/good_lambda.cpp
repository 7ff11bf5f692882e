#include "core/good_lambda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"
#include "core/maximal.hpp"

namespace wnil {

namespace {

double weighted_excess(const GridFunction& g, const std::vector<double>& w, double level) {
  // omega-measure of the strict superlevel set of |g|
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::fabs(g[i]) > level) acc += w[i];
  return acc * g.cell_measure();
}

}  // namespace

GoodLambdaTrace good_lambda_trace(const GridFunction& tf, const GridFunction& f,
                                  const WeightSpec& omega, const BallFamily& family,
                                  const GoodLambdaParams& params) {
  require(params.p1 > 0.0 && params.p2 > 0.0, ErrorCode::InvalidArgument,
          "exponents must be positive");
  require(params.a > 1.0, ErrorCode::InvalidArgument, "dilation exponent must exceed 1");
  require(params.s > 1.0, ErrorCode::InvalidArgument, "reverse Holder index must exceed 1");

  std::vector<double> lambdas = params.lambdas;
  if (lambdas.empty()) {
    double top = 0.0;
    for (double v : tf.values()) top = std::max(top, std::fabs(v));
    for (int j = 1; j <= 12 && top > 0.0; ++j) lambdas.push_back(top / std::exp2(j));
  }
  require(!lambdas.empty(), ErrorCode::EmptySweep, "no positive levels to sweep");
  for (double l : lambdas)
    require(l > 0.0 && std::isfinite(l), ErrorCode::InvalidArgument, "levels must be positive");

  std::vector<double> betas = params.betas;
  if (betas.empty())
    for (int k = 1; k <= 10; ++k) betas.push_back(std::exp2(k));
  std::vector<double> kappas = params.kappas;
  if (kappas.empty())
    for (int k = 0; k <= 12; ++k) kappas.push_back(std::exp2(-k));
  std::sort(betas.begin(), betas.end());
  std::sort(kappas.rbegin(), kappas.rend());

  const double decay_exp =
      std::isinf(params.s) ? params.a : (params.s - 1.0) * params.a / params.s;

  const std::vector<double> w_out = omega.eval_on_grid(tf);
  const std::vector<double> w_src = omega.eval_on_grid(f);

  GridFunction powered = f;
  for (double& v : powered.values()) v = std::pow(std::fabs(v), params.p2);
  const GridFunction control = fractional_maximal(powered, params.gamma, family);

  GoodLambdaTrace trace;
  // tail measures depend on (kappa, lambda) only; lhs/decay on (beta, lambda)
  auto tail_of = [&](double kappa, double lambda) {
    const double threshold = std::pow(kappa * lambda, params.p2 / params.p1);
    return weighted_excess(control, w_src, threshold);
  };
  auto base_of = [&](double lambda) { return weighted_excess(tf, w_out, lambda); };

  std::vector<double> base(lambdas.size());
  for (std::size_t j = 0; j < lambdas.size(); ++j) base[j] = base_of(lambdas[j]);

  for (double beta : betas) {
    require(beta > 1.0, ErrorCode::InvalidArgument, "dilations must exceed 1");
    for (double kappa : kappas) {
      require(kappa > 0.0, ErrorCode::InvalidArgument, "thresholds must be positive");
      bool all_hold = true;
      for (std::size_t j = 0; j < lambdas.size(); ++j) {
        GoodLambdaPoint pt;
        pt.lambda = lambdas[j];
        pt.beta = beta;
        pt.kappa = kappa;
        pt.lhs = weighted_excess(tf, w_out, beta * pt.lambda);
        pt.decay = std::pow(beta, -decay_exp) * base[j];
        pt.tail = tail_of(kappa, pt.lambda);
        pt.holds = pt.lhs <= pt.decay + pt.tail + 1e-15 * (pt.decay + pt.tail);
        all_hold = all_hold && pt.holds;
        trace.points.push_back(pt);
      }
      if (all_hold && !trace.found) {
        trace.found = true;
        trace.minimal_beta = beta;
        trace.kappa_at_minimal = kappa;
      }
      if (all_hold) break;   // larger kappas first; keep the strongest witness
    }
  }

  if (trace.found) {
    trace.upward_closed = true;
    for (double beta : betas) {
      if (beta < trace.minimal_beta) continue;
      for (std::size_t j = 0; j < lambdas.size(); ++j) {
        const double lhs = weighted_excess(tf, w_out, beta * lambdas[j]);
        const double decay = std::pow(beta, -decay_exp) * base[j];
        const double tail = tail_of(trace.kappa_at_minimal, lambdas[j]);
        if (lhs > decay + tail + 1e-15 * (decay + tail)) {
          trace.upward_closed = false;
          break;
        }
      }
      if (!trace.upward_closed) break;
    }
  }
  return trace;
}

}  // namespace wnil

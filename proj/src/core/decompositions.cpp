#include "core/decompositions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"
#include "core/maximal.hpp"

namespace wnil {

GridFunction apply_operator(const OperatorSpec& op, const GridFunction& f) {
  switch (op.kind) {
    case OperatorKind::CZ:
      return cz_apply(op.kernel, f);
    case OperatorKind::LPg:
      return lp_g(f, op.profile);
    case OperatorKind::LPArea:
      return lusin_area(f, op.aperture, op.profile);
    case OperatorKind::Fractional:
      return fractional_integral(f, op.alpha);
  }
  fail(ErrorCode::InvalidArgument, "unknown operator kind");
}

Decomposition make_decomposition(const OperatorSpec& op, const GridFunction& f, const Ball& b) {
  require(b.radius > 0.0, ErrorCode::DegenerateBall, "ball radius must be positive");
  const Ball wide = b.scaled(8.0);
  GridFunction inner = f;
  GridFunction outer = f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (wide.contains(f.center(i), f.dim()))
      outer.values()[i] = 0.0;
    else
      inner.values()[i] = 0.0;
  }
  return {apply_operator(op, inner), apply_operator(op, outer)};
}

double sublinearity_gap(const OperatorSpec& op, const GridFunction& f, const Ball& b) {
  const GridFunction whole = apply_operator(op, f);
  const Decomposition parts = make_decomposition(op, f, b);
  double gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < whole.size(); ++i)
    gap = std::max(gap,
                   std::fabs(whole[i]) - std::fabs(parts.near[i]) - std::fabs(parts.far[i]));
  return gap;
}

FarFieldCheck far_field_control(const OperatorSpec& op, const GridFunction& f, const Ball& b,
                                const BallFamily& family, double p2, double gamma) {
  require(p2 > 0.0, ErrorCode::InvalidArgument, "exponent must be positive");
  const GridFunction far = make_decomposition(op, f, b).far;

  FarFieldCheck check;
  const CellSet on_ball = far.cells_in_ball(b);
  require(!on_ball.empty(), ErrorCode::EmptyBall, "ball misses the output grid");
  for (std::size_t i : on_ball) check.lhs = std::max(check.lhs, std::fabs(far[i]));

  GridFunction powered = f;
  for (double& v : powered.values()) v = std::pow(std::fabs(v), p2);
  const GridFunction controlled = fractional_maximal(powered, gamma, family);

  const CellSet probes = f.cells_in_ball(b.scaled(4.0));
  require(!probes.empty(), ErrorCode::EmptyBall, "dilated ball misses the source grid");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i : probes) best = std::min(best, controlled[i]);
  check.rhs = std::pow(best, 1.0 / p2);
  check.ratio = check.rhs > 0.0
                    ? check.lhs / check.rhs
                    : (check.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  return check;
}

}  // namespace wnil

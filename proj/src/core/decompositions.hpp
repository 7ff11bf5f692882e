#pragma once

#include <string>

#include "core/geometry.hpp"
#include "core/grid_function.hpp"
#include "core/operators.hpp"

namespace wnil {

// Uniform handle over the operators the splitting arguments run on.
enum class OperatorKind { CZ, LPg, LPArea, Fractional };

struct OperatorSpec {
  OperatorKind kind = OperatorKind::CZ;
  CZKernelSpec kernel;
  LPProfile profile;
  double aperture = 1.0;     // LPArea
  double alpha = 0.5;        // Fractional
};

GridFunction apply_operator(const OperatorSpec& op, const GridFunction& f);

// Near/far splitting around a ball: the near part sees f restricted to the
// 8-fold dilate, the far part sees the rest.
struct Decomposition {
  GridFunction near;
  GridFunction far;
};
Decomposition make_decomposition(const OperatorSpec& op, const GridFunction& f, const Ball& b);

// Largest positive excess of |T f| over |T near| + |T far| across cells;
// nonpositive up to rounding for every supported kind.
double sublinearity_gap(const OperatorSpec& op, const GridFunction& f, const Ball& b);

// Far-part size test on the ball: sup of |far| over b against the smallest
// value of the fractional maximal function of |f|^{p2} over the 4-fold
// dilate, raised to 1/p2. The ratio is the empirical comparison constant.
struct FarFieldCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};
FarFieldCheck far_field_control(const OperatorSpec& op, const GridFunction& f, const Ball& b,
                                const BallFamily& family, double p2, double gamma);

}  // namespace wnil

#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "core/geometry.hpp"
#include "core/grid_function.hpp"

namespace wnil {

// Exponent/scale bundle shared by the inequality experiments. p3 may be
// infinity; the local estimates use the sup form there.
struct SpaceParams {
  double q = 2.0;
  double t = 2.0;
  double theta = 1.0;
  double p1 = 0.5;
  double p2 = 1.0;
  double p3 = std::numeric_limits<double>::infinity();
  double gamma = 0.0;
  double alpha = 0.0;
  double s = 2.0;
  double a = 2.0;

  void validate(int n) const;
};

// Variable exponent p(.) sampled on a grid, with cached bounds
// 0 < p_minus <= p(x) <= p_plus < infinity.
class ExponentField {
 public:
  explicit ExponentField(GridFunction field);
  const GridFunction& field() const { return field_; }
  double p_minus() const { return p_minus_; }
  double p_plus() const { return p_plus_; }

 private:
  GridFunction field_;
  double p_minus_ = 0.0;
  double p_plus_ = 0.0;
};

// (sum |f|^p w h^n)^{1/p}; unweighted overloads use w = 1.
double lebesgue_norm(const GridFunction& f, double p);
double lebesgue_norm(const GridFunction& f, double p, const std::vector<double>& cell_weights);

// Lorentz norm from the exact step distribution function: between consecutive
// distinct |f| values the measure is constant, so the t-integral is a finite
// sum of closed-form power increments. t = infinity takes
// max over jump values v of v * (measure of {|f| >= v})^{1/q}.
double lorentz_norm(const GridFunction& f, double q, double t);
double lorentz_norm(const GridFunction& f, double q, double t,
                    const std::vector<double>& cell_weights);

// max over family balls of radius^{(theta - n)/q} * lorentz norm of f
// restricted to the ball. theta = n recovers the Lorentz norm up to the
// family's truncation; q = t is the Morrey scale.
double lorentz_morrey_norm(const GridFunction& f, double q, double t, double theta,
                           const BallFamily& family);
double lorentz_morrey_norm(const GridFunction& f, double q, double t, double theta,
                           const BallFamily& family, const std::vector<double>& cell_weights);

// sum |f(x)|^{p(x)} h^n; GridMismatch when layouts differ.
double variable_modular(const GridFunction& f, const ExponentField& p);

// Luxembourg-Nakano norm: inf lambda with variable_modular(f/lambda) <= 1,
// same bracketing/bisection contract as the Orlicz norm.
double variable_norm(const GridFunction& f, const ExponentField& p);

}  // namespace wnil

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "core/grid_function.hpp"
#include "core/young.hpp"

namespace wnil {

struct ConstantWeight {
  double c = 1.0;
};

// |x - center|^gamma; gamma > -dim keeps the weight locally integrable.
struct PowerWeight {
  double gamma = 0.0;
  Point center{0.0, 0.0};
  int dim = 1;
};

// min(|x - center|^exponent, cap_radius^exponent). For negative exponents the
// cap bounds the singularity, so no clamp is ever needed.
struct TruncatedPowerWeight {
  double exponent = 0.0;
  Point center{0.0, 0.0};
  double cap_radius = 1.0;
  int dim = 1;
};

struct TabulatedWeight {
  GridFunction table;
};

class WeightSpec {
 public:
  static WeightSpec constant(double c);
  static WeightSpec power(double gamma, const Point& center, int dim);
  static WeightSpec truncated_power(double exponent, const Point& center, double cap_radius,
                                    int dim);
  static WeightSpec tabulated(GridFunction table);

  // Pointwise value. clamp_h > 0 evaluates a negative-exponent power weight at
  // distance clamp_h/2 when x coincides with the singular center (distance
  // below clamp_h/4, which no other cell center of a clamp_h grid can reach).
  double eval(const Point& x, double clamp_h = 0.0) const;

  // Samples at every cell center of g's layout with clamp_h = g.spacing().
  std::vector<double> eval_on_grid(const GridFunction& g) const;

  int dim() const;
  std::string to_json() const;
  static WeightSpec from_json(const std::string& text);

 private:
  WeightSpec() = default;
  std::variant<ConstantWeight, PowerWeight, TruncatedPowerWeight, TabulatedWeight> spec_;
};

struct WeightSeriesEntry {
  std::size_t family_size = 0;
  double max_radius = 0.0;
  double constant = 0.0;
  Ball argmax;
};

// Discrete sup over a finite ball family, with the running sup per radius tier
// so divergence shows up as growth of the series.
struct WeightConstantReport {
  double value = 0.0;
  bool infinite = false;
  Ball argmax;
  int dim = 1;
  std::size_t family_size = 0;
  double max_radius = 0.0;
  std::vector<WeightSeriesEntry> series;

  void save_csv(const std::string& path) const;
};

// Muckenhoupt constant: sup_B (avg_B w)(avg_B w^{-1/(q-1)})^{q-1} for q > 1;
// q = 1 uses (avg_B w) * max over cell centers in B of 1/w.
WeightConstantReport ap_constant(const WeightSpec& w, double q, const BallFamily& family);

// Reverse Holder constant: sup_B (avg_B w^s)^{1/s} / avg_B w; s may be
// infinity (max/avg form). ZeroAverage when avg_B w = 0 on some ball.
WeightConstantReport rh_constant(const WeightSpec& w, double s, const BallFamily& family);

// Two-weight constant sup_B (avg_B w)(avg_B v^{1-p'})^{p-1}; cells where v
// vanishes blow the dual factor up (flagged infinite, not thrown).
WeightConstantReport two_weight_ap(const WeightSpec& w, const WeightSpec& v, double p,
                                   const BallFamily& family);

// Sawyer testing constant sup_B [(1/sigma(B)) int_B (M(sigma 1_B))^p w]^{1/p}
// with sigma = v^{1-p'}; cells where v = 0 carry no dual mass. The maximal
// operator is injected to keep this module independent of it. ZeroMass when
// sigma(B) = 0.
using MaximalOp = std::function<GridFunction(const GridFunction&, const BallFamily&)>;
WeightConstantReport sawyer_sp(const WeightSpec& w, const WeightSpec& v, double p,
                               const BallFamily& family, const MaximalOp& maximal);

// Orlicz bump constant sup_B (avg_B w) * ||v^{-inner}||_{Phi,B}^{outer}.
struct BumpExponents {
  double outer = 1.0;
  double inner = 1.0;
};
WeightConstantReport bump_constant(const WeightSpec& w, const WeightSpec& v, const YoungSpec& phi,
                                   const BumpExponents& exponents, const BallFamily& family);

// Whether |x|^gamma belongs to the A_s class on R^n: -n < gamma < n(s-1)
// (for s = infinity only the lower bound binds).
bool power_weight_in_class(double gamma, double s, int n);

// Three-stage refinement schedule on [-1, 1] used by the membership dichotomy
// tests: each stage divides h by 8 and doubles the radius cap, so a divergent
// constant grows per stage while a finite one saturates.
struct DichotomyStage {
  double h = 0.0;
  double radius_cap = 0.0;
  double constant = 0.0;
};
std::vector<DichotomyStage> dichotomy_series(const WeightSpec& w, double q);

}  // namespace wnil

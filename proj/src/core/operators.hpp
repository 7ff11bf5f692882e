#pragma once

#include <string>
#include <vector>

#include "core/grid_function.hpp"

namespace wnil {

// Singular convolution kernels: Hilbert 1/(x-y) in 1D and the planar Riesz
// kernels (x_j - y_j)/|x-y|^3. The kernel constant is configurable and
// defaults to 1; epsilon = 0 requests the default symmetric truncation h/2,
// which drops exactly the diagonal term on a shared cell-centered grid.
struct CZKernelSpec {
  enum class Kind { Hilbert1D, RieszJ };
  Kind kind = Kind::Hilbert1D;
  int j = 1;               // Riesz component, 1 or 2
  double constant = 1.0;
  double epsilon = 0.0;

  std::string to_json() const;
  static CZKernelSpec from_json(const std::string& text);
};

// Truncated principal value on f's own grid:
// T f(x) = sum over |x-y| >= eps of K(x, y) f(y) h^n.
GridFunction cz_apply(const CZKernelSpec& kernel, const GridFunction& f);

// I_alpha f(x) = c sum f(y) |x-y|^{alpha-n} h^n, the diagonal cell replaced by
// the exact cell integral of |.|^{alpha-n} (integrable singularity).
GridFunction fractional_integral(const GridFunction& f, double alpha, double constant = 1.0);

// Square function profile: Mexican hat (normalized Laplacian of a Gaussian,
// zero mean, unit L^2), dilation grid log-uniform on [t_min, t_max]
// (defaults h and 4 * diameter; dilations below the cell size are pure
// lattice aliasing), convolutions zero-padded to three times the box width.
struct LPProfile {
  int t_count = 48;
  double t_min = 0.0;   // 0 selects h
  double t_max = 0.0;   // 0 selects 4 * diameter
  double pad_factor = 3.0;
};

double mexican_hat(const Point& x, int dim);

// Holds the dilated convolutions once; the square functions are read off it.
class LPTransform {
 public:
  LPTransform(const GridFunction& f, const LPProfile& profile, bool tabulated = true);

  const GridFunction& layout() const { return layout_; }
  const std::vector<double>& t_grid() const { return t_grid_; }
  const std::vector<double>& t_weights() const { return t_weights_; }
  const std::vector<std::vector<double>>& convolutions() const { return conv_; }

  // g(f)(x) = (sum_m w_m |phi_tm * f(x)|^2)^{1/2}.
  GridFunction g() const;
  // Cone square function over |y - x| < aperture * t.
  GridFunction area(double aperture) const;
  // Smoothed cone: indicator replaced by a C^2 bump that is 1 inside the unit
  // cone and 0 outside twice the aperture, so area(a) <= area_smooth(a)
  // <= area(2a) cell by cell.
  GridFunction area_smooth(double aperture) const;
  // Weighted square function with (t/(t+|y-x|))^{lambda n} in place of the
  // cone cutoff.
  GridFunction g_star(double lambda) const;

 private:
  GridFunction layout_;
  int dim_ = 1;
  std::vector<double> t_grid_, t_weights_;
  std::vector<std::vector<double>> conv_;   // [t index][padded cell]
  std::vector<std::vector<double>> sq_;     // |conv|^2
};

GridFunction lp_g(const GridFunction& f, const LPProfile& profile = {});
GridFunction lusin_area(const GridFunction& f, double aperture, const LPProfile& profile = {});
GridFunction s_tilde(const GridFunction& f, double aperture, const LPProfile& profile = {});
GridFunction g_star_lambda(const GridFunction& f, double lambda, const LPProfile& profile = {});

// Restricted weak-integrability check: lhs = int_E |Sf|^nu, rhs =
// |E|^{1 - nu (n - alpha)/n} ||f||_1^nu (alpha = 0 for the maximal kind).
struct KolmogorovCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double set_measure = 0.0;
};
KolmogorovCheck kolmogorov_check(const GridFunction& sf, const GridFunction& f, const CellSet& set,
                                 double nu, double alpha = 0.0);

}  // namespace wnil

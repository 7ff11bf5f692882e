#pragma once

#include <string>
#include <variant>
#include <vector>

#include "core/grid_function.hpp"

namespace wnil {

// Convex increasing Phi with Phi(0) = 0, Phi(t)/t -> infinity. Three families:
//   Power:      t^p,                     p > 1
//   LogBump:    t^p' log(e+t)^{p'-1+d},  p' > 1, d > 0
//   LogLogBump: t^p' log(e+t)^{p'-1} loglog(e^e+t)^{p'-1+d}
struct PowerYoung {
  double p = 2.0;
};
struct LogBumpYoung {
  double p_prime = 2.0;
  double delta = 1.0;
};
struct LogLogBumpYoung {
  double p_prime = 2.0;
  double delta = 1.0;
};

class YoungSpec {
 public:
  static YoungSpec power(double p);
  static YoungSpec log_bump(double p_prime, double delta);
  static YoungSpec loglog_bump(double p_prime, double delta);

  double eval(double t) const;
  bool is_power() const { return std::holds_alternative<PowerYoung>(spec_); }

  std::string to_json() const;
  static YoungSpec from_json(const std::string& text);

 private:
  YoungSpec() = default;
  std::variant<PowerYoung, LogBumpYoung, LogLogBumpYoung> spec_;
};

// max over log-spaced t in [t_lo, t_hi] of Phi(2t)/Phi(t).
double doubling_constant(const YoungSpec& phi, double t_lo = 1e-6, double t_hi = 1e6,
                         int samples = 481);

// Normalized Luxembourg norm on a ball: inf over lambda > 0 of
// mean over cell centers in B of Phi(|f|/lambda) <= 1. Bracket expansion by
// factors of 10 plus log-space bisection to 1e-12 relative; NoConvergence if
// the bracket passes 1e30. All-zero samples give 0; non-finite samples give
// +infinity (degenerate input, flagged by callers rather than thrown).
double luxembourg_norm(const std::vector<double>& samples, const YoungSpec& phi);
double luxembourg_norm(const GridFunction& f, const Ball& ball, const YoungSpec& phi);

// Tail integral int_c^T [t^{p'}/Phi(t)]^{p-1} dt/t on a log axis, T swept a
// decade at a time up to c*1e8. The Cauchy increment test compares the last
// full-decade increment against the first: a convergent tail decays past the
// fixed ratio threshold, a divergent one does not.
struct BumpIntegral {
  double value = 0.0;           // integral up to the largest T
  bool diverges = false;
  double tail_ratio = 0.0;      // last decade increment / first decade increment
  std::vector<double> increments;
};
BumpIntegral bump_integral(const YoungSpec& phi, double p, double c = 1.0);

}  // namespace wnil

#include "core/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace wnil {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (value, mass) pairs with positive value and positive mass.
using LevelPairs = std::vector<std::pair<double, double>>;

LevelPairs collect_pairs(const GridFunction& f, const std::vector<double>* weights,
                         const CellSet* cells) {
  if (weights)
    require(weights->size() == f.size(), ErrorCode::GridMismatch,
            "norm: weight sample count does not match the grid");
  LevelPairs pairs;
  const double cell = f.cell_measure();
  auto push = [&](std::size_t i) {
    const double v = std::abs(f[i]);
    if (v == 0.0) return;
    const double mass = (weights ? (*weights)[i] : 1.0) * cell;
    require(std::isfinite(mass) && mass >= 0.0, ErrorCode::NonFiniteWeight,
            "norm: weight is not finite at a cell");
    if (mass > 0.0) pairs.emplace_back(v, mass);
  };
  if (cells)
    for (std::size_t i : *cells) push(i);
  else
    for (std::size_t i = 0; i < f.size(); ++i) push(i);
  return pairs;
}

// Exact Lorentz functional over a finite step distribution.
double lorentz_from_pairs(LevelPairs pairs, double q, double t) {
  if (pairs.empty()) return 0.0;
  std::sort(pairs.begin(), pairs.end());
  // Merge duplicates into distinct ascending levels u_j with their masses.
  std::vector<double> levels, masses;
  for (const auto& [v, m] : pairs) {
    if (!levels.empty() && v == levels.back())
      masses.back() += m;
    else {
      levels.push_back(v);
      masses.push_back(m);
    }
  }
  const std::size_t m = levels.size();
  // tail[j] = measure of {|f| >= u_j}.
  std::vector<double> tail(m + 1, 0.0);
  for (std::size_t j = m; j-- > 0;) tail[j] = tail[j + 1] + masses[j];

  if (std::isinf(t)) {
    double best = 0.0;
    for (std::size_t j = 0; j < m; ++j) best = std::max(best, levels[j] * std::pow(tail[j], 1.0 / q));
    return best;
  }
  // q int_0^inf lambda^{t-1} W(lambda)^{t/q} dlambda, W constant between jumps.
  double sum = tail[0] > 0.0 ? std::pow(tail[0], t / q) * std::pow(levels[0], t) : 0.0;
  for (std::size_t j = 1; j < m; ++j)
    sum += std::pow(tail[j], t / q) * (std::pow(levels[j], t) - std::pow(levels[j - 1], t));
  return std::pow(sum * q / t, 1.0 / t);
}

}  // namespace

void SpaceParams::validate(int n) const {
  require(n == 1 || n == 2, ErrorCode::InvalidArgument, "space params: n must be 1 or 2");
  require(q > 0.0 && t > 0.0, ErrorCode::InvalidArgument, "space params: q and t must be positive");
  require(p1 > 0.0 && p2 > 0.0, ErrorCode::InvalidArgument,
          "space params: p1 and p2 must be positive");
  require(p3 > std::max(p1, p2), ErrorCode::InvalidArgument,
          "space params: p3 must exceed max(p1, p2)");
  require(theta > 0.0 && theta <= static_cast<double>(n), ErrorCode::InvalidArgument,
          "space params: theta must lie in (0, n]");
  require(gamma >= 0.0 && gamma < 1.0, ErrorCode::InvalidArgument,
          "space params: gamma must lie in [0, 1)");
  require(alpha >= 0.0 && alpha < static_cast<double>(n), ErrorCode::InvalidArgument,
          "space params: alpha must lie in [0, n)");
  require(s > 1.0 || std::isinf(s), ErrorCode::InvalidArgument, "space params: s must exceed 1");
  require(a > 1.0, ErrorCode::InvalidArgument, "space params: a must exceed 1");
  if (!std::isinf(p3))
    require(a < p3 / p1, ErrorCode::InvalidArgument, "space params: a must stay below p3/p1");
}

ExponentField::ExponentField(GridFunction field) : field_(std::move(field)) {
  p_minus_ = kInf;
  p_plus_ = 0.0;
  for (double v : field_.values()) {
    require(std::isfinite(v) && v > 0.0, ErrorCode::InvalidArgument,
            "exponent field: values must be finite and positive");
    p_minus_ = std::min(p_minus_, v);
    p_plus_ = std::max(p_plus_, v);
  }
  require(field_.size() > 0, ErrorCode::InvalidArgument, "exponent field: empty grid");
}

double lebesgue_norm(const GridFunction& f, double p) {
  require(p > 0.0, ErrorCode::InvalidArgument, "lebesgue_norm: p must be positive");
  double sum = 0.0;
  for (double v : f.values()) sum += std::pow(std::abs(v), p);
  return std::pow(sum * f.cell_measure(), 1.0 / p);
}

double lebesgue_norm(const GridFunction& f, double p, const std::vector<double>& cell_weights) {
  require(p > 0.0, ErrorCode::InvalidArgument, "lebesgue_norm: p must be positive");
  require(cell_weights.size() == f.size(), ErrorCode::GridMismatch,
          "lebesgue_norm: weight sample count does not match the grid");
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    require(std::isfinite(cell_weights[i]), ErrorCode::NonFiniteWeight,
            "lebesgue_norm: weight is not finite at a cell");
    sum += std::pow(std::abs(f[i]), p) * cell_weights[i];
  }
  return std::pow(sum * f.cell_measure(), 1.0 / p);
}

double lorentz_norm(const GridFunction& f, double q, double t) {
  require(q > 0.0 && (t > 0.0 || std::isinf(t)), ErrorCode::InvalidArgument,
          "lorentz_norm: q and t must be positive");
  return lorentz_from_pairs(collect_pairs(f, nullptr, nullptr), q, t);
}

double lorentz_norm(const GridFunction& f, double q, double t,
                    const std::vector<double>& cell_weights) {
  require(q > 0.0 && (t > 0.0 || std::isinf(t)), ErrorCode::InvalidArgument,
          "lorentz_norm: q and t must be positive");
  return lorentz_from_pairs(collect_pairs(f, &cell_weights, nullptr), q, t);
}

namespace {
double lorentz_morrey_impl(const GridFunction& f, double q, double t, double theta,
                           const BallFamily& family, const std::vector<double>* weights) {
  require(q > 0.0 && (t > 0.0 || std::isinf(t)), ErrorCode::InvalidArgument,
          "lorentz_morrey_norm: q and t must be positive");
  const int n = f.dim();
  require(theta > 0.0 && theta <= static_cast<double>(n), ErrorCode::InvalidArgument,
          "lorentz_morrey_norm: theta must lie in (0, n]");
  double best = 0.0;
  for (const Ball& ball : family.balls) {
    const CellSet cells = f.cells_in_ball(ball);
    if (cells.empty()) continue;
    const double local = lorentz_from_pairs(collect_pairs(f, weights, &cells), q, t);
    best = std::max(best, std::pow(ball.radius, (theta - static_cast<double>(n)) / q) * local);
  }
  return best;
}
}  // namespace

double lorentz_morrey_norm(const GridFunction& f, double q, double t, double theta,
                           const BallFamily& family) {
  return lorentz_morrey_impl(f, q, t, theta, family, nullptr);
}

double lorentz_morrey_norm(const GridFunction& f, double q, double t, double theta,
                           const BallFamily& family, const std::vector<double>& cell_weights) {
  return lorentz_morrey_impl(f, q, t, theta, family, &cell_weights);
}

double variable_modular(const GridFunction& f, const ExponentField& p) {
  require(f.same_layout(p.field()), ErrorCode::GridMismatch,
          "variable_modular: exponent grid does not match the function grid");
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += std::pow(std::abs(f[i]), p.field()[i]);
  return sum * f.cell_measure();
}

double variable_norm(const GridFunction& f, const ExponentField& p) {
  require(f.same_layout(p.field()), ErrorCode::GridMismatch,
          "variable_norm: exponent grid does not match the function grid");
  bool all_zero = true;
  for (double v : f.values())
    if (v != 0.0) {
      all_zero = false;
      break;
    }
  if (all_zero) return 0.0;

  const auto modular = [&](double lambda) {
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      sum += std::pow(std::abs(f[i]) / lambda, p.field()[i]);
    return sum * f.cell_measure();
  };
  double hi = 1.0;
  while (modular(hi) > 1.0) {
    hi *= 10.0;
    require(hi <= 1e30, ErrorCode::NoConvergence, "variable_norm: bracket exceeded 1e30");
  }
  double lo = hi / 10.0;
  while (lo > 1e-290 && modular(lo) <= 1.0) {
    hi = lo;
    lo /= 10.0;
  }
  if (lo <= 1e-290) return hi;
  for (int it = 0; it < 200 && hi / lo > 1.0 + 1e-12; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (modular(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace wnil

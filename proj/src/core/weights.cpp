#include "core/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace wnil {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Point parse_center(const nlohmann::json& arr, int* dim) {
  const auto v = arr.get<std::vector<double>>();
  require(v.size() == 1 || v.size() == 2, ErrorCode::ParseError,
          "weight from_json: center must have 1 or 2 coordinates");
  *dim = static_cast<int>(v.size());
  Point p{v[0], 0.0};
  if (v.size() == 2) p[1] = v[1];
  return p;
}

std::string format_center(const Ball& b, int dim) {
  std::ostringstream os;
  os.precision(17);
  os << b.center[0];
  if (dim == 2) os << ';' << b.center[1];
  return os.str();
}

// Shared sup-over-family driver. per_ball returns the candidate constant for
// one ball (may be +inf); the report carries the running sup per radius tier.
template <typename PerBall>
WeightConstantReport sup_over_family(const BallFamily& family, PerBall&& per_ball) {
  WeightConstantReport report;
  report.dim = family.domain.dim;
  report.family_size = family.size();
  report.max_radius = family.radius_tiers.empty() ? 0.0 : family.radius_tiers.back();
  double best = -kInf;
  Ball best_ball;
  std::size_t seen = 0;
  std::size_t tier_idx = 0;
  for (std::size_t i = 0; i < family.balls.size(); ++i) {
    const Ball& ball = family.balls[i];
    const double value = per_ball(ball);
    ++seen;
    if (value > best) {
      best = value;
      best_ball = ball;
    }
    const bool tier_end = (i + 1 == family.balls.size()) ||
                          (family.balls[i + 1].radius > ball.radius);
    if (tier_end) {
      report.series.push_back(WeightSeriesEntry{seen, family.radius_tiers[tier_idx], best,
                                                best_ball});
      ++tier_idx;
    }
  }
  report.value = best;
  report.infinite = std::isinf(best);
  report.argmax = best_ball;
  return report;
}

GridFunction family_grid(const BallFamily& family) {
  return GridFunction::zeros(family.domain, family.h);
}

}  // namespace

WeightSpec WeightSpec::constant(double c) {
  require(std::isfinite(c) && c > 0.0, ErrorCode::InvalidArgument,
          "weight: constant must be positive and finite");
  WeightSpec w;
  w.spec_ = ConstantWeight{c};
  return w;
}

WeightSpec WeightSpec::power(double gamma, const Point& center, int dim) {
  require(dim == 1 || dim == 2, ErrorCode::InvalidArgument, "weight: dim must be 1 or 2");
  require(gamma > -static_cast<double>(dim), ErrorCode::InvalidArgument,
          "weight: power exponent must exceed -dim for local integrability");
  WeightSpec w;
  w.spec_ = PowerWeight{gamma, center, dim};
  return w;
}

WeightSpec WeightSpec::truncated_power(double exponent, const Point& center, double cap_radius,
                                       int dim) {
  require(dim == 1 || dim == 2, ErrorCode::InvalidArgument, "weight: dim must be 1 or 2");
  require(cap_radius > 0.0, ErrorCode::InvalidArgument, "weight: cap radius must be positive");
  WeightSpec w;
  w.spec_ = TruncatedPowerWeight{exponent, center, cap_radius, dim};
  return w;
}

WeightSpec WeightSpec::tabulated(GridFunction table) {
  bool any_positive = false;
  for (double v : table.values()) {
    require(std::isfinite(v) && v >= 0.0, ErrorCode::InvalidArgument,
            "weight: tabulated values must be finite and nonnegative");
    if (v > 0.0) any_positive = true;
  }
  require(any_positive, ErrorCode::InvalidArgument, "weight: tabulated weight must not vanish");
  WeightSpec w;
  w.spec_ = TabulatedWeight{std::move(table)};
  return w;
}

double WeightSpec::eval(const Point& x, double clamp_h) const {
  if (const auto* c = std::get_if<ConstantWeight>(&spec_)) return c->c;
  if (const auto* p = std::get_if<PowerWeight>(&spec_)) {
    double d = distance(x, p->center, p->dim);
    if (p->gamma < 0.0 && clamp_h > 0.0 && d < clamp_h / 4.0) d = clamp_h / 2.0;
    if (d == 0.0 && p->gamma < 0.0) return kInf;
    return std::pow(d, p->gamma);
  }
  if (const auto* t = std::get_if<TruncatedPowerWeight>(&spec_)) {
    const double d = distance(x, t->center, t->dim);
    const double capped = std::pow(t->cap_radius, t->exponent);
    if (d == 0.0) return t->exponent < 0.0 ? capped : 0.0;
    return std::min(std::pow(d, t->exponent), capped);
  }
  return std::get<TabulatedWeight>(spec_).table.value_at(x);
}

std::vector<double> WeightSpec::eval_on_grid(const GridFunction& g) const {
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = eval(g.center(i), g.spacing());
  return out;
}

int WeightSpec::dim() const {
  if (const auto* p = std::get_if<PowerWeight>(&spec_)) return p->dim;
  if (const auto* t = std::get_if<TruncatedPowerWeight>(&spec_)) return t->dim;
  if (const auto* tab = std::get_if<TabulatedWeight>(&spec_)) return tab->table.dim();
  return 0;  // a constant weight fits any dimension
}

std::string WeightSpec::to_json() const {
  nlohmann::json j;
  if (const auto* c = std::get_if<ConstantWeight>(&spec_)) {
    j["kind"] = "constant";
    j["c"] = c->c;
  } else if (const auto* p = std::get_if<PowerWeight>(&spec_)) {
    j["kind"] = "power";
    j["gamma"] = p->gamma;
    j["center"] = std::vector<double>(p->center.begin(), p->center.begin() + p->dim);
  } else if (const auto* t = std::get_if<TruncatedPowerWeight>(&spec_)) {
    j["kind"] = "truncated_power";
    j["exponent"] = t->exponent;
    j["center"] = std::vector<double>(t->center.begin(), t->center.begin() + t->dim);
    j["cap_radius"] = t->cap_radius;
  } else {
    j["kind"] = "tabulated";
    j["grid"] = nlohmann::json::parse(std::get<TabulatedWeight>(spec_).table.to_json());
  }
  return j.dump();
}

WeightSpec WeightSpec::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::ParseError, std::string("weight from_json: ") + e.what());
  }
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return constant(j.at("c").get<double>());
    if (kind == "power") {
      int dim = 0;
      const Point center = parse_center(j.at("center"), &dim);
      return power(j.at("gamma").get<double>(), center, dim);
    }
    if (kind == "truncated_power") {
      int dim = 0;
      const Point center = parse_center(j.at("center"), &dim);
      return truncated_power(j.at("exponent").get<double>(), center,
                             j.at("cap_radius").get<double>(), dim);
    }
    if (kind == "tabulated") return tabulated(GridFunction::from_json(j.at("grid").dump()));
    fail(ErrorCode::ParseError, "weight from_json: unknown kind '" + kind + "'");
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorCode::ParseError, std::string("weight from_json: ") + e.what());
  }
}

void WeightConstantReport::save_csv(const std::string& path) const {
  std::ofstream out(path);
  require(out.good(), ErrorCode::IOFailure, "report save_csv: cannot open " + path);
  out << "family_size,max_radius,constant,argmax_center,argmax_radius\n";
  out.precision(17);
  for (const auto& e : series)
    out << e.family_size << ',' << e.max_radius << ',' << e.constant << ','
        << format_center(e.argmax, dim) << ',' << e.argmax.radius << '\n';
  require(out.good(), ErrorCode::IOFailure, "report save_csv: write failed for " + path);
}

WeightConstantReport ap_constant(const WeightSpec& w, double q, const BallFamily& family) {
  require(q >= 1.0, ErrorCode::InvalidArgument, "ap_constant: q must be >= 1");
  const GridFunction grid = family_grid(family);
  const std::vector<double> wv = w.eval_on_grid(grid);
  std::vector<double> dual(wv.size());
  if (q > 1.0) {
    const double e = -1.0 / (q - 1.0);
    for (std::size_t i = 0; i < wv.size(); ++i) dual[i] = wv[i] > 0.0 ? std::pow(wv[i], e) : kInf;
  }
  return sup_over_family(family, [&](const Ball& ball) {
    const CellSet cells = grid.cells_in_ball(ball);
    require(!cells.empty(), ErrorCode::EmptyBall, "ap_constant: ball contains no cell centers");
    double w_sum = 0.0;
    if (q == 1.0) {
      double w_min = kInf;
      for (std::size_t i : cells) {
        w_sum += wv[i];
        w_min = std::min(w_min, wv[i]);
      }
      const double w_avg = w_sum / static_cast<double>(cells.size());
      return w_min > 0.0 ? w_avg / w_min : kInf;
    }
    double dual_sum = 0.0;
    bool dual_inf = false;
    for (std::size_t i : cells) {
      w_sum += wv[i];
      if (std::isinf(dual[i]))
        dual_inf = true;
      else
        dual_sum += dual[i];
    }
    if (dual_inf) return kInf;
    const double n = static_cast<double>(cells.size());
    return (w_sum / n) * std::pow(dual_sum / n, q - 1.0);
  });
}

WeightConstantReport rh_constant(const WeightSpec& w, double s, const BallFamily& family) {
  require(s > 1.0 || std::isinf(s), ErrorCode::InvalidArgument,
          "rh_constant: s must exceed 1 (or be infinite)");
  const GridFunction grid = family_grid(family);
  const std::vector<double> wv = w.eval_on_grid(grid);
  return sup_over_family(family, [&](const Ball& ball) {
    const CellSet cells = grid.cells_in_ball(ball);
    require(!cells.empty(), ErrorCode::EmptyBall, "rh_constant: ball contains no cell centers");
    double w_sum = 0.0, pow_sum = 0.0, w_max = 0.0;
    for (std::size_t i : cells) {
      w_sum += wv[i];
      w_max = std::max(w_max, wv[i]);
      if (!std::isinf(s)) pow_sum += std::pow(wv[i], s);
    }
    const double n = static_cast<double>(cells.size());
    const double w_avg = w_sum / n;
    require(w_avg > 0.0, ErrorCode::ZeroAverage, "rh_constant: weight averages to zero on a ball");
    if (std::isinf(s)) return w_max / w_avg;
    return std::pow(pow_sum / n, 1.0 / s) / w_avg;
  });
}

WeightConstantReport two_weight_ap(const WeightSpec& w, const WeightSpec& v, double p,
                                   const BallFamily& family) {
  require(p > 1.0, ErrorCode::InvalidArgument, "two_weight_ap: p must exceed 1");
  const GridFunction grid = family_grid(family);
  const std::vector<double> wv = w.eval_on_grid(grid);
  const std::vector<double> vv = v.eval_on_grid(grid);
  const double p_prime = p / (p - 1.0);
  std::vector<double> dual(vv.size());
  for (std::size_t i = 0; i < vv.size(); ++i)
    dual[i] = vv[i] > 0.0 ? std::pow(vv[i], 1.0 - p_prime) : kInf;
  return sup_over_family(family, [&](const Ball& ball) {
    const CellSet cells = grid.cells_in_ball(ball);
    require(!cells.empty(), ErrorCode::EmptyBall, "two_weight_ap: ball contains no cell centers");
    double w_sum = 0.0, dual_sum = 0.0;
    bool dual_inf = false;
    for (std::size_t i : cells) {
      w_sum += wv[i];
      if (std::isinf(dual[i]))
        dual_inf = true;
      else
        dual_sum += dual[i];
    }
    if (dual_inf) return kInf;
    const double n = static_cast<double>(cells.size());
    return (w_sum / n) * std::pow(dual_sum / n, p - 1.0);
  });
}

WeightConstantReport sawyer_sp(const WeightSpec& w, const WeightSpec& v, double p,
                               const BallFamily& family, const MaximalOp& maximal) {
  require(p > 1.0, ErrorCode::InvalidArgument, "sawyer_sp: p must exceed 1");
  require(static_cast<bool>(maximal), ErrorCode::InvalidArgument,
          "sawyer_sp: maximal operator handle is required");
  const GridFunction grid = family_grid(family);
  const std::vector<double> wv = w.eval_on_grid(grid);
  const std::vector<double> vv = v.eval_on_grid(grid);
  // sigma = v^{1-p'}, with vanishing v carrying no dual mass.
  const double p_prime = p / (p - 1.0);
  std::vector<double> sigma(vv.size());
  for (std::size_t i = 0; i < vv.size(); ++i)
    sigma[i] = vv[i] > 0.0 ? std::pow(vv[i], 1.0 - p_prime) : 0.0;

  return sup_over_family(family, [&](const Ball& ball) {
    const CellSet cells = grid.cells_in_ball(ball);
    require(!cells.empty(), ErrorCode::EmptyBall, "sawyer_sp: ball contains no cell centers");
    GridFunction sigma_b = GridFunction::zeros(family.domain, family.h);
    double sigma_mass = 0.0;
    for (std::size_t i : cells) {
      sigma_b[i] = sigma[i];
      sigma_mass += sigma[i];
    }
    sigma_mass *= grid.cell_measure();
    require(sigma_mass > 0.0, ErrorCode::ZeroMass,
            "sawyer_sp: dual weight has zero mass on a ball");
    const GridFunction m_sigma = maximal(sigma_b, family);
    double num = 0.0;
    for (std::size_t i : cells) num += std::pow(m_sigma[i], p) * wv[i];
    num *= grid.cell_measure();
    return std::pow(num / sigma_mass, 1.0 / p);
  });
}

WeightConstantReport bump_constant(const WeightSpec& w, const WeightSpec& v, const YoungSpec& phi,
                                   const BumpExponents& exponents, const BallFamily& family) {
  require(exponents.outer > 0.0 && exponents.inner > 0.0, ErrorCode::InvalidArgument,
          "bump_constant: exponents must be positive");
  const GridFunction grid = family_grid(family);
  const std::vector<double> wv = w.eval_on_grid(grid);
  const std::vector<double> vv = v.eval_on_grid(grid);
  std::vector<double> dual(vv.size());
  for (std::size_t i = 0; i < vv.size(); ++i)
    dual[i] = vv[i] > 0.0 ? std::pow(vv[i], -exponents.inner) : kInf;
  return sup_over_family(family, [&](const Ball& ball) {
    const CellSet cells = grid.cells_in_ball(ball);
    require(!cells.empty(), ErrorCode::EmptyBall, "bump_constant: ball contains no cell centers");
    double w_sum = 0.0;
    std::vector<double> samples;
    samples.reserve(cells.size());
    for (std::size_t i : cells) {
      w_sum += wv[i];
      samples.push_back(dual[i]);
    }
    const double norm = luxembourg_norm(samples, phi);
    if (std::isinf(norm)) return kInf;
    return (w_sum / static_cast<double>(cells.size())) * std::pow(norm, exponents.outer);
  });
}

bool power_weight_in_class(double gamma, double s, int n) {
  require(n == 1 || n == 2, ErrorCode::InvalidArgument, "power_weight_in_class: n must be 1 or 2");
  require(s >= 1.0, ErrorCode::InvalidArgument, "power_weight_in_class: s must be >= 1");
  if (gamma <= -static_cast<double>(n)) return false;
  if (std::isinf(s)) return true;
  return gamma < static_cast<double>(n) * (s - 1.0);
}

std::vector<DichotomyStage> dichotomy_series(const WeightSpec& w, double q) {
  // Stages refine h by 8 and double the radius cap; see the membership
  // dichotomy tests for the growth thresholds this schedule is tuned to.
  Box box;
  box.dim = 1;
  box.lo = {-1.0, 0.0};
  box.hi = {1.0, 0.0};
  const double caps[3] = {0.25, 0.5, 1.0};
  const double hs[3] = {2.0 / 16.0, 2.0 / 128.0, 2.0 / 1024.0};
  std::vector<DichotomyStage> out;
  for (int stage = 0; stage < 3; ++stage) {
    BallFamilyPolicy policy;
    policy.max_radius_factor = caps[stage] / box.diameter();
    const BallFamily family = ball_family(box, hs[stage], policy);
    const WeightConstantReport report = ap_constant(w, q, family);
    out.push_back(DichotomyStage{hs[stage], caps[stage], report.value});
  }
  return out;
}

}  // namespace wnil

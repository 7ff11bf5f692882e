#include "core/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "core/error.hpp"

namespace wnil {
namespace {

constexpr double kBracketLimit = 1e30;
constexpr double kBisectRelTol = 1e-12;
constexpr int kBisectMaxIter = 200;
constexpr double kTailRatioThreshold = 0.2;

struct EvalVisitor {
  double t;
  double operator()(const PowerYoung& y) const { return std::pow(t, y.p); }
  double operator()(const LogBumpYoung& y) const {
    return std::pow(t, y.p_prime) *
           std::pow(std::log(std::exp(1.0) + t), y.p_prime - 1.0 + y.delta);
  }
  double operator()(const LogLogBumpYoung& y) const {
    const double l = std::log(std::exp(1.0) + t);
    const double ll = std::log(std::log(std::exp(std::exp(1.0)) + t));
    return std::pow(t, y.p_prime) * std::pow(l, y.p_prime - 1.0) *
           std::pow(ll, y.p_prime - 1.0 + y.delta);
  }
};

// Sampled shape check: zero at zero, strictly increasing, convex within
// rounding, superlinear growth of Phi(t)/t.
void validate_shape(const YoungSpec& phi) {
  require(phi.eval(0.0) == 0.0, ErrorCode::InvalidArgument, "young: Phi(0) must be 0");
  double prev = 0.0;
  for (int i = 1; i <= 64; ++i) {
    const double t = 10.0 * i / 64.0;
    const double v = phi.eval(t);
    require(v > prev, ErrorCode::InvalidArgument, "young: Phi must be strictly increasing");
    prev = v;
  }
  const double step = 10.0 / 64.0;
  for (int i = 1; i < 63; ++i) {
    const double a = phi.eval(step * i), b = phi.eval(step * (i + 1)), c = phi.eval(step * (i + 2));
    require(a + c - 2.0 * b >= -1e-12 * std::max(1.0, std::abs(b)), ErrorCode::InvalidArgument,
            "young: Phi must be convex");
  }
  double prev_slope = 0.0;
  for (int k = -6; k <= 6; ++k) {
    const double t = std::pow(10.0, k);
    const double slope = phi.eval(t) / t;
    require(slope > prev_slope, ErrorCode::InvalidArgument, "young: Phi(t)/t must grow");
    prev_slope = slope;
  }
}

}  // namespace

YoungSpec YoungSpec::power(double p) {
  require(p > 1.0, ErrorCode::InvalidArgument, "young: power exponent must exceed 1");
  YoungSpec s;
  s.spec_ = PowerYoung{p};
  validate_shape(s);
  return s;
}

YoungSpec YoungSpec::log_bump(double p_prime, double delta) {
  require(p_prime > 1.0, ErrorCode::InvalidArgument, "young: log_bump p' must exceed 1");
  require(delta > 0.0, ErrorCode::InvalidArgument, "young: log_bump delta must be positive");
  YoungSpec s;
  s.spec_ = LogBumpYoung{p_prime, delta};
  validate_shape(s);
  return s;
}

YoungSpec YoungSpec::loglog_bump(double p_prime, double delta) {
  require(p_prime > 1.0, ErrorCode::InvalidArgument, "young: loglog_bump p' must exceed 1");
  require(delta > 0.0, ErrorCode::InvalidArgument, "young: loglog_bump delta must be positive");
  YoungSpec s;
  s.spec_ = LogLogBumpYoung{p_prime, delta};
  validate_shape(s);
  return s;
}

double YoungSpec::eval(double t) const {
  require(t >= 0.0, ErrorCode::InvalidArgument, "young: eval needs t >= 0");
  if (t == 0.0) return 0.0;
  return std::visit(EvalVisitor{t}, spec_);
}

std::string YoungSpec::to_json() const {
  nlohmann::json j;
  if (const auto* p = std::get_if<PowerYoung>(&spec_)) {
    j["kind"] = "power";
    j["p"] = p->p;
  } else if (const auto* l = std::get_if<LogBumpYoung>(&spec_)) {
    j["kind"] = "log_bump";
    j["p_prime"] = l->p_prime;
    j["delta"] = l->delta;
  } else {
    const auto& ll = std::get<LogLogBumpYoung>(spec_);
    j["kind"] = "loglog_bump";
    j["p_prime"] = ll.p_prime;
    j["delta"] = ll.delta;
  }
  return j.dump();
}

YoungSpec YoungSpec::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::ParseError, std::string("young from_json: ") + e.what());
  }
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "power") return power(j.at("p").get<double>());
    if (kind == "log_bump")
      return log_bump(j.at("p_prime").get<double>(), j.at("delta").get<double>());
    if (kind == "loglog_bump")
      return loglog_bump(j.at("p_prime").get<double>(), j.at("delta").get<double>());
    fail(ErrorCode::ParseError, "young from_json: unknown kind '" + kind + "'");
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorCode::ParseError, std::string("young from_json: ") + e.what());
  }
}

double doubling_constant(const YoungSpec& phi, double t_lo, double t_hi, int samples) {
  require(t_lo > 0.0 && t_hi > t_lo, ErrorCode::InvalidArgument,
          "doubling_constant: need 0 < t_lo < t_hi");
  require(samples >= 2, ErrorCode::InvalidArgument, "doubling_constant: need >= 2 samples");
  const double step = std::log(t_hi / t_lo) / (samples - 1);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = t_lo * std::exp(step * i);
    worst = std::max(worst, phi.eval(2.0 * t) / phi.eval(t));
  }
  return worst;
}

double luxembourg_norm(const std::vector<double>& samples, const YoungSpec& phi) {
  require(!samples.empty(), ErrorCode::EmptyBall, "luxembourg_norm: no samples");
  bool all_zero = true;
  for (double v : samples) {
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    if (v != 0.0) all_zero = false;
  }
  if (all_zero) return 0.0;

  const auto modular = [&](double lambda) {
    double sum = 0.0;
    for (double v : samples) sum += phi.eval(std::abs(v) / lambda);
    return sum / static_cast<double>(samples.size());
  };

  double hi = 1.0;
  while (modular(hi) > 1.0) {
    hi *= 10.0;
    require(hi <= kBracketLimit, ErrorCode::NoConvergence,
            "luxembourg_norm: bracket exceeded 1e30");
  }
  double lo = hi / 10.0;
  while (lo > 1e-290 && modular(lo) <= 1.0) {
    hi = lo;
    lo /= 10.0;
  }
  if (lo <= 1e-290) return hi;

  for (int it = 0; it < kBisectMaxIter && hi / lo > 1.0 + kBisectRelTol; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (modular(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double luxembourg_norm(const GridFunction& f, const Ball& ball, const YoungSpec& phi) {
  const CellSet cells = f.cells_in_ball(ball);
  require(!cells.empty(), ErrorCode::EmptyBall, "luxembourg_norm: ball contains no cell centers");
  std::vector<double> samples;
  samples.reserve(cells.size());
  for (std::size_t i : cells) samples.push_back(f[i]);
  return luxembourg_norm(samples, phi);
}

BumpIntegral bump_integral(const YoungSpec& phi, double p, double c) {
  require(p > 1.0, ErrorCode::InvalidArgument, "bump_integral: p must exceed 1");
  require(c > 0.0, ErrorCode::InvalidArgument, "bump_integral: c must be positive");
  const double p_prime = p / (p - 1.0);
  const auto integrand_log = [&](double u) {
    // After t = e^u the measure dt/t becomes du.
    const double t = std::exp(u);
    return std::pow(std::pow(t, p_prime) / phi.eval(t), p - 1.0);
  };
  const auto simpson = [&](double a, double b, int panels) {
    const double w = (b - a) / panels;
    double sum = integrand_log(a) + integrand_log(b);
    for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * integrand_log(a + w * i);
    return sum * w / 3.0;
  };

  BumpIntegral out;
  // Head piece [c, 100c], then one increment per decade up to c*1e8.
  const double ln10 = std::log(10.0);
  double u = std::log(c);
  out.value = simpson(u, u + 2.0 * ln10, 512);
  u += 2.0 * ln10;
  for (int k = 0; k < 6; ++k) {
    const double inc = simpson(u, u + ln10, 256);
    out.increments.push_back(inc);
    out.value += inc;
    u += ln10;
  }
  const double first = out.increments.front();
  const double last = out.increments.back();
  out.tail_ratio = first > 0.0 ? last / first : 0.0;
  out.diverges = out.tail_ratio > kTailRatioThreshold;
  return out;
}

}  // namespace wnil

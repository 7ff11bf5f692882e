#include "core/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "core/error.hpp"
#include "core/good_lambda.hpp"
#include "core/maximal.hpp"
#include "core/whitney.hpp"
#include "json.hpp"

namespace wnil {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void bad_config(const std::string& what) {
  fail(ErrorCode::ConfigInvalid, what);
}

double num_or_inf(const nlohmann::json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return kInf;
    bad_config(key + ": expected a number or \"inf\"");
  }
  if (!v.is_number()) bad_config(key + ": expected a number");
  return v.get<double>();
}

double l1_norm(const GridFunction& f) {
  double acc = 0.0;
  for (double v : f.values()) acc += std::fabs(v);
  return acc * f.cell_measure();
}

bool is_cz_or_lp(const std::string& op) {
  return op == "hilbert" || op == "riesz1" || op == "riesz2" || op == "lp_g" || op == "lp_area";
}

OperatorSpec operator_from_config(const RunConfig& cfg) {
  OperatorSpec op;
  if (cfg.op == "hilbert") {
    op.kind = OperatorKind::CZ;
    op.kernel.kind = CZKernelSpec::Kind::Hilbert1D;
  } else if (cfg.op == "riesz1" || cfg.op == "riesz2") {
    op.kind = OperatorKind::CZ;
    op.kernel.kind = CZKernelSpec::Kind::RieszJ;
    op.kernel.j = cfg.op == "riesz1" ? 1 : 2;
  } else if (cfg.op == "lp_g") {
    op.kind = OperatorKind::LPg;
  } else if (cfg.op == "lp_area") {
    op.kind = OperatorKind::LPArea;
    op.aperture = cfg.aperture;
  } else if (cfg.op == "fractional") {
    op.kind = OperatorKind::Fractional;
    op.alpha = cfg.alpha;
  } else {
    bad_config("op: '" + cfg.op + "' has no operator form");
  }
  return op;
}

GridFunction apply_config_op(const RunConfig& cfg, const GridFunction& f,
                             const BallFamily& family) {
  if (cfg.op == "maximal") return hl_maximal(f, family);
  return apply_operator(operator_from_config(cfg), f);
}

std::vector<double> unit_weights(const GridFunction& g) {
  return std::vector<double>(g.size(), 1.0);
}

template <typename Fn>
void parallel_for(int jobs, int n, Fn&& fn) {
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_lock;
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> hold(error_lock);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int threads = std::min(jobs, n);
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const std::string& f : flags) {
    if (!out.empty()) out += ';';
    out += f;
  }
  return out;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// ---- the experiments ----

std::vector<std::string> hypothesis_flags(const RunConfig& cfg, const BallFamily& family) {
  std::vector<std::string> flags;
  if (cfg.omega && cfg.v) {
    if (two_weight_ap(*cfg.omega, *cfg.v, cfg.p, family).infinite)
      flags.push_back("HypothesisViolated:two_weight");
  } else if (cfg.omega) {
    if (ap_constant(*cfg.omega, cfg.space.q, family).infinite)
      flags.push_back("HypothesisViolated:muckenhoupt");
  }
  if (cfg.omega && rh_constant(*cfg.omega, cfg.space.s, family).infinite)
    flags.push_back("HypothesisViolated:reverse_holder");
  if (cfg.young && cfg.omega && cfg.v) {
    const BumpExponents exps{cfg.p - 1.0, 1.0 / (cfg.p - 1.0)};
    if (bump_constant(*cfg.omega, *cfg.v, *cfg.young, exps, family).infinite)
      flags.push_back("HypothesisViolated:bump");
  }
  return flags;
}

std::vector<ReportRow> run_norm_transfer(const RunConfig& cfg) {
  const std::vector<GridFunction> corpus = make_corpus(cfg.box, cfg.h, cfg.corpus);
  const BallFamily family = ball_family(cfg.box, cfg.h, cfg.policy);
  const std::string flags = join_flags(hypothesis_flags(cfg, family));

  std::vector<ReportRow> rows(corpus.size());
  parallel_for(cfg.jobs, static_cast<int>(corpus.size()), [&](int i) {
    const GridFunction& f = corpus[i];
    const GridFunction tf = apply_config_op(cfg, f, family);
    const BallFamily out_family =
        tf.same_layout(f) ? family : ball_family(tf.box(), cfg.h, cfg.policy);
    const std::vector<double> w_out =
        cfg.omega ? cfg.omega->eval_on_grid(tf) : unit_weights(tf);
    const std::vector<double> w_src = cfg.v ? cfg.v->eval_on_grid(f) : unit_weights(f);

    ReportRow row;
    row.experiment = cfg.experiment;
    row.kind = cfg.op;
    row.space = "lorentz_morrey/lebesgue";
    row.q = cfg.space.q;
    row.t = cfg.space.t;
    row.theta = cfg.space.theta;
    row.p = cfg.p;
    row.alpha = cfg.op == "fractional" ? cfg.alpha : 0.0;
    row.gamma = cfg.space.gamma;
    row.h = cfg.h;
    row.family_size = family.size();
    row.lhs = lorentz_morrey_norm(tf, cfg.space.q, cfg.space.t, cfg.space.theta, out_family, w_out);
    row.rhs = lebesgue_norm(f, cfg.p, w_src);
    row.ratio = row.rhs > 0.0 ? row.lhs / row.rhs : (row.lhs > 0.0 ? kInf : 0.0);
    row.flags = flags;
    rows[i] = row;
  });
  return rows;
}

std::vector<ReportRow> run_weak_type(const RunConfig& cfg) {
  const std::vector<GridFunction> corpus = make_corpus(cfg.box, cfg.h, cfg.corpus);
  const BallFamily family = ball_family(cfg.box, cfg.h, cfg.policy);

  std::vector<ReportRow> rows(corpus.size());
  parallel_for(cfg.jobs, static_cast<int>(corpus.size()), [&](int i) {
    const GridFunction& f = corpus[i];
    ReportRow row;
    row.experiment = cfg.experiment;
    row.kind = cfg.op;
    row.space = "weak_l1";
    row.p = 1.0;
    row.h = cfg.h;
    row.family_size = family.size();
    const double mass = l1_norm(f);
    if (mass == 0.0) {
      row.flags = "zero_mass";
      rows[i] = row;
      return;
    }
    const GridFunction tf = apply_config_op(cfg, f, family);
    row.lhs = weak_type_ratio(tf, mass);
    row.rhs = 1.0;
    row.ratio = row.lhs;
    rows[i] = row;
  });
  return rows;
}

std::vector<ReportRow> run_dichotomy(const RunConfig& cfg) {
  if (!cfg.omega) bad_config("omega: required for the dichotomy experiment");
  const std::vector<DichotomyStage> series = dichotomy_series(*cfg.omega, cfg.space.q);
  std::vector<ReportRow> rows;
  for (std::size_t i = 0; i < series.size(); ++i) {
    ReportRow row;
    row.experiment = cfg.experiment;
    row.kind = "muckenhoupt";
    row.space = "ap_constant";
    row.q = cfg.space.q;
    row.h = series[i].h;
    row.lhs = series[i].constant;
    row.rhs = i == 0 ? series[i].constant : series[i - 1].constant;
    row.ratio = row.rhs > 0.0 ? row.lhs / row.rhs : kInf;
    if (i + 1 == series.size()) {
      if (row.ratio >= 1.5)
        row.flags = "divergent";
      else if (row.ratio <= 1.05)
        row.flags = "bounded";
      else
        row.flags = "inconclusive";
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<ReportRow> run_good_lambda(const RunConfig& cfg) {
  if (!cfg.omega) bad_config("omega: required for the good_lambda experiment");
  const std::vector<GridFunction> corpus = make_corpus(cfg.box, cfg.h, cfg.corpus);
  const BallFamily family = ball_family(cfg.box, cfg.h, cfg.policy);

  GoodLambdaParams params;
  params.p1 = cfg.space.p1;
  params.p2 = cfg.space.p2;
  params.gamma = cfg.op == "fractional" ? cfg.alpha / cfg.dim : cfg.space.gamma;
  params.a = cfg.space.a;
  params.s = cfg.space.s;

  std::vector<ReportRow> rows(corpus.size());
  parallel_for(cfg.jobs, static_cast<int>(corpus.size()), [&](int i) {
    const GridFunction& f = corpus[i];
    ReportRow row;
    row.experiment = cfg.experiment;
    row.kind = cfg.op;
    row.space = "good_lambda";
    row.p = params.p1;
    row.alpha = cfg.op == "fractional" ? cfg.alpha : 0.0;
    row.gamma = params.gamma;
    row.h = cfg.h;
    row.family_size = family.size();
    if (l1_norm(f) == 0.0) {
      row.flags = "zero_mass";
      rows[i] = row;
      return;
    }
    const GridFunction tf = apply_config_op(cfg, f, family);
    const GoodLambdaTrace trace = good_lambda_trace(tf, f, *cfg.omega, family, params);
    row.lhs = trace.minimal_beta;
    row.rhs = trace.kappa_at_minimal;
    row.ratio = trace.minimal_beta;
    std::vector<std::string> flags;
    flags.push_back(trace.found ? "found" : "not_found");
    if (trace.found) flags.push_back(trace.upward_closed ? "upward_closed" : "not_upward_closed");
    row.flags = join_flags(flags);
    rows[i] = row;
  });
  return rows;
}

std::vector<ReportRow> run_whitney(const RunConfig& cfg) {
  GridFunction mask = GridFunction::zeros(cfg.box, cfg.h);
  if (cfg.domain == "interval") {
    mask = GridFunction::sample(cfg.box, cfg.h, [](const Point& x) {
      return x[0] > 0.0 && x[0] < 1.0 ? 1.0 : 0.0;
    });
  } else {
    mask = GridFunction::sample(cfg.box, cfg.h, [](const Point& x) {
      return x[0] * x[0] + x[1] * x[1] < 1.0 ? 1.0 : 0.0;
    });
  }
  const WhitneyCover cover = whitney_decompose(mask);
  const CoverCheck check = verify_cover(cover, mask);
  save_cover_csv(cover, cfg.dim, (std::filesystem::path(cfg.out_dir) / "cover.csv").string());

  ReportRow row;
  row.experiment = cfg.experiment;
  row.kind = cfg.domain;
  row.space = "cover";
  row.h = cfg.h;
  row.family_size = cover.balls.size();
  row.lhs = check.max_overlap;
  row.rhs = static_cast<double>(cover.balls.size());
  row.ratio = check.max_overlap;
  std::vector<std::string> flags;
  if (!check.covers) flags.push_back("gap_in_cover");
  if (!check.quarter_disjoint) flags.push_back("quarters_collide");
  if (!check.scaled_inside) flags.push_back("double_escapes");
  if (!check.touches_complement) flags.push_back("quad_misses_complement");
  row.flags = flags.empty() ? "proper" : join_flags(flags);
  return {row};
}

std::vector<ReportRow> run_kolmogorov(const RunConfig& cfg) {
  const std::vector<GridFunction> corpus = make_corpus(cfg.box, cfg.h, cfg.corpus);
  const BallFamily family = ball_family(cfg.box, cfg.h, cfg.policy);
  const GridFunction& f = corpus.front();
  const double nu = cfg.space.p1;
  const double order = cfg.op == "fractional" ? cfg.alpha : 0.0;
  const GridFunction sf = cfg.op == "fractional"
                              ? fractional_maximal(f, cfg.alpha / cfg.dim, family)
                              : hl_maximal(f, family);

  // nested strips from the low edge, two decades of measure
  std::vector<ReportRow> rows;
  std::vector<double> logm, logl;
  for (int k = 0; k <= 8; ++k) {
    const double frac = 1.0 / std::exp2(k * 0.875);
    const double cut = cfg.box.lo[0] + frac * cfg.box.width(0);
    CellSet strip;
    for (std::size_t i = 0; i < sf.size(); ++i)
      if (sf.center(i)[0] < cut) strip.push_back(i);
    if (strip.empty()) continue;
    const KolmogorovCheck check = kolmogorov_check(sf, f, strip, nu, order);
    ReportRow row;
    row.experiment = cfg.experiment;
    row.kind = cfg.op;
    row.space = "kolmogorov";
    row.p = nu;
    row.alpha = order;
    row.h = cfg.h;
    row.family_size = family.size();
    row.lhs = check.lhs;
    row.rhs = check.rhs;
    row.ratio = check.ratio;
    rows.push_back(row);
    if (check.lhs > 0.0) {
      logm.push_back(std::log(check.set_measure));
      logl.push_back(std::log(check.lhs));
    }
  }
  if (logm.size() >= 2 && !rows.empty()) {
    // least-squares slope of log lhs against log |E|
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < logm.size(); ++i) {
      mx += logm[i];
      my += logl[i];
    }
    mx /= logm.size();
    my /= logm.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < logm.size(); ++i) {
      num += (logm[i] - mx) * (logl[i] - my);
      den += (logm[i] - mx) * (logm[i] - mx);
    }
    rows.back().flags = "slope=" + format_double(num / den);
  }
  return rows;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    bad_config(std::string("config is not valid json: ") + e.what());
  }
  if (!j.is_object()) bad_config("config root must be an object");

  RunConfig cfg;
  cfg.experiment = j.value("experiment", cfg.experiment);
  const bool known = cfg.experiment == "norm_transfer" || cfg.experiment == "weak_type" ||
                     cfg.experiment == "dichotomy" || cfg.experiment == "good_lambda" ||
                     cfg.experiment == "whitney" || cfg.experiment == "kolmogorov";
  if (!known) bad_config("experiment: unknown value '" + cfg.experiment + "'");

  cfg.dim = j.value("dim", 1);
  if (cfg.dim != 1 && cfg.dim != 2) bad_config("dim: must be 1 or 2");

  cfg.box.dim = cfg.dim;
  if (j.contains("box")) {
    const auto& jb = j.at("box");
    if (!jb.is_object() || !jb.contains("lo") || !jb.contains("hi"))
      bad_config("box: expected an object with lo and hi arrays");
    const auto& lo = jb.at("lo");
    const auto& hi = jb.at("hi");
    if (!lo.is_array() || !hi.is_array() || static_cast<int>(lo.size()) != cfg.dim ||
        static_cast<int>(hi.size()) != cfg.dim)
      bad_config("box: lo and hi must be arrays of length dim");
    for (int a = 0; a < cfg.dim; ++a) {
      cfg.box.lo[a] = lo[a].get<double>();
      cfg.box.hi[a] = hi[a].get<double>();
      if (!(cfg.box.hi[a] > cfg.box.lo[a])) bad_config("box: hi must exceed lo on every axis");
    }
  } else {
    for (int a = 0; a < cfg.dim; ++a) {
      cfg.box.lo[a] = -4.0;
      cfg.box.hi[a] = 4.0;
    }
  }

  cfg.h = j.value("h", cfg.h);
  if (!(cfg.h > 0.0) || cfg.h > cfg.box.width(0))
    bad_config("h: must be positive and at most the box width");

  cfg.op = j.value("op", cfg.op);
  const bool op_known = is_cz_or_lp(cfg.op) || cfg.op == "fractional" || cfg.op == "maximal";
  if (!op_known) bad_config("op: unknown value '" + cfg.op + "'");
  if (cfg.op == "hilbert" && cfg.dim != 1) bad_config("op: hilbert needs dim = 1");
  if ((cfg.op == "riesz1" || cfg.op == "riesz2") && cfg.dim != 2)
    bad_config("op: riesz components need dim = 2");

  cfg.alpha = num_or_inf(j, "alpha", cfg.alpha);
  if (cfg.op == "fractional" && !(cfg.alpha > 0.0 && cfg.alpha < cfg.dim))
    bad_config("alpha: fractional order must lie in (0, dim)");
  cfg.aperture = j.value("aperture", cfg.aperture);
  if (cfg.op == "lp_area" && cfg.aperture < 1.0) bad_config("aperture: must be at least 1");

  cfg.p = num_or_inf(j, "p", cfg.p);
  if (!(cfg.p > 1.0) || std::isinf(cfg.p)) bad_config("p: must be a finite exponent above 1");

  if (j.contains("space")) {
    const auto& js = j.at("space");
    if (!js.is_object()) bad_config("space: expected an object");
    cfg.space.q = num_or_inf(js, "q", cfg.space.q);
    cfg.space.t = num_or_inf(js, "t", cfg.space.t);
    cfg.space.theta = num_or_inf(js, "theta", cfg.space.theta);
    cfg.space.p1 = num_or_inf(js, "p1", cfg.space.p1);
    cfg.space.p2 = num_or_inf(js, "p2", cfg.space.p2);
    cfg.space.p3 = num_or_inf(js, "p3", cfg.space.p3);
    cfg.space.gamma = num_or_inf(js, "gamma", cfg.space.gamma);
    cfg.space.alpha = num_or_inf(js, "alpha", cfg.space.alpha);
    cfg.space.s = num_or_inf(js, "s", cfg.space.s);
    cfg.space.a = num_or_inf(js, "a", cfg.space.a);
  }
  try {
    cfg.space.validate(cfg.dim);
  } catch (const Error& e) {
    bad_config(std::string("space: ") + e.what());
  }

  if (cfg.experiment == "norm_transfer" && cfg.op == "fractional") {
    const double expected = 1.0 / cfg.p - cfg.alpha / cfg.dim;
    if (!(expected > 0.0)) bad_config("p: 1/p - alpha/dim must stay positive");
    if (std::fabs(1.0 / cfg.space.q - expected) > 1e-9)
      bad_config("space.q: fractional transfer requires 1/q = 1/p - alpha/dim");
  }

  if (j.contains("omega")) {
    try {
      cfg.omega = WeightSpec::from_json(j.at("omega").dump());
    } catch (const Error& e) {
      bad_config(std::string("omega: ") + e.what());
    }
    if (cfg.omega->dim() != 0 && cfg.omega->dim() != cfg.dim)
      bad_config("omega: dimension does not match dim");
  }
  if (j.contains("v")) {
    try {
      cfg.v = WeightSpec::from_json(j.at("v").dump());
    } catch (const Error& e) {
      bad_config(std::string("v: ") + e.what());
    }
    if (cfg.v->dim() != 0 && cfg.v->dim() != cfg.dim) bad_config("v: dimension does not match dim");
  }
  if (j.contains("young")) {
    try {
      cfg.young = YoungSpec::from_json(j.at("young").dump());
    } catch (const Error& e) {
      bad_config(std::string("young: ") + e.what());
    }
  }

  if (j.contains("corpus")) {
    const auto& jc = j.at("corpus");
    if (!jc.is_object()) bad_config("corpus: expected an object");
    cfg.corpus.kind = jc.value("kind", cfg.corpus.kind);
    cfg.corpus.count = jc.value("count", cfg.corpus.count);
    cfg.corpus.seed = jc.value("seed", cfg.corpus.seed);
    if (cfg.corpus.kind != "bumps" && cfg.corpus.kind != "indicators" &&
        cfg.corpus.kind != "bandlimited" && cfg.corpus.kind != "mixed")
      bad_config("corpus.kind: unknown value '" + cfg.corpus.kind + "'");
    if (cfg.corpus.count <= 0) bad_config("corpus.count: must be positive");
  }

  if (j.contains("policy")) {
    const auto& jp = j.at("policy");
    if (!jp.is_object()) bad_config("policy: expected an object");
    cfg.policy.center_stride = jp.value("center_stride", cfg.policy.center_stride);
    cfg.policy.center_offset = jp.value("center_offset", cfg.policy.center_offset);
    cfg.policy.radii_per_octave = jp.value("radii_per_octave", cfg.policy.radii_per_octave);
    cfg.policy.max_radius_factor = jp.value("max_radius_factor", cfg.policy.max_radius_factor);
    if (cfg.policy.center_stride < 1) bad_config("policy.center_stride: must be at least 1");
    if (cfg.policy.center_offset < 0) bad_config("policy.center_offset: must be nonnegative");
    if (cfg.policy.radii_per_octave < 1) bad_config("policy.radii_per_octave: must be at least 1");
    if (!(cfg.policy.max_radius_factor > 0.0))
      bad_config("policy.max_radius_factor: must be positive");
  }

  cfg.domain = j.value("domain", cfg.domain);
  if (cfg.domain != "interval" && cfg.domain != "disc")
    bad_config("domain: expected interval or disc");
  if (cfg.experiment == "whitney") {
    if (cfg.domain == "interval" && cfg.dim != 1) bad_config("domain: interval needs dim = 1");
    if (cfg.domain == "disc" && cfg.dim != 2) bad_config("domain: disc needs dim = 2");
  }

  cfg.jobs = j.value("jobs", cfg.jobs);
  if (cfg.jobs < 1) bad_config("jobs: must be at least 1");
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  if (cfg.out_dir.empty()) bad_config("out_dir: must not be empty");

  if ((cfg.experiment == "dichotomy" || cfg.experiment == "good_lambda") && !cfg.omega)
    bad_config("omega: required for this experiment");

  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::IOFailure, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str());
}

std::string run_config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["experiment"] = cfg.experiment;
  j["dim"] = cfg.dim;
  j["box"]["lo"] = std::vector<double>(cfg.box.lo.begin(), cfg.box.lo.begin() + cfg.dim);
  j["box"]["hi"] = std::vector<double>(cfg.box.hi.begin(), cfg.box.hi.begin() + cfg.dim);
  j["h"] = cfg.h;
  j["op"] = cfg.op;
  j["alpha"] = cfg.alpha;
  j["aperture"] = cfg.aperture;
  j["p"] = cfg.p;
  auto put = [](nlohmann::json& node, const char* key, double v) {
    if (std::isinf(v))
      node[key] = "inf";
    else
      node[key] = v;
  };
  put(j["space"], "q", cfg.space.q);
  put(j["space"], "t", cfg.space.t);
  put(j["space"], "theta", cfg.space.theta);
  put(j["space"], "p1", cfg.space.p1);
  put(j["space"], "p2", cfg.space.p2);
  put(j["space"], "p3", cfg.space.p3);
  put(j["space"], "gamma", cfg.space.gamma);
  put(j["space"], "alpha", cfg.space.alpha);
  put(j["space"], "s", cfg.space.s);
  put(j["space"], "a", cfg.space.a);
  if (cfg.omega) j["omega"] = nlohmann::json::parse(cfg.omega->to_json());
  if (cfg.v) j["v"] = nlohmann::json::parse(cfg.v->to_json());
  if (cfg.young) j["young"] = nlohmann::json::parse(cfg.young->to_json());
  j["corpus"]["kind"] = cfg.corpus.kind;
  j["corpus"]["count"] = cfg.corpus.count;
  j["corpus"]["seed"] = cfg.corpus.seed;
  j["policy"]["center_stride"] = cfg.policy.center_stride;
  j["policy"]["center_offset"] = cfg.policy.center_offset;
  j["policy"]["radii_per_octave"] = cfg.policy.radii_per_octave;
  j["policy"]["max_radius_factor"] = cfg.policy.max_radius_factor;
  j["domain"] = cfg.domain;
  j["jobs"] = cfg.jobs;
  j["out_dir"] = cfg.out_dir;
  return j.dump(2);
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    require(out.good(), ErrorCode::IOFailure, "cannot open " + tmp.string());
    out << text;
    out.flush();
    require(out.good(), ErrorCode::IOFailure, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  require(!ec, ErrorCode::IOFailure, "rename failed: " + ec.message());
}

void save_report_csv(const std::vector<ReportRow>& rows, const std::string& path) {
  std::string text = "experiment,kind,space,q,t,theta,p,alpha,gamma,h,family_size,lhs,rhs,ratio,flags\n";
  for (const ReportRow& r : rows) {
    text += r.experiment + ',' + r.kind + ',' + r.space + ',';
    text += format_double(r.q) + ',' + format_double(r.t) + ',' + format_double(r.theta) + ',';
    text += format_double(r.p) + ',' + format_double(r.alpha) + ',' + format_double(r.gamma) + ',';
    text += format_double(r.h) + ',' + std::to_string(r.family_size) + ',';
    text += format_double(r.lhs) + ',' + format_double(r.rhs) + ',' + format_double(r.ratio) + ',';
    text += r.flags + '\n';
  }
  write_text_atomic(path, text);
}

void save_report_json(const std::vector<ReportRow>& rows, const std::string& path) {
  nlohmann::json j = nlohmann::json::array();
  auto put = [](nlohmann::json& node, const char* key, double v) {
    if (std::isinf(v))
      node[key] = v > 0 ? "inf" : "-inf";
    else
      node[key] = v;
  };
  for (const ReportRow& r : rows) {
    nlohmann::json item;
    item["experiment"] = r.experiment;
    item["kind"] = r.kind;
    item["space"] = r.space;
    put(item, "q", r.q);
    put(item, "t", r.t);
    put(item, "theta", r.theta);
    put(item, "p", r.p);
    put(item, "alpha", r.alpha);
    put(item, "gamma", r.gamma);
    put(item, "h", r.h);
    item["family_size"] = r.family_size;
    put(item, "lhs", r.lhs);
    put(item, "rhs", r.rhs);
    put(item, "ratio", r.ratio);
    item["flags"] = r.flags;
    j.push_back(item);
  }
  write_text_atomic(path, j.dump(2));
}

namespace {

double parse_extended(const std::string& field, const std::string& path) {
  if (field == "inf") return kInf;
  if (field == "-inf") return -kInf;
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    require(used == field.size(), ErrorCode::ParseError, "bad number in " + path);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "bad number '" + field + "' in " + path);
  }
}

}  // namespace

std::vector<ReportRow> load_report_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::IOFailure, "cannot open " + path);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::ParseError, "empty report " + path);

  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    fields.push_back(cur);
    require(fields.size() == 15, ErrorCode::ParseError, "bad column count in " + path);
    ReportRow r;
    r.experiment = fields[0];
    r.kind = fields[1];
    r.space = fields[2];
    r.q = parse_extended(fields[3], path);
    r.t = parse_extended(fields[4], path);
    r.theta = parse_extended(fields[5], path);
    r.p = parse_extended(fields[6], path);
    r.alpha = parse_extended(fields[7], path);
    r.gamma = parse_extended(fields[8], path);
    r.h = parse_extended(fields[9], path);
    r.family_size = static_cast<std::size_t>(parse_extended(fields[10], path));
    r.lhs = parse_extended(fields[11], path);
    r.rhs = parse_extended(fields[12], path);
    r.ratio = parse_extended(fields[13], path);
    r.flags = fields[14];
    rows.push_back(r);
  }
  return rows;
}

std::string summarize_report(const std::vector<ReportRow>& rows) {
  if (rows.empty()) return "report: empty\n";
  std::vector<std::string> names;
  std::string text;
  for (const ReportRow& r : rows)
    if (std::find(names.begin(), names.end(), r.experiment) == names.end())
      names.push_back(r.experiment);
  for (const std::string& name : names) {
    std::size_t count = 0;
    double worst = 0.0;
    std::vector<std::string> flags;
    for (const ReportRow& r : rows) {
      if (r.experiment != name) continue;
      ++count;
      if (r.ratio > worst || std::isinf(r.ratio)) worst = r.ratio;
      if (!r.flags.empty() && std::find(flags.begin(), flags.end(), r.flags) == flags.end())
        flags.push_back(r.flags);
    }
    text += name + ": rows=" + std::to_string(count) + " max_ratio=" + format_double(worst);
    if (!flags.empty()) {
      text += " flags=";
      for (std::size_t i = 0; i < flags.size(); ++i) text += (i ? "|" : "") + flags[i];
    }
    text += '\n';
  }
  return text;
}

RunOutcome run_experiment(const RunConfig& cfg) {
  RunOutcome outcome;
  std::filesystem::create_directories(cfg.out_dir);
  if (cfg.experiment == "norm_transfer") {
    outcome.rows = run_norm_transfer(cfg);
  } else if (cfg.experiment == "weak_type") {
    outcome.rows = run_weak_type(cfg);
  } else if (cfg.experiment == "dichotomy") {
    outcome.rows = run_dichotomy(cfg);
  } else if (cfg.experiment == "good_lambda") {
    outcome.rows = run_good_lambda(cfg);
  } else if (cfg.experiment == "whitney") {
    outcome.rows = run_whitney(cfg);
  } else if (cfg.experiment == "kolmogorov") {
    outcome.rows = run_kolmogorov(cfg);
  } else {
    bad_config("experiment: unknown value '" + cfg.experiment + "'");
  }

  const std::filesystem::path base(cfg.out_dir);
  save_report_csv(outcome.rows, (base / "report.csv").string());
  save_report_json(outcome.rows, (base / "report.json").string());

  for (const ReportRow& r : outcome.rows) {
    const bool violated = r.flags.find("HypothesisViolated") != std::string::npos ||
                          r.flags.find("not_found") != std::string::npos ||
                          r.flags.find("gap_in_cover") != std::string::npos ||
                          r.flags.find("quarters_collide") != std::string::npos ||
                          r.flags.find("double_escapes") != std::string::npos ||
                          r.flags.find("quad_misses_complement") != std::string::npos;
    if (violated) outcome.exit_code = 2;
  }
  return outcome;
}

MeasureRatioCheck rh_measure_ratio_check(const WeightSpec& w, double s, const BallFamily& family,
                                         const GridFunction& layout, std::uint64_t seed,
                                         int samples_per_ball) {
  require(samples_per_ball >= 1, ErrorCode::InvalidArgument, "need at least one sample per ball");
  require(s > 1.0, ErrorCode::InvalidArgument, "reverse Holder index must exceed 1");

  MeasureRatioCheck check;
  check.rh = rh_constant(w, s, family).value;
  const std::vector<double> wv = w.eval_on_grid(layout);
  const double expo = std::isinf(s) ? 1.0 : 1.0 - 1.0 / s;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (const Ball& b : family.balls) {
    const CellSet cells = layout.cells_in_ball(b);
    if (cells.empty()) continue;
    double mass_b = 0.0;
    for (std::size_t i : cells) mass_b += wv[i];
    if (mass_b <= 0.0) continue;
    for (int rep = 0; rep < samples_per_ball; ++rep) {
      const double keep = frac(rng);
      double mass_e = 0.0;
      std::size_t count_e = 0;
      for (std::size_t i : cells)
        if (unit(rng) < keep) {
          mass_e += wv[i];
          ++count_e;
        }
      if (count_e == 0) continue;
      const double measure_ratio = static_cast<double>(count_e) / cells.size();
      const double value = (mass_e / mass_b) / std::pow(measure_ratio, expo);
      check.worst = std::max(check.worst, value);
    }
  }
  return check;
}

}  // namespace wnil

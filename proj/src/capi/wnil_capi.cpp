#include "wnil.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/experiments.hpp"
#include "core/geometry.hpp"
#include "core/good_lambda.hpp"
#include "core/grid_function.hpp"
#include "core/maximal.hpp"
#include "core/norms.hpp"
#include "core/operators.hpp"
#include "core/weights.hpp"
#include "core/whitney.hpp"
#include "core/young.hpp"
#include "json.hpp"

struct wnil_grid {
  wnil::GridFunction value;
};
struct wnil_weight {
  wnil::WeightSpec value;
};
struct wnil_young {
  wnil::YoungSpec value;
};
struct wnil_balls {
  wnil::BallFamily value;
};

namespace {

thread_local std::string g_last_error;

wnil_status map_code(wnil::ErrorCode code) {
  switch (code) {
    case wnil::ErrorCode::InvalidArgument: return WNIL_ERR_INVALID_ARGUMENT;
    case wnil::ErrorCode::EmptyBall: return WNIL_ERR_EMPTY_BALL;
    case wnil::ErrorCode::DegenerateBall: return WNIL_ERR_DEGENERATE_BALL;
    case wnil::ErrorCode::NonFiniteWeight: return WNIL_ERR_NON_FINITE_WEIGHT;
    case wnil::ErrorCode::BadPolicy: return WNIL_ERR_BAD_POLICY;
    case wnil::ErrorCode::ZeroAverage: return WNIL_ERR_ZERO_AVERAGE;
    case wnil::ErrorCode::ZeroMass: return WNIL_ERR_ZERO_MASS;
    case wnil::ErrorCode::NoConvergence: return WNIL_ERR_NO_CONVERGENCE;
    case wnil::ErrorCode::GridMismatch: return WNIL_ERR_GRID_MISMATCH;
    case wnil::ErrorCode::UncoveredPoint: return WNIL_ERR_UNCOVERED_POINT;
    case wnil::ErrorCode::HypothesisFailed: return WNIL_ERR_HYPOTHESIS_FAILED;
    case wnil::ErrorCode::NotProper: return WNIL_ERR_NOT_PROPER;
    case wnil::ErrorCode::EmptySet: return WNIL_ERR_EMPTY_SET;
    case wnil::ErrorCode::EmptySweep: return WNIL_ERR_EMPTY_SWEEP;
    case wnil::ErrorCode::ConfigInvalid: return WNIL_ERR_CONFIG_INVALID;
    case wnil::ErrorCode::IOFailure: return WNIL_ERR_IO_FAILURE;
    case wnil::ErrorCode::ParseError: return WNIL_ERR_PARSE_ERROR;
  }
  return WNIL_ERR_UNKNOWN;
}

template <typename Fn>
wnil_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return WNIL_OK;
  } catch (const wnil::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return WNIL_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown failure";
    return WNIL_ERR_UNKNOWN;
  }
}

void require_c(bool ok, const char* what) {
  wnil::require(ok, wnil::ErrorCode::InvalidArgument, what);
}

wnil::Box make_box(int dim, const double* lo, const double* hi) {
  require_c(dim == 1 || dim == 2, "dim must be 1 or 2");
  require_c(lo != nullptr && hi != nullptr, "box pointers are null");
  wnil::Box box;
  box.dim = dim;
  for (int a = 0; a < dim; ++a) {
    box.lo[a] = lo[a];
    box.hi[a] = hi[a];
  }
  return box;
}

char* dup_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  wnil::require(out != nullptr, wnil::ErrorCode::IOFailure, "allocation failed");
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

void constant_entry(const wnil::WeightConstantReport& report, double* value, int* is_infinite) {
  require_c(value != nullptr && is_infinite != nullptr, "null pointer argument");
  *value = report.value;
  *is_infinite = report.infinite ? 1 : 0;
}

}  // namespace

extern "C" {

const char* wnil_last_error(void) { return g_last_error.c_str(); }

void wnil_string_free(char* text) { std::free(text); }

/* ---- grids ---- */

wnil_status wnil_grid_create(int dim, const double* lo, const double* hi, double h,
                             const double* values, size_t count, wnil_grid** out) {
  return guarded([&] {
    require_c(out != nullptr, "out pointer is null");
    require_c(values != nullptr || count == 0, "values pointer is null");
    const wnil::Box box = make_box(dim, lo, hi);
    std::vector<double> data(values, values + count);
    *out = new wnil_grid{wnil::GridFunction(box, h, std::move(data))};
  });
}

wnil_status wnil_grid_load_csv(const char* path, wnil_grid** out) {
  return guarded([&] {
    require_c(path != nullptr && out != nullptr, "null pointer argument");
    *out = new wnil_grid{wnil::GridFunction::load_csv(path)};
  });
}

wnil_status wnil_grid_save_csv(const wnil_grid* grid, const char* path) {
  return guarded([&] {
    require_c(grid != nullptr && path != nullptr, "null pointer argument");
    grid->value.save_csv(path);
  });
}

wnil_status wnil_grid_load_json(const char* path, wnil_grid** out) {
  return guarded([&] {
    require_c(path != nullptr && out != nullptr, "null pointer argument");
    *out = new wnil_grid{wnil::GridFunction::load_json(path)};
  });
}

wnil_status wnil_grid_save_json(const wnil_grid* grid, const char* path) {
  return guarded([&] {
    require_c(grid != nullptr && path != nullptr, "null pointer argument");
    grid->value.save_json(path);
  });
}

wnil_status wnil_grid_info(const wnil_grid* grid, int* dim, double* lo, double* hi, double* h,
                           size_t* count) {
  return guarded([&] {
    require_c(grid != nullptr, "grid is null");
    const wnil::GridFunction& g = grid->value;
    if (dim) *dim = g.dim();
    for (int a = 0; a < g.dim(); ++a) {
      if (lo) lo[a] = g.box().lo[a];
      if (hi) hi[a] = g.box().hi[a];
    }
    if (h) *h = g.spacing();
    if (count) *count = g.size();
  });
}

wnil_status wnil_grid_values(const wnil_grid* grid, double* buffer, size_t count) {
  return guarded([&] {
    require_c(grid != nullptr && buffer != nullptr, "null pointer argument");
    require_c(count >= grid->value.size(), "buffer too small");
    const std::vector<double>& v = grid->value.values();
    std::memcpy(buffer, v.data(), v.size() * sizeof(double));
  });
}

void wnil_grid_free(wnil_grid* grid) { delete grid; }

/* ---- weights and Young functions ---- */

wnil_status wnil_weight_parse(const char* json, wnil_weight** out) {
  return guarded([&] {
    require_c(json != nullptr && out != nullptr, "null pointer argument");
    *out = new wnil_weight{wnil::WeightSpec::from_json(json)};
  });
}

wnil_status wnil_weight_eval(const wnil_weight* weight, const double* x, int dim, double clamp_h,
                             double* out) {
  return guarded([&] {
    require_c(weight != nullptr && x != nullptr && out != nullptr, "null pointer argument");
    require_c(dim == 1 || dim == 2, "dim must be 1 or 2");
    wnil::Point p{x[0], dim == 2 ? x[1] : 0.0};
    *out = weight->value.eval(p, clamp_h);
  });
}

void wnil_weight_free(wnil_weight* weight) { delete weight; }

wnil_status wnil_young_parse(const char* json, wnil_young** out) {
  return guarded([&] {
    require_c(json != nullptr && out != nullptr, "null pointer argument");
    *out = new wnil_young{wnil::YoungSpec::from_json(json)};
  });
}

wnil_status wnil_young_eval(const wnil_young* phi, double t, double* out) {
  return guarded([&] {
    require_c(phi != nullptr && out != nullptr, "null pointer argument");
    *out = phi->value.eval(t);
  });
}

wnil_status wnil_young_doubling(const wnil_young* phi, double* out) {
  return guarded([&] {
    require_c(phi != nullptr && out != nullptr, "null pointer argument");
    *out = wnil::doubling_constant(phi->value);
  });
}

wnil_status wnil_young_bump_integral(const wnil_young* phi, double p, double* value,
                                     int* diverged) {
  return guarded([&] {
    require_c(phi != nullptr && value != nullptr && diverged != nullptr,
              "null pointer argument");
    const wnil::BumpIntegral result = wnil::bump_integral(phi->value, p);
    *value = result.value;
    *diverged = result.diverges ? 1 : 0;
  });
}

void wnil_young_free(wnil_young* phi) { delete phi; }

/* ---- ball families ---- */

wnil_status wnil_balls_create(int dim, const double* lo, const double* hi, double h,
                              int center_stride, int center_offset, int radii_per_octave,
                              double max_radius_factor, wnil_balls** out) {
  return guarded([&] {
    require_c(out != nullptr, "out pointer is null");
    const wnil::Box box = make_box(dim, lo, hi);
    wnil::BallFamilyPolicy policy;
    policy.center_stride = center_stride;
    policy.center_offset = center_offset;
    policy.radii_per_octave = radii_per_octave;
    policy.max_radius_factor = max_radius_factor;
    *out = new wnil_balls{wnil::ball_family(box, h, policy)};
  });
}

wnil_status wnil_balls_count(const wnil_balls* balls, size_t* out) {
  return guarded([&] {
    require_c(balls != nullptr && out != nullptr, "null pointer argument");
    *out = balls->value.size();
  });
}

void wnil_balls_free(wnil_balls* balls) { delete balls; }

/* ---- weight constants ---- */

wnil_status wnil_ap_constant(const wnil_weight* w, double q, const wnil_balls* balls,
                             double* value, int* is_infinite) {
  return guarded([&] {
    require_c(w != nullptr && balls != nullptr, "null pointer argument");
    constant_entry(wnil::ap_constant(w->value, q, balls->value), value, is_infinite);
  });
}

wnil_status wnil_rh_constant(const wnil_weight* w, double s, const wnil_balls* balls,
                             double* value, int* is_infinite) {
  return guarded([&] {
    require_c(w != nullptr && balls != nullptr, "null pointer argument");
    constant_entry(wnil::rh_constant(w->value, s, balls->value), value, is_infinite);
  });
}

wnil_status wnil_two_weight_constant(const wnil_weight* w, const wnil_weight* v, double p,
                                     const wnil_balls* balls, double* value, int* is_infinite) {
  return guarded([&] {
    require_c(w != nullptr && v != nullptr && balls != nullptr, "null pointer argument");
    constant_entry(wnil::two_weight_ap(w->value, v->value, p, balls->value), value, is_infinite);
  });
}

wnil_status wnil_sawyer_constant(const wnil_weight* w, const wnil_weight* v, double p,
                                 const wnil_balls* balls, double* value, int* is_infinite) {
  return guarded([&] {
    require_c(w != nullptr && v != nullptr && balls != nullptr, "null pointer argument");
    const wnil::MaximalOp maximal = [](const wnil::GridFunction& g,
                                       const wnil::BallFamily& family) {
      return wnil::hl_maximal(g, family);
    };
    constant_entry(wnil::sawyer_sp(w->value, v->value, p, balls->value, maximal), value,
                   is_infinite);
  });
}

/* ---- norms ---- */

wnil_status wnil_lebesgue_norm(const wnil_grid* f, double p, double* out) {
  return guarded([&] {
    require_c(f != nullptr && out != nullptr, "null pointer argument");
    *out = wnil::lebesgue_norm(f->value, p);
  });
}

wnil_status wnil_lorentz_norm(const wnil_grid* f, double q, double t, double* out) {
  return guarded([&] {
    require_c(f != nullptr && out != nullptr, "null pointer argument");
    *out = wnil::lorentz_norm(f->value, q, t);
  });
}

wnil_status wnil_lorentz_morrey_norm(const wnil_grid* f, double q, double t, double theta,
                                     const wnil_balls* balls, double* out) {
  return guarded([&] {
    require_c(f != nullptr && balls != nullptr && out != nullptr, "null pointer argument");
    *out = wnil::lorentz_morrey_norm(f->value, q, t, theta, balls->value);
  });
}

wnil_status wnil_luxembourg_norm(const wnil_grid* f, const wnil_young* phi, double* out) {
  return guarded([&] {
    require_c(f != nullptr && phi != nullptr && out != nullptr, "null pointer argument");
    *out = wnil::luxembourg_norm(f->value.values(), phi->value);
  });
}

wnil_status wnil_variable_norm(const wnil_grid* f, const wnil_grid* exponents, double* out) {
  return guarded([&] {
    require_c(f != nullptr && exponents != nullptr && out != nullptr, "null pointer argument");
    const wnil::ExponentField field(exponents->value);
    *out = wnil::variable_norm(f->value, field);
  });
}

/* ---- operators ---- */

wnil_status wnil_maximal(const wnil_grid* f, const wnil_balls* balls, wnil_grid** out) {
  return guarded([&] {
    require_c(f != nullptr && balls != nullptr && out != nullptr, "null pointer argument");
    *out = new wnil_grid{wnil::hl_maximal(f->value, balls->value)};
  });
}

wnil_status wnil_fractional_maximal(const wnil_grid* f, double gamma, const wnil_balls* balls,
                                    wnil_grid** out) {
  return guarded([&] {
    require_c(f != nullptr && balls != nullptr && out != nullptr, "null pointer argument");
    *out = new wnil_grid{wnil::fractional_maximal(f->value, gamma, balls->value)};
  });
}

wnil_status wnil_cz_apply(const char* kernel_json, const wnil_grid* f, wnil_grid** out) {
  return guarded([&] {
    require_c(kernel_json != nullptr && f != nullptr && out != nullptr, "null pointer argument");
    const wnil::CZKernelSpec spec = wnil::CZKernelSpec::from_json(kernel_json);
    *out = new wnil_grid{wnil::cz_apply(spec, f->value)};
  });
}

wnil_status wnil_fractional_integral(const wnil_grid* f, double alpha, wnil_grid** out) {
  return guarded([&] {
    require_c(f != nullptr && out != nullptr, "null pointer argument");
    *out = new wnil_grid{wnil::fractional_integral(f->value, alpha)};
  });
}

wnil_status wnil_lp_g(const wnil_grid* f, wnil_grid** out) {
  return guarded([&] {
    require_c(f != nullptr && out != nullptr, "null pointer argument");
    *out = new wnil_grid{wnil::lp_g(f->value, wnil::LPProfile{})};
  });
}

wnil_status wnil_lusin_area(const wnil_grid* f, double aperture, wnil_grid** out) {
  return guarded([&] {
    require_c(f != nullptr && out != nullptr, "null pointer argument");
    *out = new wnil_grid{wnil::lusin_area(f->value, aperture, wnil::LPProfile{})};
  });
}

wnil_status wnil_weak_type_ratio(const wnil_grid* g, double denom, double* out) {
  return guarded([&] {
    require_c(g != nullptr && out != nullptr, "null pointer argument");
    *out = wnil::weak_type_ratio(g->value, denom);
  });
}

/* ---- covers ---- */

wnil_status wnil_whitney_cover(const wnil_grid* mask, const char* csv_path, size_t* ball_count,
                               int* max_overlap, int* proper) {
  return guarded([&] {
    require_c(mask != nullptr, "mask is null");
    const wnil::WhitneyCover cover = wnil::whitney_decompose(mask->value);
    const wnil::CoverCheck check = wnil::verify_cover(cover, mask->value);
    if (csv_path != nullptr) wnil::save_cover_csv(cover, mask->value.dim(), csv_path);
    if (ball_count) *ball_count = cover.balls.size();
    if (max_overlap) *max_overlap = check.max_overlap;
    if (proper)
      *proper = check.covers && check.quarter_disjoint && check.scaled_inside &&
                        check.touches_complement
                    ? 1
                    : 0;
  });
}

/* ---- level comparison certificate ---- */

wnil_status wnil_good_lambda(const wnil_grid* tf, const wnil_grid* f, const wnil_weight* omega,
                             const wnil_balls* balls, double p1, double p2, double gamma,
                             double a, double s, double* minimal_beta, double* kappa, int* found,
                             int* upward_closed) {
  return guarded([&] {
    require_c(tf != nullptr && f != nullptr && omega != nullptr && balls != nullptr,
              "null pointer argument");
    require_c(minimal_beta != nullptr && kappa != nullptr && found != nullptr &&
                  upward_closed != nullptr,
              "null output pointer");
    wnil::GoodLambdaParams params;
    params.p1 = p1;
    params.p2 = p2;
    params.gamma = gamma;
    params.a = a;
    params.s = s;
    const wnil::GoodLambdaTrace trace =
        wnil::good_lambda_trace(tf->value, f->value, omega->value, balls->value, params);
    *minimal_beta = trace.minimal_beta;
    *kappa = trace.kappa_at_minimal;
    *found = trace.found ? 1 : 0;
    *upward_closed = trace.upward_closed ? 1 : 0;
  });
}

/* ---- coarse experiment entries ---- */

wnil_status wnil_run_config_json(const char* config_json, int* exit_code) {
  return guarded([&] {
    require_c(config_json != nullptr && exit_code != nullptr, "null pointer argument");
    const wnil::RunConfig cfg = wnil::parse_run_config(config_json);
    *exit_code = wnil::run_experiment(cfg).exit_code;
  });
}

wnil_status wnil_run_config_file(const char* path, int* exit_code) {
  return guarded([&] {
    require_c(path != nullptr && exit_code != nullptr, "null pointer argument");
    const wnil::RunConfig cfg = wnil::load_run_config(path);
    *exit_code = wnil::run_experiment(cfg).exit_code;
  });
}

wnil_status wnil_corpus_generate(const char* kind, int count, uint64_t seed, int dim,
                                 const double* lo, const double* hi, double h,
                                 const char* out_dir, char** manifest_json) {
  return guarded([&] {
    require_c(kind != nullptr && out_dir != nullptr && manifest_json != nullptr,
              "null pointer argument");
    const wnil::Box box = make_box(dim, lo, hi);
    wnil::CorpusSpec spec;
    spec.kind = kind;
    spec.count = count;
    spec.seed = seed;
    const std::vector<wnil::GridFunction> corpus = wnil::make_corpus(box, h, spec);

    nlohmann::json manifest;
    manifest["kind"] = spec.kind;
    manifest["count"] = spec.count;
    manifest["seed"] = spec.seed;
    manifest["files"] = nlohmann::json::array();
    std::filesystem::create_directories(out_dir);
    for (std::size_t k = 0; k < corpus.size(); ++k) {
      const std::string name = "corpus_" + std::to_string(k) + ".csv";
      const std::string path = (std::filesystem::path(out_dir) / name).string();
      corpus[k].save_csv(path);
      manifest["files"].push_back(name);
    }
    *manifest_json = dup_string(manifest.dump(2));
  });
}

wnil_status wnil_report_summarize(const char* csv_path, char** summary_text) {
  return guarded([&] {
    require_c(csv_path != nullptr && summary_text != nullptr, "null pointer argument");
    const std::vector<wnil::ReportRow> rows = wnil::load_report_csv(csv_path);
    *summary_text = dup_string(wnil::summarize_report(rows));
  });
}

}  // extern "C"

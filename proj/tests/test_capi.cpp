// Exercises the shared-library surface exactly as an external caller would:
// only wnil.h, opaque handles, status codes, and flat buffers.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "wnil.h"

namespace {

std::string fresh_dir(const std::string& name) {
  const std::string dir = (std::filesystem::temp_directory_path() / name).string();
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

struct GridHandle {
  wnil_grid* g = nullptr;
  ~GridHandle() { wnil_grid_free(g); }
};

wnil_grid* make_grid_1d(double lo, double hi, double h, const std::vector<double>& values) {
  wnil_grid* g = nullptr;
  REQUIRE(wnil_grid_create(1, &lo, &hi, h, values.data(), values.size(), &g) == WNIL_OK);
  REQUIRE(g != nullptr);
  return g;
}

std::vector<double> grid_values(const wnil_grid* g) {
  int dim = 0;
  double lo[2], hi[2], h = 0.0;
  size_t count = 0;
  REQUIRE(wnil_grid_info(g, &dim, lo, hi, &h, &count) == WNIL_OK);
  std::vector<double> out(count);
  REQUIRE(wnil_grid_values(g, out.data(), out.size()) == WNIL_OK);
  return out;
}

}  // namespace

TEST_CASE("grid handles round trip through buffers and files") {
  const std::vector<double> vals{1.0, 2.0, 3.0, 4.0};
  GridHandle g;
  g.g = make_grid_1d(0.0, 1.0, 0.25, vals);

  int dim = 0;
  double lo[2], hi[2], h = 0.0;
  size_t count = 0;
  REQUIRE(wnil_grid_info(g.g, &dim, lo, hi, &h, &count) == WNIL_OK);
  CHECK(dim == 1);
  CHECK(lo[0] == 0.0);
  CHECK(hi[0] == 1.0);
  CHECK(h == 0.25);
  CHECK(count == 4);

  CHECK(grid_values(g.g) == vals);

  const std::string dir = fresh_dir("capi_grid_io");
  const std::string csv = dir + "/f.csv";
  const std::string json = dir + "/f.json";
  REQUIRE(wnil_grid_save_csv(g.g, csv.c_str()) == WNIL_OK);
  REQUIRE(wnil_grid_save_json(g.g, json.c_str()) == WNIL_OK);

  GridHandle back_csv, back_json;
  REQUIRE(wnil_grid_load_csv(csv.c_str(), &back_csv.g) == WNIL_OK);
  REQUIRE(wnil_grid_load_json(json.c_str(), &back_json.g) == WNIL_OK);
  CHECK(grid_values(back_csv.g) == vals);
  CHECK(grid_values(back_json.g) == vals);
}

TEST_CASE("grid construction failures set a status and a message") {
  wnil_grid* g = nullptr;
  const double lo = 0.0, hi = 1.0;
  const double vals[4] = {1.0, 2.0, 3.0, 4.0};

  CHECK(wnil_grid_create(1, &lo, &hi, -0.25, vals, 4, &g) == WNIL_ERR_INVALID_ARGUMENT);
  CHECK(g == nullptr);
  CHECK(std::strlen(wnil_last_error()) > 0);

  // value count must match the lattice
  CHECK(wnil_grid_create(1, &lo, &hi, 0.25, vals, 3, &g) == WNIL_ERR_INVALID_ARGUMENT);
  CHECK(wnil_grid_create(3, &lo, &hi, 0.25, vals, 4, &g) == WNIL_ERR_INVALID_ARGUMENT);

  CHECK(wnil_grid_load_csv("/nonexistent/nowhere.csv", &g) == WNIL_ERR_IO_FAILURE);

  const std::string dir = fresh_dir("capi_grid_bad");
  const std::string garbage = dir + "/garbage.json";
  std::ofstream(garbage) << "this is not json";
  CHECK(wnil_grid_load_json(garbage.c_str(), &g) == WNIL_ERR_PARSE_ERROR);

  GridHandle ok;
  ok.g = make_grid_1d(0.0, 1.0, 0.25, {1.0, 2.0, 3.0, 4.0});
  double buf[2];
  CHECK(wnil_grid_values(ok.g, buf, 2) == WNIL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("weights parse, evaluate, and report class constants") {
  wnil_weight* bad = nullptr;
  CHECK(wnil_weight_parse("{", &bad) == WNIL_ERR_PARSE_ERROR);
  CHECK(bad == nullptr);
  CHECK(std::strlen(wnil_last_error()) > 0);

  wnil_weight* pw = nullptr;
  REQUIRE(wnil_weight_parse(R"({"kind":"power","gamma":0.5,"center":[0.0]})", &pw) == WNIL_OK);
  double x = 4.0, val = 0.0;
  REQUIRE(wnil_weight_eval(pw, &x, 1, 0.0, &val) == WNIL_OK);
  CHECK(val == doctest::Approx(2.0).epsilon(1e-12));

  // two cells {1, 3} on [0,1], one ball covering both: the quadratic
  // class constant is avg(w) * avg(1/w) = 2 * 2/3
  wnil_weight* tab = nullptr;
  REQUIRE(wnil_weight_parse(
              R"({"kind":"tabulated","grid":{"dim":1,"box_lo":[0.0],"box_hi":[1.0],
                  "h":0.5,"values":[1.0,3.0]}})",
              &tab) == WNIL_OK);

  wnil_balls* balls = nullptr;
  const double lo = 0.0, hi = 1.0;
  REQUIRE(wnil_balls_create(1, &lo, &hi, 0.5, 100, 2, 1, 0.5, &balls) == WNIL_OK);
  size_t nb = 0;
  REQUIRE(wnil_balls_count(balls, &nb) == WNIL_OK);
  CHECK(nb == 1);

  double ap = 0.0;
  int inf_flag = -1;
  REQUIRE(wnil_ap_constant(tab, 2.0, balls, &ap, &inf_flag) == WNIL_OK);
  CHECK(ap == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
  CHECK(inf_flag == 0);

  double rh = 0.0;
  REQUIRE(wnil_rh_constant(tab, 2.0, balls, &rh, &inf_flag) == WNIL_OK);
  CHECK(rh == doctest::Approx(std::sqrt(5.0) / 2.0).epsilon(1e-13));

  double two = 0.0;
  REQUIRE(wnil_two_weight_constant(tab, tab, 2.0, balls, &two, &inf_flag) == WNIL_OK);
  CHECK(two == doctest::Approx(ap).epsilon(1e-13));

  // testing-function constant of the unit weight against itself is exactly 1
  wnil_weight* unit = nullptr;
  REQUIRE(wnil_weight_parse(R"({"kind":"constant","c":1.0})", &unit) == WNIL_OK);
  double sawyer = 0.0;
  REQUIRE(wnil_sawyer_constant(unit, unit, 2.0, balls, &sawyer, &inf_flag) == WNIL_OK);
  CHECK(sawyer == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(inf_flag == 0);

  wnil_weight_free(pw);
  wnil_weight_free(tab);
  wnil_weight_free(unit);
  wnil_balls_free(balls);
}

TEST_CASE("ball family construction rejects a broken policy") {
  wnil_balls* balls = nullptr;
  const double lo = 0.0, hi = 1.0;
  CHECK(wnil_balls_create(1, &lo, &hi, 0.25, 2, 1, 0, 1.0, &balls) == WNIL_ERR_BAD_POLICY);
  CHECK(balls == nullptr);
}

TEST_CASE("young handles evaluate and classify tail integrals") {
  wnil_young* pow2 = nullptr;
  REQUIRE(wnil_young_parse(R"({"kind":"power","p":2.0})", &pow2) == WNIL_OK);
  double v = 0.0;
  REQUIRE(wnil_young_eval(pow2, 3.0, &v) == WNIL_OK);
  CHECK(v == doctest::Approx(9.0).epsilon(1e-14));
  double d = 0.0;
  REQUIRE(wnil_young_doubling(pow2, &d) == WNIL_OK);
  CHECK(d == doctest::Approx(4.0).epsilon(1e-12));

  // the bare conjugate power sits exactly on the divergence line at p = 2
  double integral = 0.0;
  int diverged = -1;
  REQUIRE(wnil_young_bump_integral(pow2, 2.0, &integral, &diverged) == WNIL_OK);
  CHECK(diverged == 1);

  wnil_young* bump = nullptr;
  REQUIRE(wnil_young_parse(R"({"kind":"log_bump","p_prime":2.0,"delta":1.0})", &bump) == WNIL_OK);
  REQUIRE(wnil_young_bump_integral(bump, 2.0, &integral, &diverged) == WNIL_OK);
  CHECK(diverged == 0);
  CHECK(integral > 0.0);

  CHECK(wnil_young_parse(R"({"kind":"power","p":0.5})", &bump) == WNIL_ERR_INVALID_ARGUMENT);

  wnil_young_free(pow2);
  wnil_young_free(bump);
}

TEST_CASE("norms agree with closed forms through the flat interface") {
  // two cells {1, 3} on [0,1]
  GridHandle f;
  f.g = make_grid_1d(0.0, 1.0, 0.5, {1.0, 3.0});

  double leb = 0.0;
  REQUIRE(wnil_lebesgue_norm(f.g, 2.0, &leb) == WNIL_OK);
  CHECK(leb == doctest::Approx(std::sqrt(5.0)).epsilon(1e-13));

  double lor = 0.0;
  REQUIRE(wnil_lorentz_norm(f.g, 2.0, 2.0, &lor) == WNIL_OK);
  CHECK(lor == doctest::Approx(leb).epsilon(1e-12));

  wnil_balls* balls = nullptr;
  const double lo = 0.0, hi = 1.0;
  REQUIRE(wnil_balls_create(1, &lo, &hi, 0.5, 100, 2, 1, 0.5, &balls) == WNIL_OK);
  double lm = 0.0;
  REQUIRE(wnil_lorentz_morrey_norm(f.g, 2.0, 2.0, 1.0, balls, &lm) == WNIL_OK);
  CHECK(lm == doctest::Approx(lor).epsilon(1e-12));
  wnil_balls_free(balls);

  GridHandle flat;
  flat.g = make_grid_1d(0.0, 1.0, 0.5, {2.0, 2.0});
  wnil_young* phi = nullptr;
  REQUIRE(wnil_young_parse(R"({"kind":"power","p":2.0})", &phi) == WNIL_OK);
  double lux = 0.0;
  REQUIRE(wnil_luxembourg_norm(flat.g, phi, &lux) == WNIL_OK);
  CHECK(lux == doctest::Approx(2.0).epsilon(1e-10));
  wnil_young_free(phi);

  GridHandle expo;
  expo.g = make_grid_1d(0.0, 1.0, 0.5, {2.0, 2.0});
  double var = 0.0;
  REQUIRE(wnil_variable_norm(f.g, expo.g, &var) == WNIL_OK);
  CHECK(var == doctest::Approx(leb).epsilon(1e-8));

  GridHandle wrong;
  wrong.g = make_grid_1d(0.0, 1.0, 0.25, {2.0, 2.0, 2.0, 2.0});
  CHECK(wnil_variable_norm(f.g, wrong.g, &var) == WNIL_ERR_GRID_MISMATCH);
}

TEST_CASE("maximal operator dominates the input and flags coverage holes") {
  const int n = 32;
  std::vector<double> vals(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) / static_cast<double>(n);
    vals[i] = x > 0.25 && x < 0.5 ? 2.0 : 0.5;
  }
  GridHandle f;
  f.g = make_grid_1d(0.0, 1.0, 1.0 / n, vals);

  wnil_balls* balls = nullptr;
  const double lo = 0.0, hi = 1.0;
  REQUIRE(wnil_balls_create(1, &lo, &hi, 1.0 / n, 2, 1, 1, 1.0, &balls) == WNIL_OK);

  wnil_grid* mg = nullptr;
  REQUIRE(wnil_maximal(f.g, balls, &mg) == WNIL_OK);
  const std::vector<double> mvals = grid_values(mg);
  REQUIRE(mvals.size() == vals.size());
  for (int i = 0; i < n; ++i) CHECK(mvals[i] >= std::fabs(vals[i]) - 1e-12);
  wnil_grid_free(mg);

  wnil_grid* fg = nullptr;
  REQUIRE(wnil_fractional_maximal(f.g, 0.5, balls, &fg) == WNIL_OK);
  wnil_grid_free(fg);
  wnil_balls_free(balls);

  // a sparse family leaves cells no ball can see
  wnil_balls* sparse = nullptr;
  REQUIRE(wnil_balls_create(1, &lo, &hi, 1.0 / n, 1000, 2, 1, 0.125, &sparse) == WNIL_OK);
  wnil_grid* bad = nullptr;
  CHECK(wnil_maximal(f.g, sparse, &bad) == WNIL_ERR_UNCOVERED_POINT);
  CHECK(bad == nullptr);
  wnil_balls_free(sparse);
}

TEST_CASE("kernel transform is antisymmetric through the buffer interface") {
  const int n = 32;
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) {
    const double x = -1.0 + (i + 0.5) / 16.0;
    vals[i] = std::exp(-x * x) + 0.25 * x;
  }
  GridHandle f;
  f.g = make_grid_1d(-1.0, 1.0, 1.0 / 16.0, vals);

  wnil_grid* tf = nullptr;
  REQUIRE(wnil_cz_apply(R"({"kind":"hilbert"})", f.g, &tf) == WNIL_OK);
  const std::vector<double> tvals = grid_values(tf);
  wnil_grid_free(tf);

  double pairing = 0.0, scale = 0.0;
  for (int i = 0; i < n; ++i) {
    pairing += tvals[i] * vals[i];
    scale += std::fabs(tvals[i] * vals[i]);
  }
  CHECK(std::fabs(pairing) <= 1e-10 * (scale + 1.0));

  CHECK(wnil_cz_apply(R"({"kind":"riesz","component":3})", f.g, &tf) ==
        WNIL_ERR_INVALID_ARGUMENT);

  wnil_grid* frac = nullptr;
  REQUIRE(wnil_fractional_integral(f.g, 0.5, &frac) == WNIL_OK);
  wnil_grid_free(frac);
  CHECK(wnil_fractional_integral(f.g, 1.0, &frac) == WNIL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("square functions come back on a padded nonnegative grid") {
  const int n = 16;
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) {
    const double x = -1.0 + (i + 0.5) / 8.0;
    vals[i] = std::exp(-4.0 * x * x);
  }
  GridHandle f;
  f.g = make_grid_1d(-1.0, 1.0, 0.125, vals);

  wnil_grid* g = nullptr;
  REQUIRE(wnil_lp_g(f.g, &g) == WNIL_OK);
  const std::vector<double> gv = grid_values(g);
  CHECK(gv.size() > vals.size());
  double peak = 0.0;
  for (double v : gv) {
    CHECK(v >= 0.0);
    peak = std::max(peak, v);
  }
  CHECK(peak > 0.0);
  wnil_grid_free(g);

  wnil_grid* area = nullptr;
  REQUIRE(wnil_lusin_area(f.g, 1.0, &area) == WNIL_OK);
  wnil_grid_free(area);
  CHECK(wnil_lusin_area(f.g, 0.5, &area) == WNIL_ERR_INVALID_ARGUMENT);

  double ratio = 0.0;
  GridHandle step;
  step.g = make_grid_1d(0.0, 1.0, 0.5, {1.0, 0.0});
  REQUIRE(wnil_weak_type_ratio(step.g, 1.0, &ratio) == WNIL_OK);
  CHECK(ratio == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(wnil_weak_type_ratio(step.g, 0.0, &ratio) == WNIL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("whitney cover audit passes and writes its table") {
  const int n = 64;
  std::vector<double> vals(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double x = -0.5 + (i + 0.5) * (2.0 / n);
    vals[i] = x > 0.0 && x < 1.0 ? 1.0 : 0.0;
  }
  GridHandle mask;
  mask.g = make_grid_1d(-0.5, 1.5, 2.0 / n, vals);

  const std::string dir = fresh_dir("capi_whitney");
  const std::string csv = dir + "/cover.csv";
  size_t ball_count = 0;
  int overlap = 0, proper = 0;
  REQUIRE(wnil_whitney_cover(mask.g, csv.c_str(), &ball_count, &overlap, &proper) == WNIL_OK);
  CHECK(ball_count > 0);
  CHECK(overlap >= 1);
  CHECK(overlap <= 4);
  CHECK(proper == 1);
  CHECK(std::filesystem::exists(csv));

  // csv_path is optional
  REQUIRE(wnil_whitney_cover(mask.g, nullptr, &ball_count, &overlap, &proper) == WNIL_OK);

  GridHandle full;
  full.g = make_grid_1d(0.0, 1.0, 0.25, {1.0, 1.0, 1.0, 1.0});
  CHECK(wnil_whitney_cover(full.g, nullptr, &ball_count, &overlap, &proper) ==
        WNIL_ERR_NOT_PROPER);
}

TEST_CASE("level comparison certificate search succeeds end to end") {
  const int n = 128;
  std::vector<double> vals(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double x = -4.0 + (i + 0.5) / 16.0;
    vals[i] = std::fabs(x) < 0.5 ? 1.0 : 0.0;
  }
  GridHandle f;
  f.g = make_grid_1d(-4.0, 4.0, 1.0 / 16.0, vals);

  wnil_grid* tf = nullptr;
  REQUIRE(wnil_cz_apply(R"({"kind":"hilbert"})", f.g, &tf) == WNIL_OK);

  wnil_weight* omega = nullptr;
  REQUIRE(wnil_weight_parse(R"({"kind":"power","gamma":0.5,"center":[0.0]})", &omega) == WNIL_OK);

  wnil_balls* balls = nullptr;
  const double lo = -4.0, hi = 4.0;
  REQUIRE(wnil_balls_create(1, &lo, &hi, 1.0 / 16.0, 2, 1, 1, 1.0, &balls) == WNIL_OK);

  double beta = 0.0, kappa = 0.0;
  int found = 0, upward = 0;
  REQUIRE(wnil_good_lambda(tf, f.g, omega, balls, 0.5, 1.0, 0.0, 2.0, 2.0, &beta, &kappa, &found,
                           &upward) == WNIL_OK);
  CHECK(found == 1);
  CHECK(upward == 1);
  CHECK(beta > 1.0);
  CHECK(beta <= 1024.0);
  CHECK(kappa <= 1.0);
  CHECK(kappa > 0.0);

  wnil_grid_free(tf);
  wnil_weight_free(omega);
  wnil_balls_free(balls);
}

TEST_CASE("configured runs execute and reports summarize") {
  int exit_code = -1;
  CHECK(wnil_run_config_json(R"({"experiment":"frobnicate"})", &exit_code) ==
        WNIL_ERR_CONFIG_INVALID);
  CHECK(std::string(wnil_last_error()).find("experiment") != std::string::npos);

  const std::string out = fresh_dir("capi_run");
  const std::string cfg = std::string(R"({
    "experiment": "norm_transfer",
    "dim": 1,
    "box": {"lo": [-2.0], "hi": [2.0]},
    "h": 0.25,
    "op": "hilbert",
    "p": 2.0,
    "corpus": {"kind": "mixed", "count": 2, "seed": 5},
    "policy": {"center_stride": 2, "center_offset": 1,
               "radii_per_octave": 1, "max_radius_factor": 1.0},
    "out_dir": ")") + out + "\"}";
  REQUIRE(wnil_run_config_json(cfg.c_str(), &exit_code) == WNIL_OK);
  CHECK(exit_code == 0);
  const std::string report = out + "/report.csv";
  REQUIRE(std::filesystem::exists(report));
  CHECK(std::filesystem::exists(out + "/report.json"));

  char* summary = nullptr;
  REQUIRE(wnil_report_summarize(report.c_str(), &summary) == WNIL_OK);
  REQUIRE(summary != nullptr);
  CHECK(std::string(summary).find("norm_transfer") != std::string::npos);
  wnil_string_free(summary);

  // config can also arrive through a file
  const std::string cfg_path = out + "/run.json";
  std::ofstream(cfg_path) << cfg;
  REQUIRE(wnil_run_config_file(cfg_path.c_str(), &exit_code) == WNIL_OK);
  CHECK(exit_code == 0);
  CHECK(wnil_run_config_file("/nonexistent/run.json", &exit_code) == WNIL_ERR_IO_FAILURE);
}

TEST_CASE("corpus generation writes files and a manifest") {
  const std::string out = fresh_dir("capi_corpus");
  const double lo = 0.0, hi = 1.0;
  char* manifest = nullptr;
  REQUIRE(wnil_corpus_generate("mixed", 2, 5, 1, &lo, &hi, 0.25, out.c_str(), &manifest) ==
          WNIL_OK);
  REQUIRE(manifest != nullptr);
  const std::string text(manifest);
  wnil_string_free(manifest);
  CHECK(text.find("files") != std::string::npos);
  CHECK(text.find("corpus_0.csv") != std::string::npos);
  CHECK(std::filesystem::exists(out + "/corpus_0.csv"));
  CHECK(std::filesystem::exists(out + "/corpus_1.csv"));

  CHECK(wnil_corpus_generate("noise", 2, 5, 1, &lo, &hi, 0.25, out.c_str(), &manifest) ==
        WNIL_ERR_INVALID_ARGUMENT);
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/corpus.hpp"
#include "core/decompositions.hpp"
#include "core/geometry.hpp"
#include "core/norms.hpp"
#include "core/weights.hpp"
#include "core/young.hpp"

namespace wnil {

// One experiment run, parsed from a JSON config. Unknown experiments,
// mismatched operator dimensions, bad exponent relations and malformed
// sub-objects all raise ConfigInvalid naming the offending key.
struct RunConfig {
  std::string experiment = "norm_transfer";
  int dim = 1;
  Box box{1, {-4.0, -4.0}, {4.0, 4.0}};
  double h = 0.125;
  std::string op = "hilbert";   // hilbert riesz1 riesz2 lp_g lp_area fractional maximal
  double alpha = 0.5;           // fractional order
  double aperture = 1.0;
  double p = 2.0;               // source Lebesgue exponent
  SpaceParams space;
  std::optional<WeightSpec> omega;
  std::optional<WeightSpec> v;
  std::optional<YoungSpec> young;
  CorpusSpec corpus;
  BallFamilyPolicy policy;
  std::string domain = "interval";   // whitney runs: interval | disc
  int jobs = 1;
  std::string out_dir = "out";
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);
std::string run_config_to_json(const RunConfig& cfg);

struct ReportRow {
  std::string experiment;
  std::string kind;
  std::string space;
  double q = 0, t = 0, theta = 0, p = 0, alpha = 0, gamma = 0, h = 0;
  std::size_t family_size = 0;
  double lhs = 0, rhs = 0, ratio = 0;
  std::string flags;   // semicolon-separated annotations
};

// report.csv column order is frozen:
// experiment,kind,space,q,t,theta,p,alpha,gamma,h,family_size,lhs,rhs,ratio,flags
void save_report_csv(const std::vector<ReportRow>& rows, const std::string& path);
void save_report_json(const std::vector<ReportRow>& rows, const std::string& path);
std::vector<ReportRow> load_report_csv(const std::string& path);
std::string summarize_report(const std::vector<ReportRow>& rows);

// Writes through a temp file in the same directory, then renames.
void write_text_atomic(const std::string& path, const std::string& text);

struct RunOutcome {
  std::vector<ReportRow> rows;
  int exit_code = 0;   // 0 clean, 2 completed with violations flagged
};

// Dispatches on cfg.experiment, writes report.csv and report.json under
// cfg.out_dir. Throws on configuration or numeric errors (CLI maps those
// to exit code 1).
RunOutcome run_experiment(const RunConfig& cfg);

// Measure-ratio side of a reverse Holder bound: for random cell subsets E of
// family balls B, the largest (w(E)/w(B)) / (|E|/|B|)^{1 - 1/s}.
struct MeasureRatioCheck {
  double worst = 0.0;
  double rh = 0.0;   // reverse Holder constant of w at s over the family
};
MeasureRatioCheck rh_measure_ratio_check(const WeightSpec& w, double s, const BallFamily& family,
                                         const GridFunction& layout, std::uint64_t seed,
                                         int samples_per_ball = 4);

}  // namespace wnil

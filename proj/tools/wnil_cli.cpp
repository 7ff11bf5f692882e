// Command line front end. All numerics go through the shared library's C
// interface; this file only parses arguments, shuffles JSON and prints.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wnil.h"

namespace {

int fail_with(const std::string& context) {
  std::cerr << "error: " << context;
  const char* detail = wnil_last_error();
  if (detail != nullptr && detail[0] != '\0') std::cerr << ": " << detail;
  std::cerr << "\n";
  return 1;
}

std::string slurp(const std::string& path, bool& ok) {
  std::ifstream in(path);
  if (!in.good()) {
    ok = false;
    return {};
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  ok = true;
  return buffer.str();
}

struct GridHandle {
  wnil_grid* ptr = nullptr;
  ~GridHandle() { wnil_grid_free(ptr); }
};
struct WeightHandle {
  wnil_weight* ptr = nullptr;
  ~WeightHandle() { wnil_weight_free(ptr); }
};
struct BallsHandle {
  wnil_balls* ptr = nullptr;
  ~BallsHandle() { wnil_balls_free(ptr); }
};

struct FamilyArgs {
  int stride = 1;
  int offset = 0;
  int per_octave = 1;
  double max_factor = 1.0;
};

void add_family_flags(CLI::App* cmd, FamilyArgs& args) {
  cmd->add_option("--stride", args.stride, "center lattice stride");
  cmd->add_option("--offset", args.offset, "center lattice offset");
  cmd->add_option("--radii-per-octave", args.per_octave, "radius subdivisions per doubling");
  cmd->add_option("--max-radius-factor", args.max_factor, "radius cap as a diameter fraction");
}

bool build_family_for_grid(const wnil_grid* grid, const FamilyArgs& args, BallsHandle& out) {
  int dim = 0;
  double lo[2] = {0, 0}, hi[2] = {0, 0}, h = 0;
  size_t count = 0;
  if (wnil_grid_info(grid, &dim, lo, hi, &h, &count) != WNIL_OK) return false;
  return wnil_balls_create(dim, lo, hi, h, args.stride, args.offset, args.per_octave,
                           args.max_factor, &out.ptr) == WNIL_OK;
}

// run and goodlambda share the config plumbing
int run_from_config(const std::string& config_path, const std::string& out_override,
                    int jobs_override, std::uint64_t seed_override,
                    const std::string& forced_experiment, bool echo) {
  bool ok = false;
  const std::string text = slurp(config_path, ok);
  if (!ok) {
    std::cerr << "error: cannot read " << config_path << "\n";
    return 1;
  }
  nlohmann::json config;
  try {
    config = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: config is not valid json: " << e.what() << "\n";
    return 1;
  }
  if (!forced_experiment.empty()) config["experiment"] = forced_experiment;
  if (!out_override.empty()) config["out_dir"] = out_override;
  if (const char* env_out = std::getenv("WNIL_OUT"); env_out != nullptr && out_override.empty())
    config["out_dir"] = env_out;
  if (jobs_override > 0) config["jobs"] = jobs_override;
  if (seed_override != 0) config["corpus"]["seed"] = seed_override;

  if (echo) std::cout << config.dump(2) << "\n";

  int exit_code = 0;
  if (wnil_run_config_json(config.dump().c_str(), &exit_code) != WNIL_OK)
    return fail_with("run failed");
  const std::string out_dir = config.value("out_dir", std::string("out"));
  std::cout << "report written to " << out_dir << "/report.csv (exit " << exit_code << ")\n";
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted norm inequality laboratory"};
  app.require_subcommand(1);

  // ---- run ----
  std::string run_config, run_out;
  int run_jobs = 0;
  std::uint64_t run_seed = 0;
  bool run_echo = false;
  CLI::App* run = app.add_subcommand("run", "run one configured experiment");
  run->add_option("--config", run_config, "config json path")->required();
  run->add_option("--out", run_out, "output directory override");
  run->add_option("--jobs", run_jobs, "worker thread count");
  run->add_option("--seed", run_seed, "corpus seed override");
  run->add_flag("--json", run_echo, "echo the effective config");

  // ---- goodlambda ----
  std::string gl_config, gl_out;
  std::uint64_t gl_seed = 0;
  bool gl_echo = false;
  CLI::App* gl = app.add_subcommand("goodlambda", "level comparison certificate search");
  gl->add_option("--config", gl_config, "config json path")->required();
  gl->add_option("--out", gl_out, "output directory override");
  gl->add_option("--seed", gl_seed, "corpus seed override");
  gl->add_flag("--json", gl_echo, "echo the effective config");

  // ---- corpus ----
  std::string corpus_kind = "mixed", corpus_out = "out";
  int corpus_count = 20, corpus_dim = 1;
  std::uint64_t corpus_seed = 1;
  std::vector<double> corpus_lo{-4.0}, corpus_hi{4.0};
  double corpus_h = 0.125;
  CLI::App* corpus = app.add_subcommand("corpus", "generate deterministic test functions");
  corpus->add_option("--kind", corpus_kind, "bumps indicators bandlimited or mixed");
  corpus->add_option("--count", corpus_count, "number of functions");
  corpus->add_option("--seed", corpus_seed, "generator seed");
  corpus->add_option("--dim", corpus_dim, "1 or 2");
  corpus->add_option("--lo", corpus_lo, "box lower corner")->expected(1, 2);
  corpus->add_option("--hi", corpus_hi, "box upper corner")->expected(1, 2);
  corpus->add_option("--cell", corpus_h, "cell width");
  corpus->add_option("--out", corpus_out, "output directory");

  // ---- report ----
  std::string report_in;
  CLI::App* report = app.add_subcommand("report", "summarize a report.csv");
  report->add_option("--in", report_in, "report csv path")->required();

  // ---- norm ----
  std::string norm_in, norm_space = "lebesgue";
  double norm_p = 2.0, norm_q = 2.0, norm_t = 2.0, norm_theta = 1.0;
  FamilyArgs norm_family;
  bool norm_json = false;
  CLI::App* norm = app.add_subcommand("norm", "evaluate a norm of a stored grid function");
  norm->add_option("--in", norm_in, "grid csv path")->required();
  norm->add_option("--space", norm_space, "lebesgue lorentz or lorentz_morrey");
  norm->add_option("--p", norm_p, "lebesgue exponent");
  norm->add_option("--q", norm_q, "first lorentz exponent");
  norm->add_option("--t", norm_t, "second lorentz exponent");
  norm->add_option("--theta", norm_theta, "morrey scale");
  add_family_flags(norm, norm_family);
  norm->add_flag("--json", norm_json, "print a json object");

  // ---- ap ----
  std::string ap_weight, ap_weight_file, ap_dual, ap_dual_file;
  double ap_q = 2.0, ap_rh = 0.0, ap_sawyer = 0.0;
  int ap_dim = 1;
  std::vector<double> ap_lo{-1.0}, ap_hi{1.0};
  double ap_h = 0.0625;
  FamilyArgs ap_family;
  bool ap_json = false;
  CLI::App* ap = app.add_subcommand("ap", "weight class constants over a ball family");
  ap->add_option("--weight", ap_weight, "weight spec json");
  ap->add_option("--weight-file", ap_weight_file, "weight spec json path");
  ap->add_option("--q", ap_q, "class exponent");
  ap->add_option("--rh-s", ap_rh, "also report the reverse Holder constant at this s");
  ap->add_option("--two-weight", ap_dual, "second weight json for the joint constant");
  ap->add_option("--two-weight-file", ap_dual_file, "second weight json path");
  ap->add_option("--sawyer-p", ap_sawyer, "also report the testing constant at this p");
  ap->add_option("--dim", ap_dim, "1 or 2");
  ap->add_option("--lo", ap_lo, "box lower corner")->expected(1, 2);
  ap->add_option("--hi", ap_hi, "box upper corner")->expected(1, 2);
  ap->add_option("--cell", ap_h, "cell width");
  add_family_flags(ap, ap_family);
  ap->add_flag("--json", ap_json, "print a json object");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed())
    return run_from_config(run_config, run_out, run_jobs, run_seed, "", run_echo);
  if (gl->parsed())
    return run_from_config(gl_config, gl_out, 0, gl_seed, "good_lambda", gl_echo);

  if (corpus->parsed()) {
    if (const char* env_out = std::getenv("WNIL_OUT");
        env_out != nullptr && corpus->count("--out") == 0)
      corpus_out = env_out;
    corpus_lo.resize(corpus_dim, corpus_lo.empty() ? -4.0 : corpus_lo[0]);
    corpus_hi.resize(corpus_dim, corpus_hi.empty() ? 4.0 : corpus_hi[0]);
    char* manifest = nullptr;
    if (wnil_corpus_generate(corpus_kind.c_str(), corpus_count, corpus_seed, corpus_dim,
                             corpus_lo.data(), corpus_hi.data(), corpus_h, corpus_out.c_str(),
                             &manifest) != WNIL_OK)
      return fail_with("corpus generation failed");
    std::cout << manifest << "\n";
    wnil_string_free(manifest);
    return 0;
  }

  if (report->parsed()) {
    char* summary = nullptr;
    if (wnil_report_summarize(report_in.c_str(), &summary) != WNIL_OK)
      return fail_with("cannot summarize " + report_in);
    std::cout << summary;
    wnil_string_free(summary);
    return 0;
  }

  if (norm->parsed()) {
    GridHandle grid;
    if (wnil_grid_load_csv(norm_in.c_str(), &grid.ptr) != WNIL_OK)
      return fail_with("cannot load " + norm_in);
    double value = 0.0;
    wnil_status status = WNIL_OK;
    if (norm_space == "lebesgue") {
      status = wnil_lebesgue_norm(grid.ptr, norm_p, &value);
    } else if (norm_space == "lorentz") {
      status = wnil_lorentz_norm(grid.ptr, norm_q, norm_t, &value);
    } else if (norm_space == "lorentz_morrey") {
      BallsHandle balls;
      if (!build_family_for_grid(grid.ptr, norm_family, balls))
        return fail_with("cannot build the ball family");
      status = wnil_lorentz_morrey_norm(grid.ptr, norm_q, norm_t, norm_theta, balls.ptr, &value);
    } else {
      std::cerr << "error: unknown space '" << norm_space << "'\n";
      return 1;
    }
    if (status != WNIL_OK) return fail_with("norm evaluation failed");
    if (norm_json) {
      nlohmann::json out;
      out["space"] = norm_space;
      out["value"] = value;
      std::cout << out.dump() << "\n";
    } else {
      std::printf("%.12g\n", value);
    }
    return 0;
  }

  if (ap->parsed()) {
    std::string weight_json = ap_weight;
    if (!ap_weight_file.empty()) {
      bool ok = false;
      weight_json = slurp(ap_weight_file, ok);
      if (!ok) {
        std::cerr << "error: cannot read " << ap_weight_file << "\n";
        return 1;
      }
    }
    if (weight_json.empty()) {
      std::cerr << "error: provide --weight or --weight-file\n";
      return 1;
    }
    WeightHandle weight;
    if (wnil_weight_parse(weight_json.c_str(), &weight.ptr) != WNIL_OK)
      return fail_with("cannot parse the weight");

    ap_lo.resize(ap_dim, ap_lo.empty() ? -1.0 : ap_lo[0]);
    ap_hi.resize(ap_dim, ap_hi.empty() ? 1.0 : ap_hi[0]);
    BallsHandle balls;
    if (wnil_balls_create(ap_dim, ap_lo.data(), ap_hi.data(), ap_h, ap_family.stride,
                          ap_family.offset, ap_family.per_octave, ap_family.max_factor,
                          &balls.ptr) != WNIL_OK)
      return fail_with("cannot build the ball family");

    nlohmann::json out;
    double value = 0.0;
    int infinite = 0;
    if (wnil_ap_constant(weight.ptr, ap_q, balls.ptr, &value, &infinite) != WNIL_OK)
      return fail_with("class constant failed");
    out["ap"] = infinite ? nlohmann::json("inf") : nlohmann::json(value);

    if (ap_rh > 0.0) {
      if (wnil_rh_constant(weight.ptr, ap_rh, balls.ptr, &value, &infinite) != WNIL_OK)
        return fail_with("reverse Holder constant failed");
      out["rh"] = infinite ? nlohmann::json("inf") : nlohmann::json(value);
    }

    std::string dual_json = ap_dual;
    if (!ap_dual_file.empty()) {
      bool ok = false;
      dual_json = slurp(ap_dual_file, ok);
      if (!ok) {
        std::cerr << "error: cannot read " << ap_dual_file << "\n";
        return 1;
      }
    }
    if (!dual_json.empty()) {
      WeightHandle dual;
      if (wnil_weight_parse(dual_json.c_str(), &dual.ptr) != WNIL_OK)
        return fail_with("cannot parse the second weight");
      if (wnil_two_weight_constant(weight.ptr, dual.ptr, ap_q, balls.ptr, &value, &infinite) !=
          WNIL_OK)
        return fail_with("joint constant failed");
      out["two_weight"] = infinite ? nlohmann::json("inf") : nlohmann::json(value);
      if (ap_sawyer > 1.0) {
        if (wnil_sawyer_constant(weight.ptr, dual.ptr, ap_sawyer, balls.ptr, &value, &infinite) !=
            WNIL_OK)
          return fail_with("testing constant failed");
        out["sawyer"] = infinite ? nlohmann::json("inf") : nlohmann::json(value);
      }
    }

    if (ap_json) {
      std::cout << out.dump() << "\n";
    } else {
      for (const auto& [key, val] : out.items())
        std::cout << key << " = " << (val.is_string() ? val.get<std::string>()
                                                      : std::to_string(val.get<double>()))
                  << "\n";
    }
    return 0;
  }

  return 0;
}

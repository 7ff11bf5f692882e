#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/geometry.hpp"
#include "core/grid_function.hpp"

namespace wtest {

// Runs fn and reports which error code it threw; InvalidArgument(0-ish) is
// never used as the sentinel because callers compare against a specific code.
template <typename Fn>
inline int thrown_code(Fn&& fn) {
  try {
    fn();
  } catch (const wnil::Error& e) {
    return static_cast<int>(e.code());
  } catch (...) {
    return -2;
  }
  return -1;
}

inline bool close(double a, double b, double rel, double abs_floor = 0.0) {
  const double scale = std::max({std::fabs(a), std::fabs(b), abs_floor});
  if (scale == 0.0) return true;
  return std::fabs(a - b) <= rel * scale + abs_floor;
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline wnil::Box box1(double lo, double hi) {
  wnil::Box b;
  b.dim = 1;
  b.lo = {lo, 0.0};
  b.hi = {hi, 0.0};
  return b;
}

inline wnil::Box box2(double lo, double hi) {
  wnil::Box b;
  b.dim = 2;
  b.lo = {lo, lo};
  b.hi = {hi, hi};
  return b;
}

inline wnil::GridFunction random_grid(const wnil::Box& box, double h, std::uint64_t seed,
                                      double amplitude = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-amplitude, amplitude);
  wnil::GridFunction f = wnil::GridFunction::zeros(box, h);
  for (double& v : f.values()) v = uni(rng);
  return f;
}

inline wnil::GridFunction nonneg_grid(const wnil::Box& box, double h, std::uint64_t seed,
                                      double amplitude = 1.0) {
  wnil::GridFunction f = random_grid(box, h, seed, amplitude);
  for (double& v : f.values()) v = std::fabs(v);
  return f;
}

}  // namespace wtest

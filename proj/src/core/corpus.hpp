#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/grid_function.hpp"

namespace wnil {

// Deterministic test-function generator. Kinds:
//   bumps       Gaussian bumps with random centers, widths, signs
//   indicators  box indicators, the first one always the unit box at 0
//   bandlimited sums of a few low-frequency waves
//   mixed       round-robin over the three, plus one odd function up front
// Same seed, box, h and kind reproduce the same functions bit for bit.
struct CorpusSpec {
  std::string kind = "mixed";
  int count = 20;
  std::uint64_t seed = 1;
};

std::vector<GridFunction> make_corpus(const Box& box, double h, const CorpusSpec& spec);

}  // namespace wnil

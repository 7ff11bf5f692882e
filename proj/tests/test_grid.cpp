#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <set>

#include "core/corpus.hpp"
#include "core/error.hpp"
#include "core/geometry.hpp"
#include "core/grid_function.hpp"
#include "test_common.hpp"

using namespace wnil;
using wtest::box1;
using wtest::box2;
using wtest::thrown_code;

TEST_CASE("box widths and diameters") {
  Box b = box1(-1.0, 3.0);
  CHECK(b.width(0) == doctest::Approx(4.0));
  CHECK(b.diameter() == doctest::Approx(4.0));

  Box r;
  r.dim = 2;
  r.lo = {0.0, 0.0};
  r.hi = {2.0, 1.0};
  CHECK(r.diameter() == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("ball membership is strict") {
  Ball b{{0.0, 0.0}, 1.0};
  CHECK(b.contains({0.999, 0.0}, 1));
  CHECK_FALSE(b.contains({1.0, 0.0}, 1));
  CHECK(b.scaled(2.0).radius == doctest::Approx(2.0));
  CHECK(b.scaled(2.0).contains({1.0, 0.0}, 1));
}

TEST_CASE("grid layout 1d") {
  GridFunction f = GridFunction::sample(box1(-1.0, 1.0), 0.5, [](const Point& x) { return x[0]; });
  REQUIRE(f.size() == 4);
  CHECK(f.cell_measure() == doctest::Approx(0.5));
  CHECK(f.center(0)[0] == doctest::Approx(-0.75));
  CHECK(f.center(3)[0] == doctest::Approx(0.75));
  CHECK(f[1] == doctest::Approx(-0.25));
  CHECK(f[2] == doctest::Approx(0.25));
}

TEST_CASE("grid layout 2d row major x fastest") {
  GridFunction f = GridFunction::sample(box2(0.0, 1.0), 0.5,
                                        [](const Point& x) { return x[0] + 10.0 * x[1]; });
  REQUIRE(f.size() == 4);
  CHECK(f.nx(0) == 2);
  CHECK(f.nx(1) == 2);
  CHECK(f.cell_measure() == doctest::Approx(0.25));
  CHECK(f[f.flat_index(0, 0)] == doctest::Approx(0.25 + 2.5));
  CHECK(f[f.flat_index(1, 0)] == doctest::Approx(0.75 + 2.5));
  CHECK(f[f.flat_index(0, 1)] == doctest::Approx(0.25 + 7.5));
  CHECK(f[f.flat_index(1, 1)] == doctest::Approx(0.75 + 7.5));
}

TEST_CASE("spacing must tile the box") {
  CHECK(thrown_code([] { GridFunction::zeros(box1(0.0, 1.0), 0.3); }) ==
        static_cast<int>(ErrorCode::InvalidArgument));
  CHECK(thrown_code([] { GridFunction::zeros(box1(0.0, 1.0), -0.25); }) ==
        static_cast<int>(ErrorCode::InvalidArgument));
}

TEST_CASE("value_at inside and outside") {
  GridFunction f = GridFunction::sample(box1(0.0, 1.0), 0.25, [](const Point& x) { return x[0]; });
  CHECK(f.value_at({0.1, 0.0}) == doctest::Approx(0.125));
  CHECK(f.value_at({0.9, 0.0}) == doctest::Approx(0.875));
  CHECK(f.value_at({1.7, 0.0}) == 0.0);
  CHECK(f.value_at({-0.2, 0.0}) == 0.0);
}

TEST_CASE("cells_in_ball strict boundary") {
  GridFunction f = GridFunction::zeros(box1(-1.0, 1.0), 0.5);
  CHECK(f.cells_in_ball(Ball{{0.0, 0.0}, 0.5}).size() == 2);   // -0.25, 0.25
  CHECK(f.cells_in_ball(Ball{{0.0, 0.0}, 0.26}).size() == 2);
  CHECK(f.cells_in_ball(Ball{{0.0, 0.0}, 0.25}).empty());
  CHECK(f.cells_in_ball(Ball{{0.0, 0.0}, 2.0}).size() == 4);
}

TEST_CASE("integrate and averages") {
  GridFunction one = GridFunction::sample(box1(-1.0, 1.0), 0.25, [](const Point&) { return 1.0; });
  CHECK(integrate(one) == doctest::Approx(2.0));

  GridFunction f = GridFunction::sample(box1(0.0, 1.0), 0.25, [](const Point& x) { return x[0]; });
  CHECK(average_over_ball(f, Ball{{0.5, 0.0}, 2.0}) == doctest::Approx(0.5));
  CHECK(thrown_code([&] { average_over_ball(f, Ball{{0.5, 0.0}, 1e-6}); }) ==
        static_cast<int>(ErrorCode::EmptyBall));

  std::vector<double> w(f.size(), 2.0);
  CHECK(integrate(one, std::vector<double>(one.size(), 2.0)) == doctest::Approx(4.0));
  w[0] = std::nan("");
  CHECK(thrown_code([&] { integrate(f, w); }) == static_cast<int>(ErrorCode::NonFiniteWeight));
}

TEST_CASE("distribution measure over jumps") {
  GridFunction f(box1(0.0, 2.0), 0.5, {0.0, 1.0, 2.0, 3.0});
  CHECK(distribution_measure(f, 1.5) == doctest::Approx(1.0));
  CHECK(distribution_measure(f, 0.0) == doctest::Approx(1.5));
  CHECK(distribution_measure(f, 3.0) == doctest::Approx(0.0));
  std::vector<double> w = {1.0, 1.0, 4.0, 1.0};
  CHECK(distribution_measure(f, w, 1.5) == doctest::Approx(2.5));
}

TEST_CASE("csv round trip keeps bits") {
  const auto dir = wtest::fresh_dir("wnil_grid_csv");
  GridFunction f = GridFunction::sample(box2(0.0, 1.0), 0.125, [](const Point& x) {
    return std::sin(13.0 * x[0]) / 3.0 + x[1] / 7.0;
  });
  const std::string path = (dir / "f.csv").string();
  f.save_csv(path);
  GridFunction g = GridFunction::load_csv(path);
  REQUIRE(g.same_layout(f));
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(g[i] == f[i]);
}

TEST_CASE("json round trip") {
  GridFunction f = GridFunction::sample(box1(-2.0, 2.0), 0.25,
                                        [](const Point& x) { return std::exp(-x[0] * x[0]); });
  GridFunction g = GridFunction::from_json(f.to_json());
  REQUIRE(g.same_layout(f));
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(g[i] == f[i]);
}

TEST_CASE("csv parse failure reports ParseError") {
  const auto dir = wtest::fresh_dir("wnil_grid_bad");
  const std::string path = (dir / "junk.csv").string();
  std::ofstream(path) << "not,a,grid\n1,2\n";
  CHECK(thrown_code([&] { GridFunction::load_csv(path); }) ==
        static_cast<int>(ErrorCode::ParseError));
  CHECK(thrown_code([&] { GridFunction::load_csv((dir / "missing.csv").string()); }) ==
        static_cast<int>(ErrorCode::IOFailure));
}

TEST_CASE("ball family counting from the reference policy") {
  // Box [-1,1], h = 0.5, midpoints only (stride 2, offset 1): 4 centers,
  // radii {0.5, 1, 2} under cap = diameter, so 12 balls.
  BallFamilyPolicy policy;
  policy.center_stride = 2;
  policy.center_offset = 1;
  BallFamily fam = ball_family(box1(-1.0, 1.0), 0.5, policy);
  CHECK(fam.size() == 12);
  REQUIRE(fam.radius_tiers.size() == 3);
  CHECK(fam.radius_tiers[0] == doctest::Approx(0.5));
  CHECK(fam.radius_tiers[2] == doctest::Approx(2.0));
}

TEST_CASE("center lattice nests under refinement") {
  auto centers = [](const BallFamily& fam) {
    std::set<long long> s;
    for (const Ball& b : fam.balls) s.insert(std::llround(b.center[0] * 1024.0));
    return s;
  };
  BallFamily coarse = ball_family(box1(-1.0, 1.0), 0.25);
  BallFamily fine = ball_family(box1(-1.0, 1.0), 0.125);
  const auto cs = centers(coarse);
  const auto fs = centers(fine);
  for (long long c : cs) CHECK(fs.count(c) == 1);
}

TEST_CASE("radius cap and tier spacing honor the policy") {
  BallFamilyPolicy policy;
  policy.radii_per_octave = 4;
  policy.max_radius_factor = 0.5;
  BallFamily fam = ball_family(box1(-2.0, 2.0), 0.25, policy);
  const double cap = 0.5 * 4.0;
  for (double r : fam.radius_tiers) CHECK(r <= cap * (1.0 + 1e-12));
  for (std::size_t i = 1; i < fam.radius_tiers.size(); ++i)
    CHECK(fam.radius_tiers[i] / fam.radius_tiers[i - 1] ==
          doctest::Approx(std::exp2(0.25)).epsilon(1e-12));
  for (const Ball& b : fam.balls) CHECK(b.radius >= 0.25 * (1.0 - 1e-12));
}

TEST_CASE("bad policies are rejected") {
  BallFamilyPolicy p;
  p.center_stride = 0;
  CHECK(thrown_code([&] { ball_family(box1(0.0, 1.0), 0.25, p); }) ==
        static_cast<int>(ErrorCode::BadPolicy));
  p = {};
  p.radii_per_octave = 0;
  CHECK(thrown_code([&] { ball_family(box1(0.0, 1.0), 0.25, p); }) ==
        static_cast<int>(ErrorCode::BadPolicy));
  p = {};
  p.max_radius_factor = 0.0;
  CHECK(thrown_code([&] { ball_family(box1(0.0, 1.0), 0.25, p); }) ==
        static_cast<int>(ErrorCode::BadPolicy));
  p = {};
  p.max_radius_factor = 1e-9;  // cap below h
  CHECK(thrown_code([&] { ball_family(box1(0.0, 1.0), 0.25, p); }) ==
        static_cast<int>(ErrorCode::BadPolicy));
}

TEST_CASE("corpus determinism and anchor members") {
  CorpusSpec spec;
  spec.kind = "indicators";
  spec.count = 3;
  spec.seed = 7;
  const Box box = box1(-4.0, 4.0);
  auto a = make_corpus(box, 0.25, spec);
  auto b = make_corpus(box, 0.25, spec);
  REQUIRE(a.size() == 3);
  REQUIRE(b.size() == 3);
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t i = 0; i < a[k].size(); ++i) CHECK(a[k][i] == b[k][i]);

  // First indicator is the unit box with unit mass.
  CHECK(integrate(a[0]) == doctest::Approx(1.0));
  for (std::size_t i = 0; i < a[0].size(); ++i) {
    const double x = a[0].center(i)[0];
    CHECK(a[0][i] == ((x > 0.0 && x < 1.0) ? 1.0 : 0.0));
  }
}

TEST_CASE("mixed corpus starts with an odd profile") {
  CorpusSpec spec;
  spec.kind = "mixed";
  spec.count = 4;
  spec.seed = 3;
  auto fs = make_corpus(box1(-2.0, 2.0), 0.125, spec);
  REQUIRE(fs.size() == 4);
  const GridFunction& f = fs[0];
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < n; ++i)
    CHECK(f[i] == doctest::Approx(-f[n - 1 - i]).epsilon(1e-12));
  CHECK(std::fabs(integrate(f)) < 1e-12);
}

TEST_CASE("corpus rejects unknown kinds") {
  CorpusSpec spec;
  spec.kind = "unknown";
  spec.count = 1;
  CHECK(thrown_code([&] { make_corpus(box1(0.0, 1.0), 0.25, spec); }) ==
        static_cast<int>(ErrorCode::InvalidArgument));
  spec.kind = "bumps";
  spec.count = 0;
  CHECK(thrown_code([&] { make_corpus(box1(0.0, 1.0), 0.25, spec); }) ==
        static_cast<int>(ErrorCode::InvalidArgument));
}

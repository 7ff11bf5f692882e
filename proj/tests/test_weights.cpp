#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <limits>

#include "core/error.hpp"
#include "core/maximal.hpp"
#include "core/weights.hpp"
#include "test_common.hpp"

using namespace wnil;
using wtest::box1;
using wtest::thrown_code;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// Single ball covering exactly the two cells of a {1, 3} table on [0, 1].
struct TwoCellFixture {
  GridFunction table;
  BallFamily family;

  TwoCellFixture() : table(box1(0.0, 1.0), 0.5, {1.0, 3.0}) {
    BallFamilyPolicy policy;
    policy.center_offset = 2;   // lattice point 0.5
    policy.center_stride = 100;
    policy.max_radius_factor = 0.5;  // cap = h, single radius tier
    family = ball_family(table.box(), 0.5, policy);
  }
};

}  // namespace

TEST_CASE("two cell fixture has one ball over both cells") {
  TwoCellFixture fx;
  REQUIRE(fx.family.size() == 1);
  CHECK(fx.family.balls[0].center[0] == doctest::Approx(0.5));
  CHECK(fx.family.balls[0].radius == doctest::Approx(0.5));
  CHECK(fx.table.cells_in_ball(fx.family.balls[0]).size() == 2);
}

TEST_CASE("weight evaluation") {
  WeightSpec pw = WeightSpec::power(0.5, {0.0, 0.0}, 1);
  CHECK(pw.eval({2.0, 0.0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(pw.eval({0.0, 0.0}) == 0.0);

  WeightSpec neg = WeightSpec::power(-0.5, {0.0, 0.0}, 1);
  CHECK(std::isinf(neg.eval({0.0, 0.0})));
  // Clamp moves the singular sample to distance clamp_h / 2.
  CHECK(neg.eval({0.0, 0.0}, 0.5) == doctest::Approx(2.0));
  CHECK(neg.eval({1.0, 0.0}, 0.5) == doctest::Approx(1.0));

  WeightSpec tp = WeightSpec::truncated_power(-1.0, {0.0, 0.0}, 2.0, 1);
  CHECK(tp.eval({0.5, 0.0}) == doctest::Approx(0.5));  // min(2, 1/2)
  CHECK(tp.eval({4.0, 0.0}) == doctest::Approx(0.25));

  CHECK(WeightSpec::constant(3.0).eval({7.0, 0.0}) == doctest::Approx(3.0));
}

TEST_CASE("weight json round trips") {
  auto roundtrip = [](const WeightSpec& w, const Point& probe) {
    WeightSpec back = WeightSpec::from_json(w.to_json());
    CHECK(back.eval(probe, 0.25) == doctest::Approx(w.eval(probe, 0.25)).epsilon(1e-15));
  };
  roundtrip(WeightSpec::constant(2.5), {0.3, 0.0});
  roundtrip(WeightSpec::power(0.7, {0.1, 0.0}, 1), {0.9, 0.0});
  roundtrip(WeightSpec::truncated_power(-1.2, {0.0, 0.0}, 1.5, 1), {0.4, 0.0});
  GridFunction table(box1(0.0, 1.0), 0.5, {1.0, 3.0});
  roundtrip(WeightSpec::tabulated(table), {0.75, 0.0});
  CHECK(thrown_code([] { WeightSpec::from_json("{\"kind\":\"nope\"}"); }) ==
        static_cast<int>(ErrorCode::ParseError));
}

TEST_CASE("tabulated weights must be finite nonnegative and not all zero") {
  CHECK(thrown_code([] {
          WeightSpec::tabulated(GridFunction(box1(0.0, 1.0), 0.5, {1.0, -2.0}));
        }) == static_cast<int>(ErrorCode::InvalidArgument));
  CHECK(thrown_code([] {
          WeightSpec::tabulated(GridFunction(box1(0.0, 1.0), 0.5, {0.0, 0.0}));
        }) == static_cast<int>(ErrorCode::InvalidArgument));
  CHECK(thrown_code([] {
          WeightSpec::tabulated(GridFunction(box1(0.0, 1.0), 0.5, {1.0, std::nan("")}));
        }) == static_cast<int>(ErrorCode::InvalidArgument));
}

TEST_CASE("constant weights have unit class constants") {
  BallFamily fam = ball_family(box1(-1.0, 1.0), 0.25);
  WeightSpec w = WeightSpec::constant(5.0);
  for (double q : {1.0, 2.0, 3.0})
    CHECK(ap_constant(w, q, fam).value == doctest::Approx(1.0).epsilon(1e-12));
  for (double s : {1.5, 2.0, kInf})
    CHECK(rh_constant(w, s, fam).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two cell oracles for ap and rh") {
  TwoCellFixture fx;
  WeightSpec w = WeightSpec::tabulated(fx.table);

  // avg = 2, avg of 1/w = (1 + 1/3)/2 = 2/3.
  CHECK(ap_constant(w, 2.0, fx.family).value == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
  // q = 1: avg * (1 / min) = 2 / 1.
  CHECK(ap_constant(w, 1.0, fx.family).value == doctest::Approx(2.0).epsilon(1e-13));
  // RH_inf = max/avg = 3/2; RH_2 = sqrt(5)/2.
  CHECK(rh_constant(w, kInf, fx.family).value == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(rh_constant(w, 2.0, fx.family).value ==
        doctest::Approx(std::sqrt(5.0) / 2.0).epsilon(1e-13));

  const auto report = ap_constant(w, 2.0, fx.family);
  CHECK(report.family_size == 1);
  CHECK_FALSE(report.infinite);
  CHECK(report.argmax.radius == doctest::Approx(0.5));
}

TEST_CASE("rh flags zero averages") {
  GridFunction table(box1(0.0, 1.0), 0.25, {0.0, 0.0, 1.0, 1.0});
  WeightSpec w = WeightSpec::tabulated(table);
  BallFamilyPolicy policy;
  policy.center_offset = 1;  // midpoint of the first cell
  policy.center_stride = 1000;
  policy.max_radius_factor = 0.25;
  BallFamily fam = ball_family(table.box(), 0.25, policy);
  REQUIRE(fam.size() == 1);
  CHECK(thrown_code([&] { rh_constant(w, 2.0, fam); }) ==
        static_cast<int>(ErrorCode::ZeroAverage));
}

TEST_CASE("two weight constant degenerates to ap") {
  BallFamily fam = ball_family(box1(-1.0, 1.0), 0.125);
  WeightSpec w = WeightSpec::power(0.5, {0.0, 0.0}, 1);
  const double same = two_weight_ap(w, w, 2.0, fam).value;
  const double ap = ap_constant(w, 2.0, fam).value;
  CHECK(same == doctest::Approx(ap).epsilon(1e-12));
}

TEST_CASE("two weight constant goes infinite when the dual weight vanishes") {
  GridFunction table(box1(0.0, 1.0), 0.5, {0.0, 1.0});
  WeightSpec v = WeightSpec::tabulated(table);
  TwoCellFixture fx;
  const auto report = two_weight_ap(WeightSpec::constant(1.0), v, 2.0, fx.family);
  CHECK(report.infinite);
}

TEST_CASE("sawyer testing constant dominates the ap constant") {
  BallFamilyPolicy policy;
  policy.center_stride = 2;
  policy.center_offset = 1;
  BallFamily fam = ball_family(box1(-1.0, 1.0), 0.125, policy);
  WeightSpec w = WeightSpec::power(0.5, {0.0, 0.0}, 1);
  MaximalOp op = [](const GridFunction& g, const BallFamily& f) { return hl_maximal(g, f); };
  const double sp = sawyer_sp(w, w, 2.0, fam, op).value;
  const double ap = ap_constant(w, 2.0, fam).value;
  CHECK(sp > 0.0);
  CHECK(ap <= sp * sp * (1.0 + 1e-9));
}

TEST_CASE("sawyer rejects balls with no dual mass") {
  // v vanishes on the only ball of the family, so sigma has no mass there.
  BallFamilyPolicy policy;
  policy.center_offset = 1;
  policy.center_stride = 1000;
  policy.max_radius_factor = 0.25;
  BallFamily fam = ball_family(box1(0.0, 1.0), 0.25, policy);
  WeightSpec v =
      WeightSpec::tabulated(GridFunction(box1(0.0, 1.0), 0.25, {0.0, 0.0, 1.0, 1.0}));
  MaximalOp op = [](const GridFunction& g, const BallFamily& f) { return hl_maximal(g, f); };
  CHECK(thrown_code([&] { sawyer_sp(WeightSpec::constant(1.0), v, 2.0, fam, op); }) ==
        static_cast<int>(ErrorCode::ZeroMass));
}

TEST_CASE("bump constant of unit weights is one") {
  BallFamily fam = ball_family(box1(-1.0, 1.0), 0.25);
  YoungSpec phi = YoungSpec::power(2.0);
  BumpExponents e{1.0, 1.0};
  const auto report =
      bump_constant(WeightSpec::constant(1.0), WeightSpec::constant(1.0), phi, e, fam);
  CHECK(report.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("power weight class membership table") {
  CHECK(power_weight_in_class(0.5, 2.0, 1));
  CHECK_FALSE(power_weight_in_class(1.5, 2.0, 1));
  CHECK_FALSE(power_weight_in_class(1.0, 2.0, 1));  // boundary excluded
  CHECK_FALSE(power_weight_in_class(-1.2, 2.0, 1));
  CHECK(power_weight_in_class(-0.5, kInf, 1));
  CHECK_FALSE(power_weight_in_class(-1.0, kInf, 1));
  CHECK(power_weight_in_class(2.5, 3.0, 2));  // n(s-1) = 4
}

TEST_CASE("dichotomy series separates members from non members") {
  auto growth = [](const std::vector<DichotomyStage>& s) {
    REQUIRE(s.size() == 3);
    return s[2].constant / s[1].constant;
  };
  const auto member = dichotomy_series(WeightSpec::power(0.5, {0.0, 0.0}, 1), 2.0);
  CHECK(growth(member) <= 1.05);
  const auto diverging = dichotomy_series(WeightSpec::power(1.2, {0.0, 0.0}, 1), 2.0);
  CHECK(growth(diverging) >= 1.5);
  for (const auto& stage : member) CHECK(stage.constant > 0.0);
}

TEST_CASE("constant report series and csv") {
  BallFamily fam = ball_family(box1(-1.0, 1.0), 0.25);
  WeightSpec w = WeightSpec::power(0.5, {0.0, 0.0}, 1);
  const auto report = ap_constant(w, 2.0, fam);
  REQUIRE(!report.series.empty());
  CHECK(report.series.size() == fam.radius_tiers.size());
  // Running sup is nondecreasing and ends at the reported value.
  for (std::size_t i = 1; i < report.series.size(); ++i)
    CHECK(report.series[i].constant >= report.series[i - 1].constant * (1.0 - 1e-15));
  CHECK(report.series.back().constant == doctest::Approx(report.value));

  const auto dir = wtest::fresh_dir("wnil_weight_csv");
  const std::string path = (dir / "series.csv").string();
  report.save_csv(path);
  std::ifstream in(path);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == report.series.size() + 1);
}

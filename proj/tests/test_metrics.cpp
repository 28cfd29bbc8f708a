#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "berrydet/errors.hpp"
#include "berrydet/metrics.hpp"
#include "oracles.hpp"

using namespace berrydet;

namespace {

BerryComponent comp_from(const std::vector<Pixel>& px, int id) {
  BerryComponent c;
  c.id = id;
  c.pixels = px;
  c.area_px = static_cast<int>(px.size());
  return c;
}

std::vector<Pixel> rect(int x0, int y0, int w, int h) {
  std::vector<Pixel> px;
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x) px.push_back({x, y});
  return px;
}

}  // namespace

TEST_CASE("identical masks give all IoUs 1.0") {
  std::mt19937_64 rng(3);
  ClassMask m = oracles::random_class_mask(rng);
  IoUReport r = iou(m, m);
  CHECK(r.iou_background == 1.0);
  CHECK(r.iou_berry == 1.0);
  CHECK(r.iou_edge == 1.0);
  CHECK(r.iou_average == 1.0);
}

TEST_CASE("hand example: berry IoU 6/12 = 0.5") {
  // pred berry 10 px, truth berry 8 px, overlap 6.
  ClassMask pred(20, 5, 0), truth(20, 5, 0);
  for (int x = 0; x < 10; ++x) pred.at(x, 0) = 1;
  for (int x = 4; x < 12; ++x) truth.at(x, 0) = 1;
  IoUReport r = iou(pred, truth);
  CHECK(r.iou_berry == 0.5);
}

TEST_CASE("class absent from both sides scores 1.0") {
  ClassMask pred(8, 8, 0), truth(8, 8, 0);
  pred.at(1, 1) = 1;
  truth.at(1, 1) = 1;
  IoUReport r = iou(pred, truth);
  CHECK(r.iou_edge == 1.0);
  CHECK(r.iou_berry == 1.0);
}

TEST_CASE("IoU symmetry and bounds") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    ClassMask a = oracles::random_class_mask(rng, 32);
    ClassMask b(a.width(), a.height());
    std::uniform_int_distribution<int> rc(0, 2);
    for (auto& v : b.data()) v = static_cast<std::uint8_t>(rc(rng));
    IoUReport ab = iou(a, b), ba = iou(b, a);
    REQUIRE(ab.iou_background == ba.iou_background);
    REQUIRE(ab.iou_berry == ba.iou_berry);
    REQUIRE(ab.iou_edge == ba.iou_edge);
    for (double v : {ab.iou_background, ab.iou_berry, ab.iou_edge}) {
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0);
    }
  }
}

TEST_CASE("micro aggregation pools pixels before dividing") {
  ClassMask p1(4, 1, 0), t1(4, 1, 0), p2(4, 1, 0), t2(4, 1, 0);
  p1.at(0, 0) = 1;
  t1.at(0, 0) = 1;  // image 1: berry inter 1, union 1
  p2.at(0, 0) = 1;
  t2.at(1, 0) = 1;  // image 2: berry inter 0, union 2
  IoUAccumulator acc;
  acc.add(p1, t1);
  acc.add(p2, t2);
  CHECK(acc.report().iou_berry == doctest::Approx(1.0 / 3.0));  // not mean(1, 0)
}

TEST_CASE("iou dimension mismatch throws") {
  CHECK_THROWS_AS(iou(ClassMask(4, 4), ClassMask(5, 4)), ValidationError);
}

TEST_CASE("detection_eval") {
  SUBCASE("three markers in three components: 100% / 0%") {
    std::vector<BerryComponent> comps{comp_from(rect(0, 0, 3, 3), 1),
                                      comp_from(rect(10, 0, 3, 3), 2),
                                      comp_from(rect(20, 0, 3, 3), 3)};
    DotList dots{{1, 1}, {11, 1}, {21, 1}};
    auto rep = detection_eval(comps, dots, 30, 10);
    CHECK(rep.n_detected == 3);
    CHECK(*rep.correct_detection_pct == 100.0);
    CHECK(*rep.misclassified_pct == 0.0);
    CHECK(rep.undersegmented_components == 0);
  }
  SUBCASE("two markers in one component plus an empty component") {
    std::vector<BerryComponent> comps{comp_from(rect(0, 0, 5, 5), 1),
                                      comp_from(rect(10, 0, 3, 3), 2)};
    DotList dots{{1, 1}, {3, 3}, {20, 5}};
    auto rep = detection_eval(comps, dots, 30, 10);
    CHECK(rep.n_detected == 2);
    CHECK(rep.undersegmented_components == 1);
    CHECK(rep.n_misclassified == 1);
    CHECK(*rep.misclassified_pct == 50.0);
  }
  SUBCASE("empty inputs report absent percentages") {
    auto rep = detection_eval({}, {}, 10, 10);
    CHECK_FALSE(rep.correct_detection_pct.has_value());
    CHECK_FALSE(rep.misclassified_pct.has_value());
  }
  SUBCASE("conservation counts") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<BerryComponent> comps;
      std::uniform_int_distribution<int> rx(0, 5);
      int id = 0;
      for (int i = 0; i < 4; ++i)
        comps.push_back(comp_from(rect(i * 8 + rx(rng) / 3, 2, 4, 4), ++id));
      DotList dots;
      std::uniform_int_distribution<int> dx(0, 31), dy(0, 9);
      std::set<std::pair<int, int>> used;
      for (int i = 0; i < 8; ++i) {
        int x = dx(rng), y = dy(rng);
        if (used.insert({x, y}).second) dots.push_back({x, y});
      }
      auto rep = detection_eval(comps, dots, 32, 10);
      int undetected = 0;
      for (const auto& d : dots) {
        bool in = false;
        for (const auto& c : comps)
          for (const auto& p : c.pixels)
            if (p.x == d.x && p.y == d.y) in = true;
        if (!in) ++undetected;
      }
      REQUIRE(rep.n_detected + undetected == rep.n_markers);
      int with_marker = rep.n_components - rep.n_misclassified;
      REQUIRE(with_marker + rep.n_misclassified == rep.n_components);
    }
  }
  SUBCASE("near tolerance mode") {
    std::vector<BerryComponent> comps{comp_from(rect(5, 5, 4, 4), 1)};
    DotList dots{{4, 4}};  // diagonal neighbor of the component corner
    CHECK(detection_eval(comps, dots, 20, 20).n_detected == 0);
    CHECK(detection_eval(comps, dots, 20, 20, {.near_tolerance = true}).n_detected == 1);
  }
}

TEST_CASE("count_regression") {
  SUBCASE("perfect fit") {
    auto r = count_regression({{10, 10}, {20, 20}, {30, 30}});
    CHECK(r.slope == doctest::Approx(1.0));
    CHECK(r.intercept == doctest::Approx(0.0));
    CHECK(r.r_squared == doctest::Approx(1.0));
  }
  SUBCASE("systematic undercount still has R^2 = 1") {
    auto r = count_regression({{10, 8}, {20, 16}, {30, 24}});
    CHECK(r.slope == doctest::Approx(0.8));
    CHECK(r.intercept == doctest::Approx(0.0).scale(1));
    CHECK(r.r_squared == doctest::Approx(1.0));
  }
  SUBCASE("degenerate inputs throw") {
    CHECK_THROWS_AS(count_regression({{1, 1}}), ValidationError);
    CHECK_THROWS_AS(count_regression({{5, 1}, {5, 2}, {5, 3}}), ValidationError);
  }
  SUBCASE("matches normal-equations oracle on random pairs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<CountPair> pairs;
      std::vector<std::pair<double, double>> pts;
      const int n = std::uniform_int_distribution<int>(2, 40)(rng);
      for (int i = 0; i < n; ++i) {
        double x = u(rng), y = u(rng);
        pairs.push_back({x, y});
        pts.push_back({x, y});
      }
      CountRegression r;
      try {
        r = count_regression(pairs);
      } catch (const ValidationError&) {
        --trial;
        continue;
      }
      auto expected = oracles::normal_equations_ols(pts);
      REQUIRE(r.slope == doctest::Approx(expected.slope).epsilon(1e-9));
      REQUIRE(r.intercept == doctest::Approx(expected.intercept).epsilon(1e-9));
      REQUIRE(r.r_squared == doctest::Approx(expected.r_squared).epsilon(1e-9));
      REQUIRE(r.r_squared <= 1.0 + 1e-12);
    }
  }
  SUBCASE("invariances: shared shift keeps slope; affine rescale keeps R^2") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    std::vector<CountPair> pairs;
    for (int i = 0; i < 20; ++i) pairs.push_back({u(rng), u(rng)});
    auto base = count_regression(pairs);
    std::vector<CountPair> shifted, rescaled;
    for (const auto& p : pairs) {
      shifted.push_back({p.manual_count + 7.5, p.detected_count + 7.5});
      rescaled.push_back({p.manual_count, 3.0 * p.detected_count - 11.0});
    }
    CHECK(count_regression(shifted).slope == doctest::Approx(base.slope).epsilon(1e-9));
    CHECK(count_regression(rescaled).r_squared ==
          doctest::Approx(base.r_squared).epsilon(1e-9));
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "berrydet/annotation.hpp"
#include "berrydet/components.hpp"
#include "berrydet/errors.hpp"
#include "berrydet/labelgen.hpp"
#include "berrydet/metrics.hpp"
#include "berrydet/synth.hpp"
#include "oracles.hpp"

using namespace berrydet;

TEST_CASE("zero clusters give an empty scene") {
  SceneConfig cfg;
  cfg.n_clusters = 0;
  cfg.seed = 1;
  Scene scene = generate_scene(cfg);
  CHECK(instance_count(scene.instances) == 0);
  CHECK(scene.dots.empty());
}

TEST_CASE("single berry: one instance, centroid dot, disc area") {
  SceneConfig cfg;
  cfg.n_clusters = 1;
  cfg.berries_per_cluster = {1, 1};
  cfg.radius_px = {10, 10};
  cfg.seed = 4;
  Scene scene = generate_scene(cfg);
  REQUIRE(instance_count(scene.instances) == 1);
  REQUIRE(scene.dots.size() == 1);
  int area = 0;
  long long sx = 0, sy = 0;
  for (int y = 0; y < scene.instances.height(); ++y)
    for (int x = 0; x < scene.instances.width(); ++x)
      if (scene.instances.at(x, y) == 1) {
        ++area;
        sx += x;
        sy += y;
      }
  CHECK(area == 317);  // digital disc of radius 10
  // Dot is the visible pixel nearest the centroid; full disc -> center.
  CHECK(scene.dots[0].x == sx / area);
  CHECK(scene.dots[0].y == sy / area);
  CHECK(scene.instances.at(scene.dots[0].x, scene.dots[0].y) == 1);
}

TEST_CASE("scene structure invariants over seeds") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SceneConfig cfg;
    cfg.seed = seed;
    cfg.touch_probability = 0.7;
    Scene scene = generate_scene(cfg);
    const int n = instance_count(scene.instances);
    REQUIRE(static_cast<int>(scene.dots.size()) == n);

    // Every dot inside its own instance's visible pixels; ids dense;
    // every instance 4-connected and >= min_visible_px.
    std::vector<int> areas(n + 1, 0);
    for (auto v : scene.instances.data()) {
      REQUIRE(v <= n);
      ++areas[v];
    }
    std::set<std::uint16_t> dot_ids;
    for (const auto& d : scene.dots) {
      auto id = scene.instances.at(d.x, d.y);
      REQUIRE(id != 0);
      REQUIRE(dot_ids.insert(id).second);
    }
    for (int id = 1; id <= n; ++id) REQUIRE(areas[id] >= cfg.min_visible_px);

    ClassMask as_class(scene.instances.width(), scene.instances.height(), 0);
    for (int y = 0; y < as_class.height(); ++y)
      for (int x = 0; x < as_class.width(); ++x)
        if (scene.instances.at(x, y) != 0) as_class.at(x, y) = 1;
    // 4-connectivity per id: regions of the berry class grouped by id count.
    for (int id = 1; id <= n; ++id) {
      ClassMask only(scene.instances.width(), scene.instances.height(), 0);
      for (int y = 0; y < only.height(); ++y)
        for (int x = 0; x < only.width(); ++x)
          if (scene.instances.at(x, y) == id) only.at(x, y) = 1;
      REQUIRE(oracles::flood_fill_regions(only, SemClass::Berry, 1).size() == 1);
    }
  }
}

TEST_CASE("same seed is bit-identical, different seeds differ") {
  SceneConfig cfg;
  cfg.seed = 123;
  Scene a = generate_scene(cfg);
  Scene b = generate_scene(cfg);
  CHECK(a.instances == b.instances);
  CHECK(a.dots == b.dots);
  CHECK(a.image == b.image);
  cfg.seed = 124;
  CHECK(generate_scene(cfg).instances != a.instances);
}

TEST_CASE("touching berries remain two components after labelgen + CCL") {
  SceneConfig cfg;
  cfg.n_clusters = 1;
  cfg.berries_per_cluster = {2, 2};
  cfg.radius_px = {9, 11};
  cfg.touch_probability = 1.0;
  cfg.seed = 6;
  Scene scene = generate_scene(cfg);
  LabelGenConfig lg{.edge_thickness_px = 2};
  prune_small_cores(scene, lg, 25);
  const int n = instance_count(scene.instances);
  REQUIRE(n >= 1);  // deep overlap may have pruned one
  ClassMask labels = generate_labels(scene.instances, lg);
  CHECK(static_cast<int>(label_components(labels, {.min_component_px = 25}).size()) == n);
}

TEST_CASE("full-pipeline closure: oracle labels give perfect detection") {
  DetectionReport total;
  for (std::uint64_t seed = 100; seed < 105; ++seed) {
    SceneConfig cfg;
    cfg.seed = seed;
    cfg.touch_probability = 0.2;
    Scene scene = generate_scene(cfg);
    LabelGenConfig lg{.edge_thickness_px = 2};
    prune_small_cores(scene, lg, 25);
    ClassMask labels = generate_labels(scene.instances, lg);
    auto comps = label_components(labels, {.min_component_px = 25});
    total += detection_eval(comps, scene.dots, labels.width(), labels.height());
  }
  REQUIRE(total.n_markers > 0);
  CHECK(*total.correct_detection_pct == 100.0);
  CHECK(*total.misclassified_pct == 0.0);
}

TEST_CASE("infeasible configs fail with a named constraint") {
  SceneConfig cfg;
  cfg.image_w = 40;
  cfg.image_h = 40;
  cfg.radius_px = {30, 30};
  cfg.seed = 1;
  CHECK_THROWS_AS(generate_scene(cfg), ConfigError);  // berry larger than image

  SceneConfig crowded;
  crowded.image_w = 64;
  crowded.image_h = 64;
  crowded.n_clusters = 6;
  crowded.berries_per_cluster = {12, 12};
  crowded.radius_px = {10, 12};
  crowded.touch_probability = 0.0;  // non-touching placement cannot fit
  crowded.cluster_spread_px = 2.0;
  crowded.seed = 2;
  CHECK_THROWS_AS(generate_scene(crowded), ValidationError);
}

TEST_CASE("augmentations") {
  std::mt19937_64 rng(15);
  Raster<std::uint8_t> img(31, 17);
  std::uniform_int_distribution<int> rv(0, 255);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rv(rng));

  SUBCASE("hflip is an involution and maps dots consistently") {
    CHECK(hflip(hflip(img)) == img);
    DotList dots{{0, 3}, {30, 16}, {12, 8}};
    CHECK(hflip_dots(hflip_dots(dots, 31), 31) == dots);
    CHECK(hflip_dots(dots, 31)[0] == Dot{30, 3});
  }
  SUBCASE("gamma 1.0 is the identity") { CHECK(gamma_map(img, 1.0) == img); }
  SUBCASE("box blur keeps a constant image constant") {
    Raster<std::uint8_t> flat(20, 20, 137);
    for (int k : {3, 5, 7}) CHECK(box_blur(flat, k) == flat);
  }
  SUBCASE("invalid parameters rejected") {
    CHECK_THROWS_AS(box_blur(img, 4), ConfigError);
    CHECK_THROWS_AS(box_blur(img, 9), ConfigError);
    CHECK_THROWS_AS(gamma_map(img, 0.5), ConfigError);
    CHECK_THROWS_AS(gamma_map(img, 1.5), ConfigError);
  }
}

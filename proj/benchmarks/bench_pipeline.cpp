// Hot-path benchmarks at full-frame scale (2592x2048): label generation,
// patch extraction + majority stitching, component labeling, and the whole
// post-classification pipeline.
#include <benchmark/benchmark.h>

#include <string>

#include "berrydet/components.hpp"
#include "berrydet/labelgen.hpp"
#include "berrydet/pipeline.hpp"
#include "berrydet/synth.hpp"
#include "berrydet/tiling.hpp"

using namespace berrydet;

namespace {

Scene full_frame_scene() {
  SceneConfig cfg;
  cfg.image_w = 2592;
  cfg.image_h = 2048;
  cfg.n_clusters = 60;
  cfg.seed = 7;
  return generate_scene(cfg);
}

void BM_generate_labels(benchmark::State& state) {
  const Scene scene = full_frame_scene();
  const LabelGenConfig lg{.edge_thickness_px = static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(generate_labels(scene.instances, lg));
}
BENCHMARK(BM_generate_labels)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_extract_stitch(benchmark::State& state) {
  const Scene scene = full_frame_scene();
  const ClassMask labels = generate_labels(scene.instances, {.edge_thickness_px = 2});
  const PatchGrid grid = plan_grid(2592, 2048, 512, 384, 0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(stitch_majority(extract_stack(labels, grid)));
}
BENCHMARK(BM_extract_stitch)->Unit(benchmark::kMillisecond);

void BM_label_components(benchmark::State& state) {
  const Scene scene = full_frame_scene();
  const ClassMask labels = generate_labels(scene.instances, {.edge_thickness_px = 2});
  for (auto _ : state)
    benchmark::DoNotOptimize(label_components(labels, {.min_component_px = 25}));
}
BENCHMARK(BM_label_components)->Unit(benchmark::kMillisecond);

void BM_detect_image(benchmark::State& state) {
  const Scene scene = full_frame_scene();
  const ClassMask labels = generate_labels(scene.instances, {.edge_thickness_px = 2});
  const OracleClassifier oracle([&](const std::string&) { return labels; });
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        detect_image(oracle, "bench", 2592, 2048, {}, {}, FilterConfig{}, workers));
}
BENCHMARK(BM_detect_image)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

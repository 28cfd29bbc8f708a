#pragma once

#include <cstdint>

#include "berrydet/labelgen.hpp"
#include "berrydet/raster.hpp"

namespace berrydet {

struct IntRange {
  int lo = 0;
  int hi = 0;  // inclusive
};

/// Synthetic vineyard scene: clusters of rasterized berry discs with
/// painter's-order occlusion. touch_probability near 1 gives compact,
/// overlapping bunches; near 0, loose well-separated ones.
struct SceneConfig {
  int image_w = 512;
  int image_h = 384;
  int n_clusters = 4;
  IntRange berries_per_cluster{4, 8};
  IntRange radius_px{6, 12};
  double cluster_spread_px = 30.0;
  double touch_probability = 0.5;
  int min_visible_px = 25;  // instances reduced below this are removed
  std::uint64_t seed = 0;   // mandatory
};

struct Scene {
  InstanceMask instances;
  DotList dots;               // one per instance, inside its visible pixels
  Raster<std::uint8_t> image;  // cosmetic shaded rendering
};

/// Deterministic per seed. Later-placed discs occlude earlier ones; an
/// occluded instance keeps only its largest 4-connected visible fragment,
/// and instances below min_visible_px vanish entirely (no dot). Throws a
/// ValidationError naming the constraint if placement keeps failing.
Scene generate_scene(const SceneConfig& cfg);

/// Remove instances whose berry core after label generation would fall
/// below min_core_px, together with their dots. Used to build scenes where
/// every berry is guaranteed detectable.
void prune_small_cores(Scene& scene, const LabelGenConfig& lg, int min_core_px);

// Evaluation-side augmentations.
Raster<std::uint8_t> hflip(const Raster<std::uint8_t>& img);
DotList hflip_dots(const DotList& dots, int image_w);
/// k x k box blur, k in {3,5,7}.
Raster<std::uint8_t> box_blur(const Raster<std::uint8_t>& img, int k);
/// v -> v^g on normalized intensity, g in [0.8, 1.2].
Raster<std::uint8_t> gamma_map(const Raster<std::uint8_t>& img, double g);

}  // namespace berrydet

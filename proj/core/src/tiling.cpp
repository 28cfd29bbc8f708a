#include "berrydet/tiling.hpp"

#include <cmath>

namespace berrydet {

namespace {

std::vector<int> axis_origins(int image_dim, int patch_dim, int stride) {
  std::vector<int> origins;
  for (int o = 0; o + patch_dim <= image_dim; o += stride) origins.push_back(o);
  // Clamp a final placement to the border when the regular grid stops short.
  if (origins.back() + patch_dim < image_dim)
    origins.push_back(image_dim - patch_dim);
  return origins;
}

}  // namespace

PatchGrid plan_grid(int image_w, int image_h, int patch_w, int patch_h,
                    double overlap_fraction) {
  if (patch_w <= 0 || patch_h <= 0 || image_w <= 0 || image_h <= 0)
    throw ConfigError("plan_grid: dimensions must be positive");
  if (patch_w > image_w || patch_h > image_h)
    throw ConfigError("plan_grid: patch exceeds image dimensions");
  if (overlap_fraction < 0.0 || overlap_fraction >= 1.0)
    throw ConfigError("plan_grid: overlap_fraction must be in [0,1)");

  PatchGrid g;
  g.image_w = image_w;
  g.image_h = image_h;
  g.patch_w = patch_w;
  g.patch_h = patch_h;
  g.stride_x = static_cast<int>(std::lround(patch_w * (1.0 - overlap_fraction)));
  g.stride_y = static_cast<int>(std::lround(patch_h * (1.0 - overlap_fraction)));
  if (g.stride_x < 1 || g.stride_y < 1)
    throw ConfigError("plan_grid: overlap yields a degenerate stride of 0");

  auto xs = axis_origins(image_w, patch_w, g.stride_x);
  auto ys = axis_origins(image_h, patch_h, g.stride_y);
  g.placements.reserve(xs.size() * ys.size());
  for (int y : ys)
    for (int x : xs) g.placements.push_back({x, y});
  return g;
}

PatchStack extract_stack(const ClassMask& mask, const PatchGrid& grid) {
  return PatchStack{grid, extract(mask, grid)};
}

ClassMask stitch_majority(const PatchStack& stack) {
  const PatchGrid& g = stack.grid;
  if (stack.patches.size() != g.placements.size())
    throw ValidationError("stitch_majority: patch count does not match grid");
  for (const auto& p : stack.patches)
    if (p.width() != g.patch_w || p.height() != g.patch_h)
      throw ValidationError("stitch_majority: patch dimensions do not match grid");

  // One vote plane per class; votes per pixel are bounded by the number of
  // placements covering it (at most patch_dim with stride 1).
  std::vector<Raster<std::uint16_t>> votes(
      kNumClasses, Raster<std::uint16_t>(g.image_w, g.image_h, 0));
  for (std::size_t i = 0; i < stack.patches.size(); ++i) {
    const Placement p = g.placements[i];
    const ClassMask& patch = stack.patches[i];
    for (int y = 0; y < g.patch_h; ++y) {
      const std::uint8_t* src = patch.row(y);
      for (int x = 0; x < g.patch_w; ++x)
        ++votes[src[x]].at(p.x0 + x, p.y0 + y);
    }
  }

  // Plurality with fixed tie precedence Edge > Berry > Background.
  constexpr SemClass precedence[kNumClasses] = {SemClass::Edge, SemClass::Berry,
                                                SemClass::Background};
  ClassMask out(g.image_w, g.image_h);
  for (int y = 0; y < g.image_h; ++y) {
    std::uint8_t* o = out.row(y);
    for (int x = 0; x < g.image_w; ++x) {
      SemClass best = precedence[0];
      std::uint16_t best_votes = votes[static_cast<int>(best)].at(x, y);
      for (int k = 1; k < kNumClasses; ++k) {
        std::uint16_t v = votes[static_cast<int>(precedence[k])].at(x, y);
        if (v > best_votes) {
          best = precedence[k];
          best_votes = v;
        }
      }
      o[x] = static_cast<std::uint8_t>(best);
    }
  }
  return out;
}

}  // namespace berrydet

#pragma once

#include <vector>

#include "berrydet/errors.hpp"
#include "berrydet/raster.hpp"

namespace berrydet {

struct Placement {
  int x0 = 0;
  int y0 = 0;
  bool operator==(const Placement&) const = default;
};

/// Deterministic sliding-window layout. Origins advance by the stride; the
/// final origin in each axis is clamped so the last patch ends exactly at
/// the image border (extra overlap there, never padding).
struct PatchGrid {
  int image_w = 0, image_h = 0;
  int patch_w = 0, patch_h = 0;
  int stride_x = 0, stride_y = 0;
  std::vector<Placement> placements;  // unique, row-major sorted
};

PatchGrid plan_grid(int image_w, int image_h, int patch_w, int patch_h,
                    double overlap_fraction);

struct PatchStack {
  PatchGrid grid;
  std::vector<ClassMask> patches;  // one per placement, patch_w x patch_h
};

template <typename T>
Raster<T> crop(const Raster<T>& src, Placement p, int pw, int ph) {
  Raster<T> out(pw, ph);
  for (int y = 0; y < ph; ++y)
    for (int x = 0; x < pw; ++x) out.at(x, y) = src.at(p.x0 + x, p.y0 + y);
  return out;
}

/// Cut the input into patches along the grid.
template <typename T>
std::vector<Raster<T>> extract(const Raster<T>& src, const PatchGrid& grid) {
  if (src.width() != grid.image_w || src.height() != grid.image_h)
    throw ValidationError("extract: input dimensions do not match grid");
  std::vector<Raster<T>> out;
  out.reserve(grid.placements.size());
  for (const auto& p : grid.placements)
    out.push_back(crop(src, p, grid.patch_w, grid.patch_h));
  return out;
}

PatchStack extract_stack(const ClassMask& mask, const PatchGrid& grid);

/// Reconstruct a full-image mask by per-pixel plurality over all covering
/// patches. Ties break by fixed precedence Edge > Berry > Background.
ClassMask stitch_majority(const PatchStack& stack);

}  // namespace berrydet

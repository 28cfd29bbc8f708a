// Independent brute-force oracles used to pin expected values. These stay
// deliberately naive and share no code with the library implementations.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "berrydet/components.hpp"
#include "berrydet/raster.hpp"

namespace oracles {

using berrydet::ClassMask;
using berrydet::InstanceMask;
using berrydet::Raster;
using berrydet::SemClass;

// Chessboard distance from (x,y) to the nearest pixel that does not belong
// to instance `id` (other ids, background, or outside the image).
inline int chessboard_dist_to_exterior(const InstanceMask& inst, int x, int y,
                                       std::uint16_t id) {
  const int w = inst.width(), h = inst.height();
  const int max_r = std::max(w, h);
  for (int r = 1; r <= max_r; ++r) {
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx) {
        if (std::max(std::abs(dx), std::abs(dy)) != r) continue;
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) return r;  // border is exterior
        if (inst.at(nx, ny) != id) return r;
      }
  }
  return max_r + 1;
}

// Per-pixel definition of the three-class labels.
inline ClassMask brute_force_labels(const InstanceMask& inst, int thickness) {
  ClassMask out(inst.width(), inst.height(),
                static_cast<std::uint8_t>(SemClass::Background));
  for (int y = 0; y < inst.height(); ++y)
    for (int x = 0; x < inst.width(); ++x) {
      const std::uint16_t id = inst.at(x, y);
      if (id == 0) continue;
      const bool edge = chessboard_dist_to_exterior(inst, x, y, id) <= thickness;
      out.at(x, y) = static_cast<std::uint8_t>(edge ? SemClass::Edge : SemClass::Berry);
    }
  return out;
}

// Recursive-style flood fill CCL over one target class, 4-connectivity.
// Returns each region as a sorted set of (y,x) keys.
inline std::vector<std::set<std::pair<int, int>>> flood_fill_regions(
    const ClassMask& mask, SemClass target, int min_px) {
  const int w = mask.width(), h = mask.height();
  Raster<std::uint8_t> seen(w, h, 0);
  std::vector<std::set<std::pair<int, int>>> regions;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (seen.at(x, y) || berrydet::sem_at(mask, x, y) != target) continue;
      std::set<std::pair<int, int>> region;
      std::vector<std::pair<int, int>> todo{{x, y}};
      seen.at(x, y) = 1;
      while (!todo.empty()) {
        auto [cx, cy] = todo.back();
        todo.pop_back();
        region.insert({cy, cx});
        const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          int nx = cx + dx[k], ny = cy + dy[k];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          if (seen.at(nx, ny) || berrydet::sem_at(mask, nx, ny) != target) continue;
          seen.at(nx, ny) = 1;
          todo.push_back({nx, ny});
        }
      }
      if (static_cast<int>(region.size()) >= min_px) regions.push_back(std::move(region));
    }
  return regions;
}

// Same-color 4-connected regions of an RGB raster, skipping one background
// color; regions keyed by sorted pixel sets.
inline std::vector<std::set<std::pair<int, int>>> flood_fill_color_regions(
    const Raster<berrydet::Rgb>& px, berrydet::Rgb background) {
  const int w = px.width(), h = px.height();
  Raster<std::uint8_t> seen(w, h, 0);
  std::vector<std::set<std::pair<int, int>>> regions;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (seen.at(x, y) || px.at(x, y) == background) continue;
      auto color = px.at(x, y);
      std::set<std::pair<int, int>> region;
      std::vector<std::pair<int, int>> todo{{x, y}};
      seen.at(x, y) = 1;
      while (!todo.empty()) {
        auto [cx, cy] = todo.back();
        todo.pop_back();
        region.insert({cy, cx});
        const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          int nx = cx + dx[k], ny = cy + dy[k];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          if (seen.at(nx, ny) || !(px.at(nx, ny) == color)) continue;
          seen.at(nx, ny) = 1;
          todo.push_back({nx, ny});
        }
      }
      regions.push_back(std::move(region));
    }
  return regions;
}

struct OlsFit {
  double slope = 0.0, intercept = 0.0, r_squared = 0.0;
};

// Normal-equations route: solve [n Sx; Sx Sxx] [b; m] = [Sy; Sxy] by Cramer,
// then R^2 from the residuals directly.
inline OlsFit normal_equations_ols(const std::vector<std::pair<double, double>>& pts) {
  double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = n * sxx - sx * sx;
  OlsFit fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sxx * sy - sx * sxy) / det;
  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / n;
  for (auto [x, y] : pts) {
    const double e = y - (fit.slope * x + fit.intercept);
    ss_res += e * e;
    ss_tot += (y - mean_y) * (y - mean_y);
  }
  fit.r_squared = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

// Random instance mask: stamp shapes painter-style, then split the result
// into 4-connected regions with fresh ids so the single-blob invariant holds.
inline InstanceMask random_instance_mask(std::mt19937_64& rng, int max_dim = 64) {
  std::uniform_int_distribution<int> rdim(8, max_dim);
  const int w = rdim(rng), h = rdim(rng);
  Raster<int> paint(w, h, 0);
  std::uniform_int_distribution<int> nshapes(0, 8);
  std::uniform_int_distribution<int> rx(0, w - 1), ry(0, h - 1), rs(1, 9);
  std::bernoulli_distribution disc_shape(0.5);
  const int n = nshapes(rng);
  for (int i = 1; i <= n; ++i) {
    const int cx = rx(rng), cy = ry(rng), s = rs(rng);
    for (int y = cy - s; y <= cy + s; ++y)
      for (int x = cx - s; x <= cx + s; ++x) {
        if (x < 0 || y < 0 || x >= w || y >= h) continue;
        if (disc_shape(rng) &&
            (x - cx) * (x - cx) + (y - cy) * (y - cy) > s * s)
          continue;
        paint.at(x, y) = i;
      }
  }
  InstanceMask inst(w, h, 0);
  std::uint16_t next = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (paint.at(x, y) == 0 || inst.at(x, y) != 0) continue;
      ++next;
      const int color = paint.at(x, y);
      std::vector<std::pair<int, int>> todo{{x, y}};
      inst.at(x, y) = next;
      while (!todo.empty()) {
        auto [cx, cy] = todo.back();
        todo.pop_back();
        const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          int nx = cx + dx[k], ny = cy + dy[k];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          if (inst.at(nx, ny) != 0 || paint.at(nx, ny) != color) continue;
          inst.at(nx, ny) = next;
          todo.push_back({nx, ny});
        }
      }
    }
  return inst;
}

// Random three-class mask with blobby structure plus salt noise.
inline ClassMask random_class_mask(std::mt19937_64& rng, int max_dim = 64) {
  std::uniform_int_distribution<int> rdim(8, max_dim);
  const int w = rdim(rng), h = rdim(rng);
  ClassMask mask(w, h, 0);
  std::uniform_int_distribution<int> nblobs(0, 6);
  std::uniform_int_distribution<int> rx(0, w - 1), ry(0, h - 1), rs(1, 8);
  std::uniform_int_distribution<int> rclass(0, 2);
  const int n = nblobs(rng);
  for (int i = 0; i < n; ++i) {
    const int cx = rx(rng), cy = ry(rng), s = rs(rng);
    const auto cls = static_cast<std::uint8_t>(rclass(rng));
    for (int y = cy - s; y <= cy + s; ++y)
      for (int x = cx - s; x <= cx + s; ++x)
        if (x >= 0 && y >= 0 && x < w && y < h &&
            (x - cx) * (x - cx) + (y - cy) * (y - cy) <= s * s)
          mask.at(x, y) = cls;
  }
  std::bernoulli_distribution salt(0.02);
  for (auto& v : mask.data())
    if (salt(rng)) v = static_cast<std::uint8_t>(rclass(rng));
  return mask;
}

// Axis-aligned digital disc: pixels with (x-cx)^2+(y-cy)^2 <= r^2.
inline std::vector<berrydet::Pixel> raster_disc(int cx, int cy, int r) {
  std::vector<berrydet::Pixel> px;
  for (int y = cy - r; y <= cy + r; ++y)
    for (int x = cx - r; x <= cx + r; ++x)
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) px.push_back({x, y});
  return px;
}

}  // namespace oracles

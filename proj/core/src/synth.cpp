#include "berrydet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "berrydet/annotation.hpp"
#include "berrydet/components.hpp"
#include "berrydet/errors.hpp"

namespace berrydet {

namespace {

struct Disc {
  int cx = 0, cy = 0, r = 0;
};

bool disc_inside(const Disc& d, int w, int h) {
  return d.cx - d.r >= 0 && d.cy - d.r >= 0 && d.cx + d.r < w && d.cy + d.r < h;
}

double center_dist(const Disc& a, const Disc& b) {
  const double dx = a.cx - b.cx, dy = a.cy - b.cy;
  return std::sqrt(dx * dx + dy * dy);
}

void validate(const SceneConfig& cfg) {
  if (cfg.image_w <= 0 || cfg.image_h <= 0)
    throw ConfigError("scene: image dimensions must be positive");
  if (cfg.radius_px.lo < 2 || cfg.radius_px.hi < cfg.radius_px.lo)
    throw ConfigError("scene: radius range invalid (radii must be >= 2)");
  if (cfg.berries_per_cluster.lo < 0 ||
      cfg.berries_per_cluster.hi < cfg.berries_per_cluster.lo)
    throw ConfigError("scene: berries_per_cluster range invalid");
  if (cfg.touch_probability < 0.0 || cfg.touch_probability > 1.0)
    throw ConfigError("scene: touch_probability must be in [0,1]");
  if (cfg.n_clusters < 0) throw ConfigError("scene: n_clusters must be >= 0");
  if (2 * cfg.radius_px.hi + 2 >= std::min(cfg.image_w, cfg.image_h))
    throw ConfigError("scene: image too small for the largest berry radius");
}

constexpr int kPlacementRetries = 200;

}  // namespace

Scene generate_scene(const SceneConfig& cfg) {
  validate(cfg);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<int> rrad(cfg.radius_px.lo, cfg.radius_px.hi);
  std::uniform_int_distribution<int> rcount(cfg.berries_per_cluster.lo,
                                            cfg.berries_per_cluster.hi);
  std::normal_distribution<double> spread(0.0, cfg.cluster_spread_px);

  const int margin = cfg.radius_px.hi + 1;
  std::uniform_int_distribution<int> rcx(margin, cfg.image_w - 1 - margin);
  std::uniform_int_distribution<int> rcy(margin, cfg.image_h - 1 - margin);

  std::vector<Disc> discs;
  for (int c = 0; c < cfg.n_clusters; ++c) {
    const int ccx = rcx(rng), ccy = rcy(rng);
    const int n_berries = rcount(rng);
    std::vector<int> cluster;  // indices into discs
    for (int b = 0; b < n_berries; ++b) {
      Disc d;
      d.r = rrad(rng);
      bool placed = false;
      for (int attempt = 0; attempt < kPlacementRetries && !placed; ++attempt) {
        if (cluster.empty()) {
          d.cx = ccx;
          d.cy = ccy;
        } else if (coin(rng) < cfg.touch_probability) {
          // Tangent or overlapping a random cluster neighbor.
          const Disc& prev = discs[cluster[std::uniform_int_distribution<std::size_t>(
              0, cluster.size() - 1)(rng)]];
          const double depth =
              coin(rng) * std::min(prev.r, d.r);  // 0 = tangent
          const double dist = prev.r + d.r - depth;
          const double a = angle(rng);
          d.cx = prev.cx + static_cast<int>(std::lround(dist * std::cos(a)));
          d.cy = prev.cy + static_cast<int>(std::lround(dist * std::sin(a)));
        } else {
          d.cx = ccx + static_cast<int>(std::lround(spread(rng)));
          d.cy = ccy + static_cast<int>(std::lround(spread(rng)));
          // Non-touching placement keeps a 2 px gap to everything.
          bool clear = true;
          for (const Disc& o : discs)
            if (center_dist(d, o) < o.r + d.r + 2.0) {
              clear = false;
              break;
            }
          if (!clear) continue;
        }
        if (disc_inside(d, cfg.image_w, cfg.image_h)) placed = true;
      }
      if (!placed)
        throw ValidationError(
            "scene generation: could not place berry " + std::to_string(b) +
            " of cluster " + std::to_string(c) +
            " within bounds/spacing constraints after bounded retries");
      cluster.push_back(static_cast<int>(discs.size()));
      discs.push_back(d);
    }
  }

  // Painter's order: later discs occlude earlier ones.
  Raster<int> owner(cfg.image_w, cfg.image_h, 0);
  for (std::size_t i = 0; i < discs.size(); ++i) {
    const Disc& d = discs[i];
    for (int y = d.cy - d.r; y <= d.cy + d.r; ++y)
      for (int x = d.cx - d.r; x <= d.cx + d.r; ++x) {
        const long long dx = x - d.cx, dy = y - d.cy;
        if (dx * dx + dy * dy <= static_cast<long long>(d.r) * d.r)
          owner.at(x, y) = static_cast<int>(i) + 1;
      }
  }

  // Occlusion can fragment a disc; an instance keeps only its largest
  // 4-connected visible part, and vanishes entirely below min_visible_px.
  std::vector<std::vector<Pixel>> visible(discs.size() + 1);
  for (int y = 0; y < cfg.image_h; ++y)
    for (int x = 0; x < cfg.image_w; ++x)
      if (int id = owner.at(x, y); id != 0) visible[id].push_back({x, y});

  Raster<std::uint8_t> seen(cfg.image_w, cfg.image_h, 0);
  for (std::size_t id = 1; id < visible.size(); ++id) {
    auto& pix = visible[id];
    if (pix.empty()) continue;
    std::vector<Pixel> largest;
    std::vector<Pixel> stack, current;
    for (const auto& start : pix) {
      if (seen.at(start.x, start.y)) continue;
      current.clear();
      stack.assign(1, start);
      seen.at(start.x, start.y) = 1;
      while (!stack.empty()) {
        Pixel p = stack.back();
        stack.pop_back();
        current.push_back(p);
        constexpr int dx4[4] = {1, -1, 0, 0};
        constexpr int dy4[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          int nx = p.x + dx4[k], ny = p.y + dy4[k];
          if (!owner.in_bounds(nx, ny) || seen.at(nx, ny)) continue;
          if (owner.at(nx, ny) != static_cast<int>(id)) continue;
          seen.at(nx, ny) = 1;
          stack.push_back({nx, ny});
        }
      }
      if (current.size() > largest.size()) largest.swap(current);
    }
    for (const auto& p : pix) owner.at(p.x, p.y) = 0;
    if (static_cast<int>(largest.size()) >= cfg.min_visible_px)
      for (const auto& p : largest) owner.at(p.x, p.y) = static_cast<int>(id);
    pix = std::move(largest);
    if (static_cast<int>(pix.size()) < cfg.min_visible_px) pix.clear();
  }

  // Renumber surviving instances densely in raster order of first encounter.
  Scene scene;
  scene.instances = InstanceMask(cfg.image_w, cfg.image_h, 0);
  std::vector<std::uint16_t> remap(discs.size() + 1, 0);
  std::uint16_t next_id = 0;
  std::vector<const std::vector<Pixel>*> by_new_id;
  for (int y = 0; y < cfg.image_h; ++y)
    for (int x = 0; x < cfg.image_w; ++x) {
      const int old = owner.at(x, y);
      if (old == 0) continue;
      if (remap[old] == 0) {
        remap[old] = ++next_id;
        by_new_id.push_back(&visible[old]);
      }
      scene.instances.at(x, y) = remap[old];
    }

  // One dot per instance: the most interior visible pixel (max chessboard
  // depth), ties broken toward the visible centroid. Depth via two-pass
  // chamfer so the dot sits in the berry core whenever one exists; a plain
  // centroid can fall on the edge band of a thin occlusion crescent.
  Raster<int> depth(cfg.image_w, cfg.image_h, 0);
  constexpr int kInf = 1 << 28;
  for (int y = 0; y < cfg.image_h; ++y)
    for (int x = 0; x < cfg.image_w; ++x) {
      if (scene.instances.at(x, y) == 0) continue;
      bool border = x == 0 || y == 0 || x == cfg.image_w - 1 || y == cfg.image_h - 1;
      int d = border ? 1 : kInf;
      const std::uint16_t id = scene.instances.at(x, y);
      for (int dy = -1; dy <= 0 && d > 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dy == 0 && dx >= 0) break;
          if (!depth.in_bounds(x + dx, y + dy)) continue;
          if (scene.instances.at(x + dx, y + dy) != id)
            d = 1;
          else
            d = std::min(d, depth.at(x + dx, y + dy) + 1);
        }
      // Unscanned forward neighbors may still be exterior.
      for (int dy = 0; dy <= 1; ++dy)
        for (int dx = dy == 0 ? 1 : -1; dx <= 1; ++dx)
          if (depth.in_bounds(x + dx, y + dy) &&
              scene.instances.at(x + dx, y + dy) != id)
            d = std::min(d, 1);
      depth.at(x, y) = d;
    }
  for (int y = cfg.image_h - 1; y >= 0; --y)
    for (int x = cfg.image_w - 1; x >= 0; --x) {
      if (scene.instances.at(x, y) == 0) continue;
      const std::uint16_t id = scene.instances.at(x, y);
      int d = depth.at(x, y);
      for (int dy = 0; dy <= 1 && d > 1; ++dy)
        for (int dx = dy == 0 ? 1 : -1; dx <= 1; ++dx) {
          if (!depth.in_bounds(x + dx, y + dy)) continue;
          if (scene.instances.at(x + dx, y + dy) != id)
            d = std::min(d, 1);
          else
            d = std::min(d, depth.at(x + dx, y + dy) + 1);
        }
      depth.at(x, y) = d;
    }

  for (const auto* pix : by_new_id) {
    double sx = 0.0, sy = 0.0;
    for (const auto& p : *pix) {
      sx += p.x;
      sy += p.y;
    }
    const double cx = sx / pix->size(), cy = sy / pix->size();
    Pixel best = (*pix)[0];
    int best_depth = -1;
    double best_d = 1e30;
    for (const auto& p : *pix) {
      const int dep = depth.at(p.x, p.y);
      const double d = (p.x - cx) * (p.x - cx) + (p.y - cy) * (p.y - cy);
      if (dep > best_depth || (dep == best_depth && d < best_d)) {
        best_depth = dep;
        best_d = d;
        best = p;
      }
    }
    scene.dots.push_back({best.x, best.y});
  }

  // Cosmetic shaded rendering; the pipeline itself never reads this.
  scene.image = Raster<std::uint8_t>(cfg.image_w, cfg.image_h, 18);
  for (const Disc& d : discs)
    for (int y = d.cy - d.r; y <= d.cy + d.r; ++y)
      for (int x = d.cx - d.r; x <= d.cx + d.r; ++x) {
        const double dx = x - d.cx, dy = y - d.cy;
        const double q = (dx * dx + dy * dy) / (static_cast<double>(d.r) * d.r);
        if (q > 1.0) continue;
        const double shade = 90.0 + 140.0 * std::sqrt(1.0 - q);
        scene.image.at(x, y) = static_cast<std::uint8_t>(std::min(255.0, shade));
      }
  return scene;
}

void prune_small_cores(Scene& scene, const LabelGenConfig& lg, int min_core_px) {
  ClassMask labels = generate_labels(scene.instances, lg);
  const int n = instance_count(scene.instances);
  std::vector<int> core_px(n + 1, 0);
  for (int y = 0; y < labels.height(); ++y)
    for (int x = 0; x < labels.width(); ++x)
      if (sem_at(labels, x, y) == SemClass::Berry)
        ++core_px[scene.instances.at(x, y)];

  std::vector<std::uint16_t> remap(n + 1, 0);
  std::uint16_t next_id = 0;
  DotList kept_dots;
  for (int id = 1; id <= n; ++id) {
    if (core_px[id] >= min_core_px) {
      remap[id] = ++next_id;
      kept_dots.push_back(scene.dots[id - 1]);
    }
  }
  for (auto& v : scene.instances.data()) v = remap[v];
  scene.dots = std::move(kept_dots);
}

Raster<std::uint8_t> hflip(const Raster<std::uint8_t>& img) {
  Raster<std::uint8_t> out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      out.at(x, y) = img.at(img.width() - 1 - x, y);
  return out;
}

DotList hflip_dots(const DotList& dots, int image_w) {
  DotList out;
  out.reserve(dots.size());
  for (const auto& d : dots) out.push_back({image_w - 1 - d.x, d.y});
  return out;
}

Raster<std::uint8_t> box_blur(const Raster<std::uint8_t>& img, int k) {
  if (k != 3 && k != 5 && k != 7)
    throw ConfigError("box_blur: kernel size must be 3, 5 or 7");
  const int t = k / 2;
  Raster<std::uint8_t> out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      int sum = 0, cnt = 0;  // window clipped at borders
      for (int dy = -t; dy <= t; ++dy)
        for (int dx = -t; dx <= t; ++dx) {
          if (!img.in_bounds(x + dx, y + dy)) continue;
          sum += img.at(x + dx, y + dy);
          ++cnt;
        }
      out.at(x, y) = static_cast<std::uint8_t>((sum + cnt / 2) / cnt);
    }
  return out;
}

Raster<std::uint8_t> gamma_map(const Raster<std::uint8_t>& img, double g) {
  if (g < 0.8 || g > 1.2)
    throw ConfigError("gamma_map: gamma must be in [0.8, 1.2]");
  std::uint8_t lut[256];
  for (int v = 0; v < 256; ++v)
    lut[v] = static_cast<std::uint8_t>(
        std::lround(255.0 * std::pow(v / 255.0, g)));
  Raster<std::uint8_t> out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) out.data()[i] = lut[img.data()[i]];
  return out;
}

}  // namespace berrydet

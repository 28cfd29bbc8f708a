#include "berrydet/components.hpp"

#include <algorithm>
#include <cmath>

#include "berrydet/errors.hpp"

namespace berrydet {

namespace {

constexpr int kDx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};

// Shared-state boundary walk: `membership` holds the owning component id
// per pixel, `stamp` dedupes ring pixels per component without a fresh
// bitmap each time.
double surround_fraction(const BerryComponent& comp, const ClassMask& mask,
                         const Raster<int>& membership, Raster<int>& stamp) {
  std::int64_t boundary = 0, edge = 0;
  const auto edge_label = static_cast<std::uint8_t>(SemClass::Edge);
  for (const auto& p : comp.pixels) {
    for (int k = 0; k < 8; ++k) {
      const int nx = p.x + kDx8[k], ny = p.y + kDy8[k];
      if (!mask.in_bounds(nx, ny)) continue;  // ring clipped at borders
      if (membership.at(nx, ny) == comp.id) continue;
      if (stamp.at(nx, ny) == comp.id) continue;
      stamp.at(nx, ny) = comp.id;
      ++boundary;
      if (mask.at(nx, ny) == edge_label) ++edge;
    }
  }
  if (boundary == 0) return 0.0;
  return static_cast<double>(edge) / static_cast<double>(boundary);
}

}  // namespace

std::vector<BerryComponent> label_components(const ClassMask& mask,
                                             const ComponentConfig& cfg) {
  if (cfg.min_component_px < 1)
    throw ConfigError("min_component_px must be >= 1");
  const int w = mask.width(), h = mask.height();
  const auto berry = static_cast<std::uint8_t>(SemClass::Berry);

  Raster<int> membership(w, h, 0);
  std::vector<BerryComponent> comps;
  std::vector<Pixel> stack;
  int next_id = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask.at(x, y) != berry || membership.at(x, y) != 0) continue;
      BerryComponent comp;
      comp.id = ++next_id;
      stack.clear();
      stack.push_back({x, y});
      membership.at(x, y) = comp.id;
      while (!stack.empty()) {
        Pixel p = stack.back();
        stack.pop_back();
        comp.pixels.push_back(p);
        for (int k = 0; k < 4; ++k) {  // 4-connectivity
          const int nx = p.x + kDx8[k], ny = p.y + kDy8[k];
          if (!mask.in_bounds(nx, ny) || membership.at(nx, ny) != 0) continue;
          if (mask.at(nx, ny) != berry) continue;
          membership.at(nx, ny) = comp.id;
          stack.push_back({nx, ny});
        }
      }
      if (static_cast<int>(comp.pixels.size()) < cfg.min_component_px) {
        --next_id;
        for (const auto& p : comp.pixels) membership.at(p.x, p.y) = -1;
        continue;
      }
      std::sort(comp.pixels.begin(), comp.pixels.end(),
                [](const Pixel& a, const Pixel& b) {
                  return a.y != b.y ? a.y < b.y : a.x < b.x;
                });
      comps.push_back(std::move(comp));
    }
  }

  // Ids stay dense in raster order of first pixel after dropping fragments.
  for (std::size_t i = 0; i < comps.size(); ++i)
    comps[i].id = static_cast<int>(i) + 1;
  compute_descriptors(comps, mask);
  return comps;
}

void compute_descriptors(std::vector<BerryComponent>& comps, const ClassMask& mask) {
  const int w = mask.width(), h = mask.height();
  Raster<int> membership(w, h, 0);
  for (const auto& comp : comps)
    for (const auto& p : comp.pixels) membership.at(p.x, p.y) = comp.id;

  Raster<int> stamp(w, h, 0);
  for (auto& comp : comps) {
    comp.area_px = static_cast<int>(comp.pixels.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& p : comp.pixels) {
      sx += p.x;
      sy += p.y;
    }
    comp.centroid_x = sx / comp.area_px;
    comp.centroid_y = sy / comp.area_px;
    auto [major, minor] = compute_axes(comp.pixels);
    comp.major_semi_axis_px = major;
    comp.minor_semi_axis_px = minor;
    comp.edge_surround_fraction = surround_fraction(comp, mask, membership, stamp);
  }
}

std::pair<double, double> compute_axes(const std::vector<Pixel>& pixels) {
  const std::size_t n = pixels.size();
  if (n == 0) throw ValidationError("compute_axes: empty pixel set");
  double sx = 0.0, sy = 0.0;
  for (const auto& p : pixels) {
    sx += p.x;
    sy += p.y;
  }
  const double mx = sx / n, my = sy / n;
  double mxx = 0.0, myy = 0.0, mxy = 0.0;
  for (const auto& p : pixels) {
    const double dx = p.x - mx, dy = p.y - my;
    mxx += dx * dx;
    myy += dy * dy;
    mxy += dx * dy;
  }
  mxx /= n;
  myy /= n;
  mxy /= n;
  // Eigenvalues of the normalized second-central-moment matrix; semi-axes
  // of the equivalent ellipse are 2*sqrt(lambda).
  const double tr = mxx + myy;
  const double det = mxx * myy - mxy * mxy;
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  const double l1 = tr / 2.0 + disc;
  const double l2 = std::max(0.0, tr / 2.0 - disc);
  return {2.0 * std::sqrt(l1), 2.0 * std::sqrt(l2)};
}

double edge_surround(const BerryComponent& comp, const ClassMask& mask) {
  Raster<int> membership(mask.width(), mask.height(), 0);
  for (const auto& p : comp.pixels) membership.at(p.x, p.y) = comp.id;
  Raster<int> stamp(mask.width(), mask.height(), 0);
  BerryComponent c = comp;
  if (c.id == 0) c.id = 1;  // stamp marker must be nonzero
  for (const auto& p : c.pixels) membership.at(p.x, p.y) = c.id;
  return surround_fraction(c, mask, membership, stamp);
}

}  // namespace berrydet

#include "berrydet/labelgen.hpp"

#include <algorithm>

#include "berrydet/errors.hpp"

namespace berrydet {

namespace {

// Row pass: ok iff every id within the horizontal window (clipped pixels
// count as outside) equals the center id. A pixel p is Berry iff every
// row y+dy in the vertical window passes the row test AND carries p's id;
// composing the two passes reproduces the full (2t+1)^2 chessboard window.
void horizontal_same(const InstanceMask& inst, int t, Raster<std::uint8_t>& out) {
  const int w = inst.width(), h = inst.height();
  for (int y = 0; y < h; ++y) {
    const std::uint16_t* ids = inst.row(y);
    std::uint8_t* o = out.row(y);
    for (int x = 0; x < w; ++x) {
      if (ids[x] == 0) {
        o[x] = 0;
        continue;
      }
      bool ok = x - t >= 0 && x + t < w;
      for (int dx = -t; ok && dx <= t; ++dx) ok = ids[x + dx] == ids[x];
      o[x] = ok ? 1 : 0;
    }
  }
}

}  // namespace

ClassMask generate_labels(const InstanceMask& inst, const LabelGenConfig& cfg) {
  if (cfg.edge_thickness_px < 1)
    throw ConfigError("edge_thickness_px must be >= 1");
  const int w = inst.width(), h = inst.height(), t = cfg.edge_thickness_px;

  Raster<std::uint8_t> rowok(w, h, 0);
  horizontal_same(inst, t, rowok);

  ClassMask out(w, h, static_cast<std::uint8_t>(SemClass::Background));
  for (int y = 0; y < h; ++y) {
    const std::uint16_t* ids = inst.row(y);
    std::uint8_t* o = out.row(y);
    for (int x = 0; x < w; ++x) {
      if (ids[x] == 0) continue;
      bool core = y - t >= 0 && y + t < h;
      for (int dy = -t; core && dy <= t; ++dy)
        core = inst.at(x, y + dy) == ids[x] && rowok.at(x, y + dy);
      o[x] = static_cast<std::uint8_t>(core ? SemClass::Berry : SemClass::Edge);
    }
  }
  return out;
}

bool berry_core_exists(const InstanceMask& inst, const LabelGenConfig& cfg,
                       std::uint16_t id) {
  if (id == 0 ||
      std::find(inst.data().begin(), inst.data().end(), id) == inst.data().end())
    throw ValidationError("berry_core_exists: id " + std::to_string(id) +
                          " not present in instance mask");
  ClassMask labels = generate_labels(inst, cfg);
  for (int y = 0; y < inst.height(); ++y)
    for (int x = 0; x < inst.width(); ++x)
      if (inst.at(x, y) == id && sem_at(labels, x, y) == SemClass::Berry)
        return true;
  return false;
}

}  // namespace berrydet

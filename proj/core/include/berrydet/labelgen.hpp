#pragma once

#include "berrydet/raster.hpp"

namespace berrydet {

struct LabelGenConfig {
  int edge_thickness_px = 2;
};

/// Convert instance ids into the three-class label mask. For every instance,
/// pixels whose chessboard distance to the nearest pixel outside that
/// instance (other instances, background, or the image border) is at most
/// edge_thickness_px become Edge; the remaining instance pixels become
/// Berry. Background stays background: the edge band is strictly inner, so
/// the berry+edge footprint equals the instance footprint exactly.
ClassMask generate_labels(const InstanceMask& inst, const LabelGenConfig& cfg);

/// True iff the instance keeps at least one Berry pixel after label
/// generation (small berries can erode to edge-only). Throws ValidationError
/// for an id not present in the mask.
bool berry_core_exists(const InstanceMask& inst, const LabelGenConfig& cfg,
                       std::uint16_t id);

}  // namespace berrydet

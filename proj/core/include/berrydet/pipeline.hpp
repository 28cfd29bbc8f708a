#pragma once

#include <string>

#include "berrydet/classify.hpp"
#include "berrydet/components.hpp"
#include "berrydet/postfilter.hpp"
#include "berrydet/tiling.hpp"

namespace berrydet {

struct GridConfig {
  int patch_w = 512;
  int patch_h = 384;
  double overlap = 0.5;
};

struct DetectResult {
  PatchGrid grid;
  ClassMask stitched;
  std::vector<BerryComponent> candidates;  // post-threshold, pre-filter
  FilterResult filtered;
};

/// Full post-classification pipeline for one image: plan grid, classify
/// each patch via the backend, stitch by majority vote, label components,
/// apply the geometric filters. Patch classification runs on `workers`
/// threads; the result is independent of the worker count.
DetectResult detect_image(const Classifier& classifier, const std::string& image_id,
                          int image_w, int image_h, const GridConfig& grid_cfg,
                          const ComponentConfig& comp_cfg, const FilterConfig& filter_cfg,
                          int workers = 1);

}  // namespace berrydet

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "berrydet/components.hpp"

namespace berrydet {

struct FilterConfig {
  double axis_ratio_min = 0.3;
  double area_ratio_min = 0.3;
  double edge_surround_min = 0.4;
  bool axis_enabled = true;
  bool area_enabled = true;
  bool edge_enabled = true;
  // When true, the circle radius is the mean of the full axes instead of
  // the semi-axes (alternate reading, for sensitivity runs only).
  bool full_axis_mode = false;
};

enum RejectReason : unsigned {
  kRejectAxis = 1u << 0,
  kRejectArea = 1u << 1,
  kRejectEdge = 1u << 2,
};

std::string reject_reasons_str(unsigned reasons);

/// keep iff minor/major >= axis_ratio_min; degenerate zero major axis rejects.
bool axis_filter(const BerryComponent& comp, const FilterConfig& cfg);

/// Circle-area test: r = mean of the semi-axes; keep iff
/// area_px >= area_ratio_min * pi * r^2 (inclusive).
bool area_filter(const BerryComponent& comp, const FilterConfig& cfg);

/// keep iff edge_surround_fraction >= edge_surround_min (inclusive).
bool edge_filter(const BerryComponent& comp, const FilterConfig& cfg);

struct RejectedComponent {
  BerryComponent comp;
  unsigned reasons = 0;  // RejectReason bits
};

struct FilterResult {
  std::vector<BerryComponent> kept;
  std::vector<RejectedComponent> rejected;
};

/// Conjunction of the enabled filters; rejected components keep the full
/// set of failed-filter reasons for ablation reporting.
FilterResult apply_filters(const std::vector<BerryComponent>& comps,
                           const FilterConfig& cfg);

}  // namespace berrydet

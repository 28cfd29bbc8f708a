#include "berrydet/postfilter.hpp"

#include <numbers>

#include "berrydet/errors.hpp"

namespace berrydet {

namespace {

void validate(const FilterConfig& cfg) {
  if (cfg.axis_ratio_min < 0.0 || cfg.axis_ratio_min > 1.0 ||
      cfg.area_ratio_min < 0.0 || cfg.area_ratio_min > 1.0 ||
      cfg.edge_surround_min < 0.0 || cfg.edge_surround_min > 1.0)
    throw ConfigError("filter thresholds must be in [0,1]");
}

}  // namespace

std::string reject_reasons_str(unsigned reasons) {
  std::string s;
  auto append = [&s](const char* name) {
    if (!s.empty()) s += '|';
    s += name;
  };
  if (reasons & kRejectAxis) append("axis");
  if (reasons & kRejectArea) append("area");
  if (reasons & kRejectEdge) append("edge");
  return s;
}

bool axis_filter(const BerryComponent& comp, const FilterConfig& cfg) {
  validate(cfg);
  if (comp.major_semi_axis_px <= 0.0) return false;
  return comp.minor_semi_axis_px / comp.major_semi_axis_px >= cfg.axis_ratio_min;
}

bool area_filter(const BerryComponent& comp, const FilterConfig& cfg) {
  validate(cfg);
  double r = (comp.minor_semi_axis_px + comp.major_semi_axis_px) / 2.0;
  if (cfg.full_axis_mode) r *= 2.0;
  const double circle_area = std::numbers::pi * r * r;
  return static_cast<double>(comp.area_px) >= cfg.area_ratio_min * circle_area;
}

bool edge_filter(const BerryComponent& comp, const FilterConfig& cfg) {
  validate(cfg);
  return comp.edge_surround_fraction >= cfg.edge_surround_min;
}

FilterResult apply_filters(const std::vector<BerryComponent>& comps,
                           const FilterConfig& cfg) {
  validate(cfg);
  FilterResult result;
  for (const auto& comp : comps) {
    unsigned reasons = 0;
    if (cfg.axis_enabled && !axis_filter(comp, cfg)) reasons |= kRejectAxis;
    if (cfg.area_enabled && !area_filter(comp, cfg)) reasons |= kRejectArea;
    if (cfg.edge_enabled && !edge_filter(comp, cfg)) reasons |= kRejectEdge;
    if (reasons == 0)
      result.kept.push_back(comp);
    else
      result.rejected.push_back({comp, reasons});
  }
  return result;
}

}  // namespace berrydet

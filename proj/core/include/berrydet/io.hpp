#pragma once

#include <filesystem>
#include <vector>

#include "berrydet/annotation.hpp"
#include "berrydet/components.hpp"
#include "berrydet/postfilter.hpp"
#include "berrydet/raster.hpp"

namespace berrydet {

// ClassMask on disk: 8-bit grayscale PNG with raw values {0,1,2}.
ClassMask load_class_mask(const std::filesystem::path& path);
void save_class_mask(const std::filesystem::path& path, const ClassMask& mask);

// InstanceMask on disk: 16-bit grayscale PNG, pixel value = instance id.
InstanceMask load_instance_mask(const std::filesystem::path& path);
void save_instance_mask(const std::filesystem::path& path, const InstanceMask& mask);

Raster<std::uint8_t> load_gray(const std::filesystem::path& path);
void save_gray(const std::filesystem::path& path, const Raster<std::uint8_t>& img);

ColorAnnotationImage load_color_annotation(const std::filesystem::path& path,
                                           const Palette& palette);

/// Human-viewable rendering: background=black, berry=green, edge=red.
void save_class_mask_color(const std::filesystem::path& path, const ClassMask& mask);

/// Fig-style overlay: kept components green, rejected black, over an
/// optional grayscale background. Undetected markers get a white box.
void save_overlay(const std::filesystem::path& path,
                  const std::vector<BerryComponent>& kept,
                  const std::vector<RejectedComponent>& rejected,
                  int image_w, int image_h,
                  const Raster<std::uint8_t>* background = nullptr,
                  const DotList* undetected = nullptr);

/// CSV, stable column order:
/// id,area_px,centroid_x,centroid_y,major_semi_axis,minor_semi_axis,edge_surround_fraction
void save_components_csv(const std::filesystem::path& path,
                         const std::vector<BerryComponent>& comps);
/// Same columns plus a trailing `reasons` column ("axis|area|edge").
void save_rejected_csv(const std::filesystem::path& path,
                       const std::vector<RejectedComponent>& rejected);

struct ComponentRecord {
  int id = 0;
  int area_px = 0;
  double centroid_x = 0.0, centroid_y = 0.0;
  double major_semi_axis = 0.0, minor_semi_axis = 0.0;
  double edge_surround_fraction = 0.0;
};
std::vector<ComponentRecord> load_components_csv(const std::filesystem::path& path);

/// Kept/candidate component ids per pixel as a 16-bit PNG (0 = none).
InstanceMask component_id_map(const std::vector<BerryComponent>& comps,
                              int image_w, int image_h);

/// Rebuild components (descriptors included) from an id map + class mask,
/// as written by the detect command.
std::vector<BerryComponent> components_from_id_map(const InstanceMask& id_map,
                                                   const ClassMask& mask);

}  // namespace berrydet

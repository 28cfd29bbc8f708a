#pragma once

#include <vector>

#include "berrydet/raster.hpp"

namespace berrydet {

struct Pixel {
  int x = 0;
  int y = 0;
  bool operator==(const Pixel&) const = default;
};

/// One 4-connected region of Berry pixels plus the geometry the filters use.
struct BerryComponent {
  int id = 0;                        // dense, raster order of first pixel
  std::vector<Pixel> pixels;         // raster order
  int area_px = 0;
  double centroid_x = 0.0, centroid_y = 0.0;
  double major_semi_axis_px = 0.0;   // from second central moments
  double minor_semi_axis_px = 0.0;
  double edge_surround_fraction = 0.0;
};

struct ComponentConfig {
  int min_component_px = 25;
};

/// 4-connected CCL over the Berry class only; regions below
/// min_component_px are dropped. Surviving components come back with all
/// descriptors filled in.
std::vector<BerryComponent> label_components(const ClassMask& mask,
                                             const ComponentConfig& cfg);

/// Semi-axes of the ellipse with the same second central moments as the
/// pixel set (unit point mass per pixel center): 2*sqrt(eigenvalue), sorted
/// major first. A single pixel yields (0, 0).
std::pair<double, double> compute_axes(const std::vector<Pixel>& pixels);

/// Fraction of the component's outer boundary ring (8-adjacent non-member
/// pixels, clipped at image borders) labeled Edge. Empty ring -> 0.
double edge_surround(const BerryComponent& comp, const ClassMask& mask);

/// Fill area, centroid, axes and edge-surround for components whose pixel
/// lists are already populated (shared scratch rasters, one pass).
void compute_descriptors(std::vector<BerryComponent>& comps, const ClassMask& mask);

}  // namespace berrydet

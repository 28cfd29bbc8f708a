#pragma once

#include <array>
#include <filesystem>
#include <optional>

#include "berrydet/raster.hpp"

namespace berrydet {

/// Four distinct berry colors plus one background color. Touching berries
/// are never annotated with the same color, so same-color regions are
/// individual instances.
struct Palette {
  std::array<Rgb, 4> berry;
  Rgb background;

  bool is_berry_color(Rgb c) const;
  void validate() const;  // throws ConfigError on color collisions
};

struct ColorAnnotationImage {
  Raster<Rgb> pixels;
  Palette palette;
};

/// Recover per-berry instance ids from a four-color annotation image.
/// Each maximal 4-connected same-color region of a berry color becomes one
/// instance; ids are assigned in raster-scan order of first encounter.
/// Throws ValidationError naming the pixel if a color is not in the palette.
InstanceMask instances_from_color_annotation(const ColorAnnotationImage& img);

/// Parse dot annotations from CSV ("x,y" per line, zero-based, no header).
/// Duplicates are rejected; with `bounds` = (width, height), out-of-bounds
/// markers are rejected too.
DotList load_dots(const std::filesystem::path& path,
                  std::optional<std::pair<int, int>> bounds = std::nullopt);

void save_dots(const std::filesystem::path& path, const DotList& dots);

/// Number of distinct nonzero ids (expects dense ids).
int instance_count(const InstanceMask& inst);

}  // namespace berrydet

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace berrydet {

/// Per-pixel semantic class used throughout the pipeline.
enum class SemClass : std::uint8_t { Background = 0, Berry = 1, Edge = 2 };

inline constexpr int kNumClasses = 3;

/// Dense row-major pixel grid with value semantics.
template <typename T>
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, T fill = T{})
      : w_(width), h_(height), data_(static_cast<std::size_t>(width) * height, fill) {
    if (width <= 0 || height <= 0)
      throw std::invalid_argument("Raster dimensions must be positive");
  }

  int width() const { return w_; }
  int height() const { return h_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  bool in_bounds(int x, int y) const { return x >= 0 && x < w_ && y >= 0 && y < h_; }

  T& at(int x, int y) { return data_[static_cast<std::size_t>(y) * w_ + x]; }
  const T& at(int x, int y) const { return data_[static_cast<std::size_t>(y) * w_ + x]; }

  T* row(int y) { return data_.data() + static_cast<std::size_t>(y) * w_; }
  const T* row(int y) const { return data_.data() + static_cast<std::size_t>(y) * w_; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool operator==(const Raster&) const = default;

 private:
  int w_ = 0;
  int h_ = 0;
  std::vector<T> data_;
};

/// Per-pixel berry-instance ids, 0 = background. Ids are dense 1..N in
/// raster order of first encounter.
using InstanceMask = Raster<std::uint16_t>;

/// Per-pixel semantic labels, values restricted to {0,1,2}.
using ClassMask = Raster<std::uint8_t>;

inline SemClass sem_at(const ClassMask& m, int x, int y) {
  return static_cast<SemClass>(m.at(x, y));
}

/// Integer pixel coordinate; x = column, y = row, zero-based.
struct Dot {
  int x = 0;
  int y = 0;
  bool operator==(const Dot&) const = default;
};

using DotList = std::vector<Dot>;

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

}  // namespace berrydet

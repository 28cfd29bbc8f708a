#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "berrydet/tiling.hpp"

namespace berrydet {

/// Pluggable per-patch pixel classifier. Stands in for the segmentation
/// network: downstream stages only ever see ClassMasks.
class Classifier {
 public:
  virtual ~Classifier() = default;

  /// Produce the patch-sized label mask for one placement of one image.
  /// Pure given its arguments; safe to call concurrently.
  virtual ClassMask classify_patch(const std::string& image_id, Placement p,
                                   int patch_w, int patch_h) const = 0;
};

/// Resolves an image id to its full-size reference ClassMask.
using MaskProvider = std::function<ClassMask(const std::string& image_id)>;

/// Returns the exact crop of the reference mask.
class OracleClassifier : public Classifier {
 public:
  explicit OracleClassifier(MaskProvider provider);
  ClassMask classify_patch(const std::string& image_id, Placement p,
                           int patch_w, int patch_h) const override;

 private:
  MaskProvider provider_;
};

struct NoiseParams {
  double flip_probability = 0.0;  // per pixel, resample from the other two classes
  double false_blob_rate = 0.0;   // Poisson mean of stamped berry discs per patch
  std::uint64_t seed = 0;         // mandatory; corruption keyed per (seed, image, placement)
};

/// Oracle crop corrupted with pixel flips and false berry blobs. The RNG
/// stream is derived from (seed, image_id, placement), so results are
/// reproducible and independent of patch processing order.
class NoisyOracleClassifier : public Classifier {
 public:
  NoisyOracleClassifier(MaskProvider provider, NoiseParams params);
  ClassMask classify_patch(const std::string& image_id, Placement p,
                           int patch_w, int patch_h) const override;

 private:
  MaskProvider provider_;
  NoiseParams params_;
};

/// Crops precomputed full-image prediction masks from `<dir>/<image_id>.png`.
/// This is the exchange contract with external inference tools.
class MaskFileClassifier : public Classifier {
 public:
  explicit MaskFileClassifier(std::filesystem::path dir);
  ClassMask classify_patch(const std::string& image_id, Placement p,
                           int patch_w, int patch_h) const override;

 private:
  std::filesystem::path dir_;
  mutable std::mutex cache_mutex_;
  mutable std::string cached_id_;
  mutable ClassMask cached_mask_;
};

}  // namespace berrydet

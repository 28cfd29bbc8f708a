#include "berrydet/classify.hpp"

#include <random>

#include "berrydet/errors.hpp"
#include "berrydet/io.hpp"

namespace berrydet {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Stream key from (seed, image, placement): corruption is reproducible and
// independent of the order patches are classified in.
std::mt19937_64 patch_rng(std::uint64_t seed, const std::string& image_id,
                          Placement p) {
  std::uint64_t k = splitmix64(seed);
  k = splitmix64(k ^ fnv1a(image_id));
  k = splitmix64(k ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x0)) << 32 |
                      static_cast<std::uint32_t>(p.y0)));
  return std::mt19937_64(k);
}

ClassMask crop_reference(const MaskProvider& provider, const std::string& image_id,
                         Placement p, int pw, int ph) {
  ClassMask full = provider(image_id);
  if (p.x0 < 0 || p.y0 < 0 || p.x0 + pw > full.width() || p.y0 + ph > full.height())
    throw ValidationError("classify_patch: placement outside image " + image_id);
  return crop(full, p, pw, ph);
}

// False positive: a berry disc, ringed by edge only for the confidently
// wrong ones. The ringless rest is what the edge-surround filter exists to
// catch (cf. the misclassified, poorly edged regions real networks emit).
constexpr double kBlobRingProbability = 0.25;
constexpr int kBlobRingThickness = 2;

void stamp_blob(ClassMask& patch, int cx, int cy, int radius, bool ring) {
  const int rr = radius + (ring ? kBlobRingThickness : 0);
  for (int y = cy - rr; y <= cy + rr; ++y)
    for (int x = cx - rr; x <= cx + rr; ++x) {
      if (!patch.in_bounds(x, y)) continue;
      const long long d2 = static_cast<long long>(x - cx) * (x - cx) +
                           static_cast<long long>(y - cy) * (y - cy);
      if (d2 <= static_cast<long long>(radius) * radius)
        patch.at(x, y) = static_cast<std::uint8_t>(SemClass::Berry);
      else if (ring && d2 <= static_cast<long long>(rr) * rr)
        patch.at(x, y) = static_cast<std::uint8_t>(SemClass::Edge);
    }
}

}  // namespace

OracleClassifier::OracleClassifier(MaskProvider provider)
    : provider_(std::move(provider)) {}

ClassMask OracleClassifier::classify_patch(const std::string& image_id, Placement p,
                                           int patch_w, int patch_h) const {
  return crop_reference(provider_, image_id, p, patch_w, patch_h);
}

NoisyOracleClassifier::NoisyOracleClassifier(MaskProvider provider, NoiseParams params)
    : provider_(std::move(provider)), params_(params) {
  if (params_.flip_probability < 0.0 || params_.flip_probability > 1.0)
    throw ConfigError("flip_probability must be in [0,1]");
  if (params_.false_blob_rate < 0.0)
    throw ConfigError("false_blob_rate must be >= 0");
}

ClassMask NoisyOracleClassifier::classify_patch(const std::string& image_id,
                                                Placement p, int patch_w,
                                                int patch_h) const {
  ClassMask patch = crop_reference(provider_, image_id, p, patch_w, patch_h);
  auto rng = patch_rng(params_.seed, image_id, p);

  if (params_.flip_probability > 0.0) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> pick(1, 2);
    for (auto& v : patch.data()) {
      if (coin(rng) >= params_.flip_probability) continue;
      // Resample uniformly from the two classes the pixel is not.
      v = static_cast<std::uint8_t>((v + pick(rng)) % kNumClasses);
    }
  }

  if (params_.false_blob_rate > 0.0) {
    std::poisson_distribution<int> n_blobs(params_.false_blob_rate);
    std::uniform_int_distribution<int> rx(0, patch_w - 1), ry(0, patch_h - 1);
    std::uniform_int_distribution<int> rrad(3, 8);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const int n = n_blobs(rng);
    for (int i = 0; i < n; ++i) {
      const int cx = rx(rng), cy = ry(rng), radius = rrad(rng);
      const bool ring = coin(rng) < kBlobRingProbability;
      stamp_blob(patch, cx, cy, radius, ring);
    }
  }
  return patch;
}

MaskFileClassifier::MaskFileClassifier(std::filesystem::path dir)
    : dir_(std::move(dir)) {}

ClassMask MaskFileClassifier::classify_patch(const std::string& image_id, Placement p,
                                             int patch_w, int patch_h) const {
  ClassMask full;
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (cached_id_ != image_id) {
      const auto path = dir_ / (image_id + ".png");
      if (!std::filesystem::exists(path))
        throw IoError("prediction mask not found: " + path.string());
      cached_mask_ = load_class_mask(path);
      cached_id_ = image_id;
    }
    full = cached_mask_;
  }
  if (p.x0 < 0 || p.y0 < 0 || p.x0 + patch_w > full.width() ||
      p.y0 + patch_h > full.height())
    throw ValidationError("classify_patch: placement outside image " + image_id);
  return crop(full, p, patch_w, patch_h);
}

}  // namespace berrydet

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "berrydet/components.hpp"
#include "berrydet/raster.hpp"

namespace berrydet {

struct IoUReport {
  double iou_background = 0.0;
  double iou_berry = 0.0;
  double iou_edge = 0.0;
  double iou_average = 0.0;  // unweighted mean of the three
};

/// Micro-aggregation across an image set: pool intersections and unions
/// over all added pairs, divide once. A class absent from both prediction
/// and truth scores 1.0.
class IoUAccumulator {
 public:
  void add(const ClassMask& pred, const ClassMask& truth);
  IoUReport report() const;

 private:
  std::int64_t inter_[kNumClasses] = {0, 0, 0};
  std::int64_t uni_[kNumClasses] = {0, 0, 0};
};

IoUReport iou(const ClassMask& pred, const ClassMask& truth);

struct DetectionReport {
  int n_markers = 0;
  int n_detected = 0;       // markers lying inside some kept component
  int n_components = 0;
  int n_misclassified = 0;  // components containing zero markers
  int undersegmented_components = 0;  // components containing >= 2 markers
  std::optional<double> correct_detection_pct;  // absent when n_markers == 0
  std::optional<double> misclassified_pct;      // absent when n_components == 0

  DetectionReport& operator+=(const DetectionReport& other);
};

struct DetectionOptions {
  // A marker landing on Edge counts as not detected (strict "within the
  // berry segment"). With near_tolerance, a marker within chessboard
  // distance 1 of a component also counts. Off by default.
  bool near_tolerance = false;
};

DetectionReport detection_eval(const std::vector<BerryComponent>& comps,
                               const DotList& dots, int image_w, int image_h,
                               const DetectionOptions& opts = {});

struct CountPair {
  double manual_count = 0.0;
  double detected_count = 0.0;
};

struct CountRegression {
  std::vector<CountPair> pairs;
  double slope = 0.0;      // OLS fit: detected = slope * manual + intercept
  double intercept = 0.0;
  double r_squared = 0.0;  // coefficient of determination of the fit
};

/// Throws ValidationError for fewer than 2 pairs or all-equal manual counts.
CountRegression count_regression(const std::vector<CountPair>& pairs);

}  // namespace berrydet

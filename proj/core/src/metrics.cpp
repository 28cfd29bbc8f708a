#include "berrydet/metrics.hpp"

#include <cmath>

#include "berrydet/errors.hpp"

namespace berrydet {

void IoUAccumulator::add(const ClassMask& pred, const ClassMask& truth) {
  if (pred.width() != truth.width() || pred.height() != truth.height())
    throw ValidationError("iou: mask dimensions differ");
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const int p = pred.data()[i], t = truth.data()[i];
    if (p == t) {
      ++inter_[p];
      ++uni_[p];
    } else {
      ++uni_[p];
      ++uni_[t];
    }
  }
}

IoUReport IoUAccumulator::report() const {
  double v[kNumClasses];
  for (int c = 0; c < kNumClasses; ++c)
    // Class absent from both sides scores 1 (declared convention).
    v[c] = uni_[c] == 0 ? 1.0
                        : static_cast<double>(inter_[c]) / static_cast<double>(uni_[c]);
  IoUReport r;
  r.iou_background = v[static_cast<int>(SemClass::Background)];
  r.iou_berry = v[static_cast<int>(SemClass::Berry)];
  r.iou_edge = v[static_cast<int>(SemClass::Edge)];
  r.iou_average = (r.iou_background + r.iou_berry + r.iou_edge) / 3.0;
  return r;
}

IoUReport iou(const ClassMask& pred, const ClassMask& truth) {
  IoUAccumulator acc;
  acc.add(pred, truth);
  return acc.report();
}

DetectionReport& DetectionReport::operator+=(const DetectionReport& other) {
  n_markers += other.n_markers;
  n_detected += other.n_detected;
  n_components += other.n_components;
  n_misclassified += other.n_misclassified;
  undersegmented_components += other.undersegmented_components;
  correct_detection_pct =
      n_markers > 0 ? std::optional<double>(100.0 * n_detected / n_markers)
                    : std::nullopt;
  misclassified_pct =
      n_components > 0 ? std::optional<double>(100.0 * n_misclassified / n_components)
                       : std::nullopt;
  return *this;
}

DetectionReport detection_eval(const std::vector<BerryComponent>& comps,
                               const DotList& dots, int image_w, int image_h,
                               const DetectionOptions& opts) {
  // Component ids need not be dense here (filtered subsets keep their
  // candidate ids), so membership stores the index + 1.
  Raster<int> membership(image_w, image_h, 0);
  for (std::size_t i = 0; i < comps.size(); ++i)
    for (const auto& p : comps[i].pixels) {
      if (!membership.in_bounds(p.x, p.y))
        throw ValidationError("detection_eval: component pixel out of bounds");
      membership.at(p.x, p.y) = static_cast<int>(i) + 1;
    }

  std::vector<int> markers_in(comps.size() + 1, 0);
  DetectionReport rep;
  rep.n_markers = static_cast<int>(dots.size());
  rep.n_components = static_cast<int>(comps.size());
  for (const auto& d : dots) {
    if (!membership.in_bounds(d.x, d.y))
      throw ValidationError("detection_eval: marker out of image bounds");
    int id = membership.at(d.x, d.y);
    if (id == 0 && opts.near_tolerance) {
      for (int dy = -1; dy <= 1 && id == 0; ++dy)
        for (int dx = -1; dx <= 1 && id == 0; ++dx)
          if (membership.in_bounds(d.x + dx, d.y + dy))
            id = membership.at(d.x + dx, d.y + dy);
    }
    if (id != 0) {
      ++rep.n_detected;
      ++markers_in[id];
    }
  }
  for (std::size_t i = 1; i < markers_in.size(); ++i) {
    if (markers_in[i] == 0) ++rep.n_misclassified;
    if (markers_in[i] >= 2) ++rep.undersegmented_components;
  }
  if (rep.n_markers > 0)
    rep.correct_detection_pct = 100.0 * rep.n_detected / rep.n_markers;
  if (rep.n_components > 0)
    rep.misclassified_pct = 100.0 * rep.n_misclassified / rep.n_components;
  return rep;
}

CountRegression count_regression(const std::vector<CountPair>& pairs) {
  if (pairs.size() < 2)
    throw ValidationError("count_regression: need at least 2 pairs");
  double sx = 0.0, sy = 0.0;
  for (const auto& p : pairs) {
    sx += p.manual_count;
    sy += p.detected_count;
  }
  const double n = static_cast<double>(pairs.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : pairs) {
    const double dx = p.manual_count - mx, dy = p.detected_count - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0)
    throw ValidationError("count_regression: all manual counts equal, fit undefined");

  CountRegression r;
  r.pairs = pairs;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  // R^2 = 1 - SS_res / SS_tot; for simple OLS, SS_res = syy - slope*sxy.
  if (syy == 0.0) {
    r.r_squared = 1.0;  // detected counts constant and fit exact
  } else {
    r.r_squared = 1.0 - (syy - r.slope * sxy) / syy;
  }
  return r;
}

}  // namespace berrydet

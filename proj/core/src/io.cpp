#include "berrydet/io.hpp"

#include <fstream>
#include <opencv2/imgcodecs.hpp>
#include <sstream>

#include "berrydet/errors.hpp"

namespace berrydet {

namespace {

cv::Mat imread_checked(const std::filesystem::path& path, int flags) {
  cv::Mat m = cv::imread(path.string(), flags);
  if (m.empty()) throw IoError("cannot read image: " + path.string());
  return m;
}

void imwrite_checked(const std::filesystem::path& path, const cv::Mat& m) {
  if (!cv::imwrite(path.string(), m))
    throw IoError("cannot write image: " + path.string());
}

}  // namespace

ClassMask load_class_mask(const std::filesystem::path& path) {
  cv::Mat m = imread_checked(path, cv::IMREAD_GRAYSCALE);
  ClassMask out(m.cols, m.rows);
  for (int y = 0; y < m.rows; ++y)
    for (int x = 0; x < m.cols; ++x) {
      const std::uint8_t v = m.at<std::uint8_t>(y, x);
      if (v > 2)
        throw ValidationError(path.string() + ": class mask value " +
                              std::to_string(v) + " at (" + std::to_string(x) +
                              "," + std::to_string(y) + ") not in {0,1,2}");
      out.at(x, y) = v;
    }
  return out;
}

void save_class_mask(const std::filesystem::path& path, const ClassMask& mask) {
  cv::Mat m(mask.height(), mask.width(), CV_8UC1);
  for (int y = 0; y < m.rows; ++y)
    for (int x = 0; x < m.cols; ++x) m.at<std::uint8_t>(y, x) = mask.at(x, y);
  imwrite_checked(path, m);
}

InstanceMask load_instance_mask(const std::filesystem::path& path) {
  cv::Mat m = imread_checked(path, cv::IMREAD_UNCHANGED);
  if (m.type() != CV_16UC1)
    throw ValidationError(path.string() + ": expected 16-bit grayscale PNG");
  InstanceMask out(m.cols, m.rows);
  for (int y = 0; y < m.rows; ++y)
    for (int x = 0; x < m.cols; ++x) out.at(x, y) = m.at<std::uint16_t>(y, x);
  return out;
}

void save_instance_mask(const std::filesystem::path& path, const InstanceMask& mask) {
  cv::Mat m(mask.height(), mask.width(), CV_16UC1);
  for (int y = 0; y < m.rows; ++y)
    for (int x = 0; x < m.cols; ++x) m.at<std::uint16_t>(y, x) = mask.at(x, y);
  imwrite_checked(path, m);
}

Raster<std::uint8_t> load_gray(const std::filesystem::path& path) {
  cv::Mat m = imread_checked(path, cv::IMREAD_GRAYSCALE);
  Raster<std::uint8_t> out(m.cols, m.rows);
  for (int y = 0; y < m.rows; ++y)
    for (int x = 0; x < m.cols; ++x) out.at(x, y) = m.at<std::uint8_t>(y, x);
  return out;
}

void save_gray(const std::filesystem::path& path, const Raster<std::uint8_t>& img) {
  cv::Mat m(img.height(), img.width(), CV_8UC1);
  for (int y = 0; y < m.rows; ++y)
    for (int x = 0; x < m.cols; ++x) m.at<std::uint8_t>(y, x) = img.at(x, y);
  imwrite_checked(path, m);
}

ColorAnnotationImage load_color_annotation(const std::filesystem::path& path,
                                           const Palette& palette) {
  cv::Mat m = imread_checked(path, cv::IMREAD_COLOR);  // BGR
  ColorAnnotationImage img;
  img.palette = palette;
  img.pixels = Raster<Rgb>(m.cols, m.rows);
  for (int y = 0; y < m.rows; ++y)
    for (int x = 0; x < m.cols; ++x) {
      const cv::Vec3b& bgr = m.at<cv::Vec3b>(y, x);
      img.pixels.at(x, y) = Rgb{bgr[2], bgr[1], bgr[0]};
    }
  return img;
}

void save_class_mask_color(const std::filesystem::path& path, const ClassMask& mask) {
  cv::Mat m(mask.height(), mask.width(), CV_8UC3);
  for (int y = 0; y < m.rows; ++y)
    for (int x = 0; x < m.cols; ++x) {
      cv::Vec3b& bgr = m.at<cv::Vec3b>(y, x);
      switch (sem_at(mask, x, y)) {
        case SemClass::Background: bgr = {0, 0, 0}; break;
        case SemClass::Berry: bgr = {0, 200, 0}; break;
        case SemClass::Edge: bgr = {0, 0, 220}; break;
      }
    }
  imwrite_checked(path, m);
}

void save_overlay(const std::filesystem::path& path,
                  const std::vector<BerryComponent>& kept,
                  const std::vector<RejectedComponent>& rejected,
                  int image_w, int image_h,
                  const Raster<std::uint8_t>* background,
                  const DotList* undetected) {
  cv::Mat m(image_h, image_w, CV_8UC3, cv::Scalar(40, 40, 40));
  if (background) {
    for (int y = 0; y < image_h; ++y)
      for (int x = 0; x < image_w; ++x) {
        const std::uint8_t v = background->at(x, y);
        m.at<cv::Vec3b>(y, x) = {v, v, v};
      }
  }
  for (const auto& comp : kept)
    for (const auto& p : comp.pixels) m.at<cv::Vec3b>(p.y, p.x) = {0, 200, 0};
  for (const auto& rc : rejected)
    for (const auto& p : rc.comp.pixels) m.at<cv::Vec3b>(p.y, p.x) = {0, 0, 0};
  if (undetected) {
    for (const auto& d : *undetected) {
      constexpr int s = 4;
      for (int dy = -s; dy <= s; ++dy)
        for (int dx = -s; dx <= s; ++dx) {
          const int x = d.x + dx, y = d.y + dy;
          if (x < 0 || y < 0 || x >= image_w || y >= image_h) continue;
          if (std::abs(dx) == s || std::abs(dy) == s)
            m.at<cv::Vec3b>(y, x) = {255, 255, 255};
        }
    }
  }
  imwrite_checked(path, m);
}

void save_components_csv(const std::filesystem::path& path,
                         const std::vector<BerryComponent>& comps) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write CSV: " + path.string());
  out << "id,area_px,centroid_x,centroid_y,major_semi_axis,minor_semi_axis,"
         "edge_surround_fraction\n";
  out.precision(9);
  for (const auto& c : comps)
    out << c.id << ',' << c.area_px << ',' << c.centroid_x << ',' << c.centroid_y
        << ',' << c.major_semi_axis_px << ',' << c.minor_semi_axis_px << ','
        << c.edge_surround_fraction << '\n';
}

void save_rejected_csv(const std::filesystem::path& path,
                       const std::vector<RejectedComponent>& rejected) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write CSV: " + path.string());
  out << "id,area_px,centroid_x,centroid_y,major_semi_axis,minor_semi_axis,"
         "edge_surround_fraction,reasons\n";
  out.precision(9);
  for (const auto& rc : rejected) {
    const auto& c = rc.comp;
    out << c.id << ',' << c.area_px << ',' << c.centroid_x << ',' << c.centroid_y
        << ',' << c.major_semi_axis_px << ',' << c.minor_semi_axis_px << ','
        << c.edge_surround_fraction << ',' << reject_reasons_str(rc.reasons) << '\n';
  }
}

std::vector<ComponentRecord> load_components_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read CSV: " + path.string());
  std::vector<ComponentRecord> records;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::istringstream ss(line);
    ComponentRecord r;
    char c;
    if (!(ss >> r.id >> c >> r.area_px >> c >> r.centroid_x >> c >> r.centroid_y >>
          c >> r.major_semi_axis >> c >> r.minor_semi_axis >> c >>
          r.edge_surround_fraction))
      throw ValidationError(path.string() + ": malformed component row: " + line);
    records.push_back(r);
  }
  return records;
}

InstanceMask component_id_map(const std::vector<BerryComponent>& comps,
                              int image_w, int image_h) {
  InstanceMask map(image_w, image_h, 0);
  for (const auto& comp : comps) {
    if (comp.id < 0 || comp.id > 65535)
      throw ValidationError("component id out of 16-bit range");
    for (const auto& p : comp.pixels)
      map.at(p.x, p.y) = static_cast<std::uint16_t>(comp.id);
  }
  return map;
}

std::vector<BerryComponent> components_from_id_map(const InstanceMask& id_map,
                                                   const ClassMask& mask) {
  if (id_map.width() != mask.width() || id_map.height() != mask.height())
    throw ValidationError("components_from_id_map: dimension mismatch");
  std::uint16_t max_id = 0;
  for (auto v : id_map.data()) max_id = std::max(max_id, v);
  std::vector<BerryComponent> comps(max_id);
  for (std::uint16_t i = 0; i < max_id; ++i) comps[i].id = i + 1;
  for (int y = 0; y < id_map.height(); ++y)
    for (int x = 0; x < id_map.width(); ++x)
      if (auto id = id_map.at(x, y); id != 0) comps[id - 1].pixels.push_back({x, y});

  // Drop holes in the id space (filters may have removed some ids).
  std::erase_if(comps, [](const BerryComponent& c) { return c.pixels.empty(); });
  compute_descriptors(comps, mask);
  return comps;
}

}  // namespace berrydet

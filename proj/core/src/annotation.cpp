#include "berrydet/annotation.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "berrydet/errors.hpp"

namespace berrydet {

bool Palette::is_berry_color(Rgb c) const {
  return std::find(berry.begin(), berry.end(), c) != berry.end();
}

void Palette::validate() const {
  for (std::size_t i = 0; i < berry.size(); ++i) {
    if (berry[i] == background)
      throw ConfigError("palette: berry color " + std::to_string(i) +
                        " equals the background color");
    for (std::size_t j = i + 1; j < berry.size(); ++j)
      if (berry[i] == berry[j])
        throw ConfigError("palette: berry colors " + std::to_string(i) + " and " +
                          std::to_string(j) + " collide");
  }
}

InstanceMask instances_from_color_annotation(const ColorAnnotationImage& img) {
  img.palette.validate();
  const auto& px = img.pixels;
  const int w = px.width(), h = px.height();

  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      Rgb c = px.at(x, y);
      if (c != img.palette.background && !img.palette.is_berry_color(c))
        throw ValidationError("malformed annotation: pixel (" + std::to_string(x) +
                              "," + std::to_string(y) + ") color not in palette");
    }

  InstanceMask out(w, h, 0);
  std::uint16_t next_id = 0;
  struct XY {
    int x, y;
  };
  std::vector<XY> stack;  // reused flood-fill worklist
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      Rgb c = px.at(x, y);
      if (c == img.palette.background || out.at(x, y) != 0) continue;
      if (next_id == 65535)
        throw ValidationError("more than 65535 instances in one annotation");
      ++next_id;
      stack.clear();
      stack.push_back({x, y});
      out.at(x, y) = next_id;
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        constexpr int dx[4] = {1, -1, 0, 0};
        constexpr int dy[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          int nx = cx + dx[k], ny = cy + dy[k];
          if (!out.in_bounds(nx, ny) || out.at(nx, ny) != 0) continue;
          if (px.at(nx, ny) != c) continue;
          out.at(nx, ny) = next_id;
          stack.push_back({nx, ny});
        }
      }
    }
  }
  return out;
}

DotList load_dots(const std::filesystem::path& path,
                  std::optional<std::pair<int, int>> bounds) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dot annotation file: " + path.string());

  DotList dots;
  std::set<std::pair<int, int>> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    int x, y;
    char comma;
    std::istringstream ss(line);
    if (!(ss >> x >> comma >> y) || comma != ',')
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": expected \"x,y\"");
    if (bounds && (x < 0 || y < 0 || x >= bounds->first || y >= bounds->second))
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": marker (" + std::to_string(x) + "," +
                            std::to_string(y) + ") out of image bounds");
    if (!seen.insert({x, y}).second)
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": duplicate marker (" + std::to_string(x) + "," +
                            std::to_string(y) + ")");
    dots.push_back({x, y});
  }
  return dots;
}

void save_dots(const std::filesystem::path& path, const DotList& dots) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write dot annotation file: " + path.string());
  for (const auto& d : dots) out << d.x << ',' << d.y << '\n';
}

int instance_count(const InstanceMask& inst) {
  std::uint16_t max_id = 0;
  for (auto v : inst.data()) max_id = std::max(max_id, v);
  return max_id;
}

}  // namespace berrydet

// berrypipe: command-line front end for the berry detection pipeline.
//
// Subcommands: labelgen, detect, eval, synth, plot-data. Every run writes a
// resolved_config.txt next to its outputs so experiments are auditable.
// Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 validation
// error, 1 anything else.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "berrydet/annotation.hpp"
#include "berrydet/components.hpp"
#include "berrydet/errors.hpp"
#include "berrydet/io.hpp"
#include "berrydet/labelgen.hpp"
#include "berrydet/metrics.hpp"
#include "berrydet/pipeline.hpp"
#include "berrydet/postfilter.hpp"
#include "berrydet/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace berrydet;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitValidation = 4;

std::vector<std::string> png_stems(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<std::string> stems;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".png")
      stems.push_back(e.path().stem().string());
  std::sort(stems.begin(), stems.end());
  return stems;
}

void ensure_out_dir(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out))
    throw IoError("cannot create output directory: " + out.string());
}

void write_resolved_config(const CLI::App& sub, const fs::path& out_dir) {
  std::ofstream f(out_dir / "resolved_config.txt");
  if (!f) throw IoError("cannot write " + (out_dir / "resolved_config.txt").string());
  f << sub.config_to_str(true, false);
}

Rgb parse_hex_color(const std::string& s) {
  if (s.size() != 6 || s.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos)
    throw ConfigError("palette color must be 6 hex digits, got '" + s + "'");
  const auto v = static_cast<unsigned>(std::stoul(s, nullptr, 16));
  return Rgb{static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 8),
             static_cast<std::uint8_t>(v)};
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Plain key=value config files with command-line override semantics.
// Registered as the first option of each subcommand so its callback runs
// before any other option is finalized or checked for `required`.
void add_config_option(CLI::App* sub) {
  sub->add_option_function<std::string>(
         "--config",
         [sub](const std::string& file) {
           std::ifstream f(file);
           if (!f) throw ConfigError("cannot open config file: " + file);
           std::string line;
           int lineno = 0;
           while (std::getline(f, line)) {
             ++lineno;
             const std::string s = trim(line);
             if (s.empty() || s[0] == '#') continue;
             const auto eq = s.find('=');
             if (eq == std::string::npos)
               throw ConfigError("config line " + std::to_string(lineno) +
                                 ": expected key=value");
             const std::string key = trim(s.substr(0, eq));
             std::string val = trim(s.substr(eq + 1));
             if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
               val = val.substr(1, val.size() - 2);
             CLI::Option* opt = sub->get_option_no_throw("--" + key);
             if (opt == nullptr || key == "config")
               throw ConfigError("unknown config key '" + key + "'");
             if (opt->count() > 0) continue;  // explicit command-line flag wins
             if (opt->get_type_size_max() == 0) {  // a flag
               if (val == "true" || val == "1" || val == "yes" || val == "on")
                 opt->add_result("true");
               else if (val != "false" && val != "0" && val != "no" && val != "off")
                 throw ConfigError("config line " + std::to_string(lineno) +
                                   ": flag '" + key + "' needs a boolean value");
               continue;
             }
             if (opt->get_expected_max() > 1) {  // list-valued: comma separated
               std::stringstream ss(val);
               for (std::string piece; std::getline(ss, piece, ',');)
                 opt->add_result(trim(piece));
             } else {
               opt->add_result(val);
             }
           }
         },
         "Key=value config file; command-line flags override")
      ->configurable(false);
}

// ---------------------------------------------------------------------------
// Shared option groups
// ---------------------------------------------------------------------------

struct FilterFlags {
  FilterConfig cfg;
  bool no_axis = false, no_area = false, no_edge = false;

  FilterConfig resolve() const {
    FilterConfig c = cfg;
    c.axis_enabled = !no_axis;
    c.area_enabled = !no_area;
    c.edge_enabled = !no_edge;
    return c;
  }
};

void add_filter_options(CLI::App& sub, FilterFlags& f) {
  sub.add_option("--axis-min", f.cfg.axis_ratio_min,
                 "Minimum minor/major axis ratio (inclusive)")
      ->capture_default_str();
  sub.add_option("--area-min", f.cfg.area_ratio_min,
                 "Minimum area as a fraction of the equivalent circle (inclusive)")
      ->capture_default_str();
  sub.add_option("--edge-min", f.cfg.edge_surround_min,
                 "Minimum edge-surround fraction (inclusive)")
      ->capture_default_str();
  sub.add_flag("--no-axis-filter", f.no_axis, "Disable the axis-ratio filter");
  sub.add_flag("--no-area-filter", f.no_area, "Disable the area filter");
  sub.add_flag("--no-edge-filter", f.no_edge, "Disable the edge-surround filter");
  sub.add_flag("--full-axis-mode", f.cfg.full_axis_mode,
               "Use full axes instead of semi-axes for the area test (sensitivity runs)");
}

// ---------------------------------------------------------------------------
// labelgen
// ---------------------------------------------------------------------------

struct LabelgenOpts {
  fs::path input_dir, out;
  int edge_thickness = 2;
  std::string input_kind = "instance";
  std::vector<std::string> palette_berry{"ff0000", "00ff00", "0000ff", "ffff00"};
  std::string palette_background = "000000";
};

int run_labelgen(const CLI::App& sub, const LabelgenOpts& o) {
  ensure_out_dir(o.out);
  write_resolved_config(sub, o.out);

  Palette palette;
  if (o.input_kind == "color") {
    if (o.palette_berry.size() != 4)
      throw ConfigError("--palette-berry needs exactly 4 colors");
    for (int i = 0; i < 4; ++i) palette.berry[i] = parse_hex_color(o.palette_berry[i]);
    palette.background = parse_hex_color(o.palette_background);
    palette.validate();
  } else if (o.input_kind != "instance") {
    throw ConfigError("--input-kind must be 'instance' or 'color'");
  }

  const auto stems = png_stems(o.input_dir);
  if (stems.empty()) {
    std::cerr << "warning: no .png files in " << o.input_dir.string() << "\n";
    return 0;
  }

  const LabelGenConfig lg{.edge_thickness_px = o.edge_thickness};
  int first_error = 0;
  for (const auto& stem : stems) {
    const fs::path in = o.input_dir / (stem + ".png");
    try {
      InstanceMask inst =
          o.input_kind == "color"
              ? instances_from_color_annotation(load_color_annotation(in, palette))
              : load_instance_mask(in);
      save_class_mask(o.out / (stem + ".png"), generate_labels(inst, lg));
    } catch (const std::exception& e) {
      std::cerr << in.string() << ": " << e.what() << "\n";
      if (!first_error)
        first_error = dynamic_cast<const IoError*>(&e)         ? kExitIo
                      : dynamic_cast<const ConfigError*>(&e)   ? kExitConfig
                      : dynamic_cast<const ValidationError*>(&e) ? kExitValidation
                                                               : 1;
    }
  }
  return first_error;
}

// ---------------------------------------------------------------------------
// detect
// ---------------------------------------------------------------------------

struct DetectOpts {
  fs::path masks_dir, out;
  fs::path render_dir, dots_dir;  // optional extras for the overlay
  std::vector<std::string> images;
  std::string backend = "mask_file";
  double flip_prob = 0.0, blob_rate = 0.0;
  std::uint64_t noise_seed = 0;
  GridConfig grid;
  int min_component_px = 25;
  FilterFlags filters;
  int jobs = 1;
};

std::unique_ptr<Classifier> make_backend(const DetectOpts& o) {
  MaskProvider provider = [dir = o.masks_dir](const std::string& id) {
    return load_class_mask(dir / (id + ".png"));
  };
  if (o.backend == "mask_file") return std::make_unique<MaskFileClassifier>(o.masks_dir);
  if (o.backend == "oracle") return std::make_unique<OracleClassifier>(provider);
  if (o.backend == "noisy_oracle")
    return std::make_unique<NoisyOracleClassifier>(
        provider, NoiseParams{o.flip_prob, o.blob_rate, o.noise_seed});
  throw ConfigError("--backend must be mask_file, oracle, or noisy_oracle");
}

int run_detect(const CLI::App& sub, const DetectOpts& o) {
  ensure_out_dir(o.out);
  write_resolved_config(sub, o.out);
  if (o.jobs < 1) throw ConfigError("--jobs must be >= 1");

  std::vector<std::string> images = o.images;
  if (images.empty()) images = png_stems(o.masks_dir);
  if (images.empty()) {
    std::cerr << "warning: no images to process in " << o.masks_dir.string() << "\n";
    return 0;
  }

  const auto classifier = make_backend(o);
  const FilterConfig fcfg = o.filters.resolve();

  for (const auto& id : images) {
    const ClassMask ref = load_class_mask(o.masks_dir / (id + ".png"));
    DetectResult r = detect_image(*classifier, id, ref.width(), ref.height(), o.grid,
                                  {.min_component_px = o.min_component_px}, fcfg, o.jobs);

    save_class_mask(o.out / (id + "_stitched.png"), r.stitched);
    save_class_mask_color(o.out / (id + "_stitched_color.png"), r.stitched);
    save_instance_mask(o.out / (id + "_components.png"),
                       component_id_map(r.candidates, ref.width(), ref.height()));
    save_components_csv(o.out / (id + "_components.csv"), r.candidates);
    save_components_csv(o.out / (id + "_kept.csv"), r.filtered.kept);
    save_rejected_csv(o.out / (id + "_rejected.csv"), r.filtered.rejected);

    std::optional<Raster<std::uint8_t>> background;
    if (!o.render_dir.empty() && fs::exists(o.render_dir / (id + ".png")))
      background = load_gray(o.render_dir / (id + ".png"));
    std::optional<DotList> undetected;
    if (!o.dots_dir.empty()) {
      DotList dots = load_dots(o.dots_dir / (id + ".csv"),
                               {{ref.width(), ref.height()}});
      Raster<std::uint8_t> covered(ref.width(), ref.height(), 0);
      for (const auto& c : r.filtered.kept)
        for (const auto& p : c.pixels) covered.at(p.x, p.y) = 1;
      undetected.emplace();
      for (const auto& d : dots)
        if (!covered.at(d.x, d.y)) undetected->push_back(d);
    }
    save_overlay(o.out / (id + "_overlay.png"), r.filtered.kept, r.filtered.rejected,
                 ref.width(), ref.height(), background ? &*background : nullptr,
                 undetected ? &*undetected : nullptr);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// eval / plot-data
// ---------------------------------------------------------------------------

struct EvalOpts {
  fs::path detect_dir, dots_dir, out;
  fs::path truth_dir, groups_file;  // optional
  std::vector<std::string> images;
  FilterFlags filters;
  bool near_tolerance = false;
};

struct ImageEval {
  std::string id, group;
  DotList dots;
  std::vector<BerryComponent> candidates;
  FilterResult filtered;
  DetectionReport pre, post;
};

std::map<std::string, std::string> load_groups(const fs::path& file) {
  std::map<std::string, std::string> groups;
  std::ifstream f(file);
  if (!f) throw IoError("cannot open groups file: " + file.string());
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ValidationError("groups file line " + std::to_string(lineno) +
                            ": expected 'image_id,group'");
    groups[line.substr(0, comma)] = line.substr(comma + 1);
  }
  return groups;
}

// Image ids present in a detect output directory (from the *_stitched.png files).
std::vector<std::string> detect_ids(const fs::path& detect_dir) {
  std::vector<std::string> ids;
  for (auto& stem : png_stems(detect_dir)) {
    const std::string suffix = "_stitched";
    if (stem.size() > suffix.size() &&
        stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0)
      ids.push_back(stem.substr(0, stem.size() - suffix.size()));
  }
  return ids;
}

std::vector<ImageEval> evaluate_images(const EvalOpts& o, IoUAccumulator* iou_acc) {
  std::vector<std::string> images = o.images;
  if (images.empty()) images = detect_ids(o.detect_dir);
  if (images.empty()) throw IoError("no detect outputs found in " + o.detect_dir.string());

  std::map<std::string, std::string> groups;
  if (!o.groups_file.empty()) groups = load_groups(o.groups_file);

  const FilterConfig fcfg = o.filters.resolve();
  const DetectionOptions dopt{.near_tolerance = o.near_tolerance};

  std::vector<ImageEval> evals;
  for (const auto& id : images) {
    ImageEval ev;
    ev.id = id;
    if (auto it = groups.find(id); it != groups.end()) ev.group = it->second;

    const ClassMask stitched = load_class_mask(o.detect_dir / (id + "_stitched.png"));
    const InstanceMask id_map = load_instance_mask(o.detect_dir / (id + "_components.png"));
    ev.candidates = components_from_id_map(id_map, stitched);
    ev.filtered = apply_filters(ev.candidates, fcfg);
    ev.dots = load_dots(o.dots_dir / (id + ".csv"), {{stitched.width(), stitched.height()}});
    ev.pre = detection_eval(ev.candidates, ev.dots, stitched.width(), stitched.height(), dopt);
    ev.post = detection_eval(ev.filtered.kept, ev.dots, stitched.width(), stitched.height(), dopt);

    if (iou_acc && !o.truth_dir.empty())
      iou_acc->add(stitched, load_class_mask(o.truth_dir / (id + ".png")));
    evals.push_back(std::move(ev));
  }
  return evals;
}

json detection_to_json(const DetectionReport& r) {
  json j{{"n_markers", r.n_markers},
         {"n_detected", r.n_detected},
         {"n_components", r.n_components},
         {"n_misclassified", r.n_misclassified},
         {"undersegmented_components", r.undersegmented_components}};
  if (r.correct_detection_pct) j["correct_detection_pct"] = *r.correct_detection_pct;
  if (r.misclassified_pct) j["misclassified_pct"] = *r.misclassified_pct;
  return j;
}

void detection_csv_row(std::ostream& out, const std::string& scope,
                       const std::string& label, const std::string& stage,
                       const DetectionReport& r) {
  out << scope << ',' << label << ',' << stage << ',' << r.n_markers << ','
      << r.n_detected << ',' << r.n_components << ',' << r.n_misclassified << ','
      << r.undersegmented_components << ',';
  if (r.correct_detection_pct) out << *r.correct_detection_pct;
  out << ',';
  if (r.misclassified_pct) out << *r.misclassified_pct;
  out << '\n';
}

std::optional<CountRegression> try_regression(const std::vector<ImageEval>& evals) {
  std::vector<CountPair> pairs;
  for (const auto& ev : evals)
    pairs.push_back({static_cast<double>(ev.dots.size()),
                     static_cast<double>(ev.filtered.kept.size())});
  try {
    return count_regression(pairs);
  } catch (const ValidationError&) {
    return std::nullopt;  // fewer than 2 images or all manual counts equal
  }
}

int run_eval(const CLI::App& sub, const EvalOpts& o) {
  ensure_out_dir(o.out);
  write_resolved_config(sub, o.out);

  IoUAccumulator iou_acc;
  const auto evals = evaluate_images(o, &iou_acc);

  DetectionReport overall_pre, overall_post;
  std::map<std::string, DetectionReport> group_post;
  for (const auto& ev : evals) {
    overall_pre += ev.pre;
    overall_post += ev.post;
    group_post[ev.group] += ev.post;
  }
  const auto regression = try_regression(evals);

  json report;
  report["images"] = json::array();
  for (const auto& ev : evals)
    report["images"].push_back({{"id", ev.id},
                                {"group", ev.group},
                                {"manual_count", ev.dots.size()},
                                {"detected_count", ev.filtered.kept.size()},
                                {"detection_prefilter", detection_to_json(ev.pre)},
                                {"detection_postfilter", detection_to_json(ev.post)}});
  report["groups"] = json::array();
  for (const auto& [name, rep] : group_post)
    report["groups"].push_back({{"group", name}, {"detection_postfilter", detection_to_json(rep)}});
  report["overall"] = {{"detection_prefilter", detection_to_json(overall_pre)},
                       {"detection_postfilter", detection_to_json(overall_post)}};
  if (!o.truth_dir.empty()) {
    const IoUReport r = iou_acc.report();
    report["iou"] = {{"background", r.iou_background},
                     {"berry", r.iou_berry},
                     {"edge", r.iou_edge},
                     {"average", r.iou_average}};
  }
  if (regression) {
    report["count_regression"] = {{"slope", regression->slope},
                                  {"intercept", regression->intercept},
                                  {"r_squared", regression->r_squared}};
  }
  std::ofstream jf(o.out / "eval_report.json");
  jf << report.dump(2) << '\n';

  std::ofstream cf(o.out / "eval_report.csv");
  cf << "scope,label,stage,n_markers,n_detected,n_components,n_misclassified,"
        "undersegmented_components,correct_detection_pct,misclassified_pct\n";
  for (const auto& ev : evals) {
    detection_csv_row(cf, "image", ev.id, "prefilter", ev.pre);
    detection_csv_row(cf, "image", ev.id, "postfilter", ev.post);
  }
  for (const auto& [name, rep] : group_post)
    detection_csv_row(cf, "group", name, "postfilter", rep);
  detection_csv_row(cf, "overall", "", "prefilter", overall_pre);
  detection_csv_row(cf, "overall", "", "postfilter", overall_post);

  // Ablation: cumulative filter sets, echoing the threshold-study layout.
  std::ofstream af(o.out / "ablation.csv");
  af << "filter_set,kept,rejected,n_markers,n_detected,n_components,n_misclassified,"
        "undersegmented_components,correct_detection_pct,misclassified_pct\n";
  const struct {
    const char* name;
    bool axis, area, edge;
  } sets[] = {{"none", false, false, false},
              {"axis", true, false, false},
              {"axis+area", true, true, false},
              {"axis+area+edge", true, true, true}};
  for (const auto& s : sets) {
    FilterConfig fc = o.filters.resolve();
    fc.axis_enabled = s.axis;
    fc.area_enabled = s.area;
    fc.edge_enabled = s.edge;
    DetectionReport total;
    std::size_t kept = 0, rejected = 0;
    for (const auto& ev : evals) {
      auto fr = apply_filters(ev.candidates, fc);
      kept += fr.kept.size();
      rejected += fr.rejected.size();
      ClassMask stitched = load_class_mask(o.detect_dir / (ev.id + "_stitched.png"));
      total += detection_eval(fr.kept, ev.dots, stitched.width(), stitched.height(),
                              {.near_tolerance = o.near_tolerance});
    }
    af << s.name << ',' << kept << ',' << rejected << ',' << total.n_markers << ','
       << total.n_detected << ',' << total.n_components << ',' << total.n_misclassified
       << ',' << total.undersegmented_components << ',';
    if (total.correct_detection_pct) af << *total.correct_detection_pct;
    af << ',';
    if (total.misclassified_pct) af << *total.misclassified_pct;
    af << '\n';
  }
  return 0;
}

int run_plot_data(const CLI::App& sub, const EvalOpts& o) {
  ensure_out_dir(o.out);
  write_resolved_config(sub, o.out);

  const auto evals = evaluate_images(o, nullptr);
  std::ofstream pf(o.out / "pairs.csv");
  pf << "image_id,manual_count,detected_count\n";
  for (const auto& ev : evals)
    pf << ev.id << ',' << ev.dots.size() << ',' << ev.filtered.kept.size() << '\n';

  std::ofstream ff(o.out / "fit.csv");
  ff << "slope,intercept,r_squared\n";
  if (const auto reg = try_regression(evals))
    ff << reg->slope << ',' << reg->intercept << ',' << reg->r_squared << '\n';
  else
    std::cerr << "warning: regression undefined (need >= 2 images with varying "
                 "manual counts); fit.csv has a header only\n";
  return 0;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthOpts {
  fs::path out;
  int count = 1;
  std::uint64_t seed = 0;  // base; scene i uses seed + i
  SceneConfig scene;
  int prune_min_core = 0;     // 0 = off
  int edge_thickness = 2;     // 0 = skip emitting label masks
};

int run_synth(const CLI::App& sub, const SynthOpts& o) {
  if (o.count < 1) throw ConfigError("--count must be >= 1");
  ensure_out_dir(o.out);
  for (const char* d : {"instances", "labels", "dots", "gray"})
    if (o.edge_thickness > 0 || std::string(d) != "labels")
      ensure_out_dir(o.out / d);
  write_resolved_config(sub, o.out);

  for (int i = 0; i < o.count; ++i) {
    SceneConfig cfg = o.scene;
    cfg.seed = o.seed + static_cast<std::uint64_t>(i);
    Scene scene = generate_scene(cfg);
    const LabelGenConfig lg{.edge_thickness_px = std::max(o.edge_thickness, 1)};
    if (o.prune_min_core > 0) prune_small_cores(scene, lg, o.prune_min_core);

    const std::string name = "scene_" + std::to_string(cfg.seed);
    save_instance_mask(o.out / "instances" / (name + ".png"), scene.instances);
    save_dots(o.out / "dots" / (name + ".csv"), scene.dots);
    save_gray(o.out / "gray" / (name + ".png"), scene.image);
    if (o.edge_thickness > 0)
      save_class_mask(o.out / "labels" / (name + ".png"),
                      generate_labels(scene.instances, lg));

    json sidecar{{"seed", cfg.seed},
                 {"image_w", cfg.image_w},
                 {"image_h", cfg.image_h},
                 {"n_clusters", cfg.n_clusters},
                 {"berries_per_cluster", {cfg.berries_per_cluster.lo, cfg.berries_per_cluster.hi}},
                 {"radius_px", {cfg.radius_px.lo, cfg.radius_px.hi}},
                 {"cluster_spread_px", cfg.cluster_spread_px},
                 {"touch_probability", cfg.touch_probability},
                 {"min_visible_px", cfg.min_visible_px},
                 {"prune_min_core", o.prune_min_core},
                 {"true_berry_count", scene.dots.size()}};
    std::ofstream sf(o.out / (name + ".json"));
    sf << sidecar.dump(2) << '\n';
  }
  return 0;
}

void add_eval_options(CLI::App& sub, EvalOpts& o) {
  sub.add_option("--detect-dir", o.detect_dir, "Directory written by the detect command")
      ->required();
  sub.add_option("--dots-dir", o.dots_dir, "Directory of <image_id>.csv dot annotations")
      ->required();
  sub.add_option("--out", o.out, "Output directory")->required();
  sub.add_option("--images", o.images, "Restrict to these image ids");
  add_filter_options(sub, o.filters);
  sub.add_flag("--near-tolerance", o.near_tolerance,
               "Count markers within chessboard distance 1 of a component as detected");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Berry detection pipeline: masks to components to counts"};
  app.require_subcommand(1);

  LabelgenOpts lo;
  CLI::App* labelgen = app.add_subcommand(
      "labelgen", "Convert instance or color annotations to three-class label masks");
  add_config_option(labelgen);
  labelgen->add_option("--input-dir", lo.input_dir, "Directory of annotation .png files")
      ->required();
  labelgen->add_option("--out", lo.out, "Output directory")->required();
  labelgen->add_option("--edge-thickness", lo.edge_thickness, "Edge band thickness in px")
      ->capture_default_str();
  labelgen->add_option("--input-kind", lo.input_kind,
                       "'instance' (16-bit id masks) or 'color' (palette annotations)")
      ->capture_default_str();
  labelgen->add_option("--palette-berry", lo.palette_berry,
                       "Four berry colors as RRGGBB hex (color inputs only)");
  labelgen->add_option("--palette-background", lo.palette_background,
                       "Background color as RRGGBB hex")
      ->capture_default_str();

  DetectOpts dopts;
  CLI::App* detect = app.add_subcommand(
      "detect", "Classify, stitch, extract components, and filter one image set");
  add_config_option(detect);
  detect->add_option("--masks-dir", dopts.masks_dir,
                     "Directory of <image_id>.png full-image class masks")
      ->required();
  detect->add_option("--out", dopts.out, "Output directory")->required();
  detect->add_option("--images", dopts.images, "Restrict to these image ids");
  detect->add_option("--backend", dopts.backend, "mask_file | oracle | noisy_oracle")
      ->capture_default_str();
  detect->add_option("--flip-prob", dopts.flip_prob, "noisy_oracle per-pixel flip probability")
      ->capture_default_str();
  detect->add_option("--blob-rate", dopts.blob_rate,
                     "noisy_oracle mean false berry blobs per patch")
      ->capture_default_str();
  detect->add_option("--noise-seed", dopts.noise_seed, "noisy_oracle master seed")
      ->capture_default_str();
  detect->add_option("--patch-w", dopts.grid.patch_w, "Patch width")->capture_default_str();
  detect->add_option("--patch-h", dopts.grid.patch_h, "Patch height")->capture_default_str();
  detect->add_option("--overlap", dopts.grid.overlap, "Patch overlap fraction [0,1)")
      ->capture_default_str();
  detect->add_option("--min-component-px", dopts.min_component_px,
                     "Minimum component size in px")
      ->capture_default_str();
  add_filter_options(*detect, dopts.filters);
  detect->add_option("--jobs", dopts.jobs, "Worker threads for patch classification")
      ->capture_default_str();
  detect->add_option("--render-dir", dopts.render_dir,
                     "Optional grayscale renderings for overlay backgrounds");
  detect->add_option("--dots-dir", dopts.dots_dir,
                     "Optional dot annotations; undetected markers get boxed in overlays");

  EvalOpts eo;
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "Join detect outputs with dot annotations and report metrics");
  add_config_option(eval_cmd);
  add_eval_options(*eval_cmd, eo);
  eval_cmd->add_option("--truth-dir", eo.truth_dir,
                       "Optional ground-truth class masks for IoU");
  eval_cmd->add_option("--groups-file", eo.groups_file,
                       "Optional CSV 'image_id,group' for grouped reports");

  EvalOpts po;
  CLI::App* plot = app.add_subcommand(
      "plot-data", "Emit (manual, detected) count pairs and fit coefficients as CSV");
  add_config_option(plot);
  add_eval_options(*plot, po);

  SynthOpts so;
  CLI::App* synth = app.add_subcommand("synth", "Generate synthetic berry scenes");
  add_config_option(synth);
  synth->add_option("--out", so.out, "Output directory")->required();
  synth->add_option("--count", so.count, "Number of scenes")->capture_default_str();
  synth->add_option("--seed", so.seed, "Base seed; scene i uses seed+i")
      ->capture_default_str();
  synth->add_option("--width", so.scene.image_w, "Scene width")->capture_default_str();
  synth->add_option("--height", so.scene.image_h, "Scene height")->capture_default_str();
  synth->add_option("--clusters", so.scene.n_clusters, "Clusters per scene")
      ->capture_default_str();
  synth->add_option("--berries-min", so.scene.berries_per_cluster.lo, "Min berries per cluster")
      ->capture_default_str();
  synth->add_option("--berries-max", so.scene.berries_per_cluster.hi, "Max berries per cluster")
      ->capture_default_str();
  synth->add_option("--radius-min", so.scene.radius_px.lo, "Min berry radius px")
      ->capture_default_str();
  synth->add_option("--radius-max", so.scene.radius_px.hi, "Max berry radius px")
      ->capture_default_str();
  synth->add_option("--spread", so.scene.cluster_spread_px, "Cluster spread px")
      ->capture_default_str();
  synth->add_option("--touch", so.scene.touch_probability,
                    "Probability a berry is placed tangent/overlapping a neighbor")
      ->capture_default_str();
  synth->add_option("--min-visible", so.scene.min_visible_px,
                    "Remove instances occluded below this visible area")
      ->capture_default_str();
  synth->add_option("--prune-min-core", so.prune_min_core,
                    "Also remove instances whose berry core would be below this (0 = off)")
      ->capture_default_str();
  synth->add_option("--edge-thickness", so.edge_thickness,
                    "Edge thickness for emitted label masks (0 = skip labels)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    if (*labelgen) return run_labelgen(*labelgen, lo);
    if (*detect) return run_detect(*detect, dopts);
    if (*eval_cmd) return run_eval(*eval_cmd, eo);
    if (*plot) return run_plot_data(*plot, po);
    if (*synth) return run_synth(*synth, so);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

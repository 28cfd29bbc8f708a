#include "berrydet/pipeline.hpp"

#include <atomic>
#include <mutex>
#include <thread>

#include "berrydet/errors.hpp"

namespace berrydet {

DetectResult detect_image(const Classifier& classifier, const std::string& image_id,
                          int image_w, int image_h, const GridConfig& grid_cfg,
                          const ComponentConfig& comp_cfg,
                          const FilterConfig& filter_cfg, int workers) {
  if (workers < 1) throw ConfigError("workers must be >= 1");

  DetectResult result;
  result.grid = plan_grid(image_w, image_h, grid_cfg.patch_w, grid_cfg.patch_h,
                          grid_cfg.overlap);

  // Each placement writes its own preallocated slot, so the stitched result
  // is identical for any worker count.
  const std::size_t n = result.grid.placements.size();
  PatchStack stack;
  stack.grid = result.grid;
  stack.patches.resize(n);
  {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          stack.patches[i] =
              classifier.classify_patch(image_id, result.grid.placements[i],
                                        result.grid.patch_w, result.grid.patch_h);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      const int n_threads =
          static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), n));
      for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
  }

  result.stitched = stitch_majority(stack);
  result.candidates = label_components(result.stitched, comp_cfg);
  result.filtered = apply_filters(result.candidates, filter_cfg);
  return result;
}

}  // namespace berrydet

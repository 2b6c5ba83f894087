#pragma once

#include <wbcq/edge_roi.hpp>
#include <wbcq/image.hpp>
#include <wbcq/threshold.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace wbcq {

enum class CellKind { discrete, cluster };

struct CellObject
{
  Component component;
  CellKind kind = CellKind::discrete;
};

struct QuantConfig
{
  double avg_cell_size = 500.0;
  // Components larger than cluster_factor * avg_cell_size are clusters.
  double cluster_factor = 2.0;
  std::size_t min_cell_area = 25;
  int analysis_block = 400;
  int bin_width = 20;
  double roi_coverage = 0.5;

  void validate() const
  {
    if (!(avg_cell_size > 0) || !(cluster_factor > 0) || analysis_block < 1 ||
        bin_width < 1 || !(roi_coverage >= 0 && roi_coverage <= 1))
      throw InvalidInput{"QuantConfig: invalid value"};
  }
};

/// Drops debris below min_cell_area and labels the rest discrete or cluster.
inline std::vector<CellObject> classify_objects(const std::vector<Component>& objects,
                                                const QuantConfig& cfg = {})
{
  if (!(cfg.avg_cell_size > 0))
    throw InvalidInput{"classify_objects: avg_cell_size must be > 0"};
  const double cluster_above = cfg.cluster_factor * cfg.avg_cell_size;
  std::vector<CellObject> cells;
  for (const auto& c : objects) {
    if (c.area < cfg.min_cell_area)
      continue;
    cells.push_back({c, static_cast<double>(c.area) > cluster_above
                            ? CellKind::cluster
                            : CellKind::discrete});
  }
  return cells;
}

inline double mean_discrete_size(const std::vector<CellObject>& cells)
{
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& c : cells)
    if (c.kind == CellKind::discrete) {
      sum += static_cast<double>(c.component.area);
      ++n;
    }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

/// Estimated number of cells making up `total_cluster_area` pixels.
inline double cells_in_clusters(double total_cluster_area, double expected_size)
{
  if (!(expected_size > 0))
    throw InvalidInput{"cells_in_clusters: expected size must be > 0"};
  return total_cluster_area / expected_size;
}

/// Per-image mean discrete size when there is one, else the configured
/// average.
inline double expected_cell_size(const std::vector<CellObject>& cells,
                                 const QuantConfig& cfg)
{
  const double m = mean_discrete_size(cells);
  return m > 0 ? m : cfg.avg_cell_size;
}

struct BlockCount
{
  Region region;
  std::size_t count = 0;
};

/// Cell counts per analysis block, for the blocks at least
/// `cfg.roi_coverage` covered by selected ROI blocks. Discrete cells count
/// by centroid; cluster pixels inside the block are converted by area.
inline std::vector<BlockCount> per_block_counts(const std::vector<CellObject>& cells,
                                                const RoiGrid& roi, int width,
                                                int height, double expected_size,
                                                const QuantConfig& cfg = {})
{
  if (cfg.analysis_block < 1)
    throw InvalidInput{"per_block_counts: analysis block must be >= 1"};
  if (!(expected_size > 0))
    throw InvalidInput{"per_block_counts: expected size must be > 0"};
  std::vector<BlockCount> out;
  for (const auto& r : tile(width, height, cfg.analysis_block)) {
    long long covered = 0;
    for (int row = 0; row < roi.rows; ++row)
      for (int col = 0; col < roi.cols; ++col) {
        if (!roi.selected(col, row))
          continue;
        const auto b = roi.block(col, row, width, height);
        const int ix = std::max(0, std::min(r.x_end(), b.x_end()) - std::max(r.x, b.x));
        const int iy = std::max(0, std::min(r.y_end(), b.y_end()) - std::max(r.y, b.y));
        covered += static_cast<long long>(ix) * iy;
      }
    if (static_cast<double>(covered) < cfg.roi_coverage * static_cast<double>(r.area()))
      continue;

    std::size_t discrete = 0;
    std::size_t cluster_px = 0;
    auto inside = [&](int x, int y) {
      return x >= r.x && x < r.x_end() && y >= r.y && y < r.y_end();
    };
    for (const auto& c : cells) {
      if (c.kind == CellKind::discrete) {
        discrete += inside(round_coord(c.component.cx, width),
                           round_coord(c.component.cy, height));
      }
      else {
        for (const auto& p : c.component.pixels)
          cluster_px += inside(p.x, p.y);
      }
    }
    const auto from_clusters = static_cast<std::size_t>(
        std::floor(static_cast<double>(cluster_px) / expected_size + 0.5));
    out.push_back({r, discrete + from_clusters});
  }
  return out;
}

/// Block-count histogram with bins [0, w], [w+1, 2w], ..., [7w+1, 8w], > 8w.
struct BlockHistogram
{
  int bin_width = 20;
  std::vector<std::string> labels;
  std::vector<std::size_t> counts;
  std::vector<double> log_values;
};

inline constexpr int histogram_ranges = 8;

inline std::size_t histogram_bin(std::size_t count, int bin_width)
{
  if (count == 0)
    return 0;
  return std::min<std::size_t>((count - 1) / bin_width, histogram_ranges);
}

inline std::vector<std::string> histogram_labels(int bin_width)
{
  std::vector<std::string> labels;
  for (int i = 0; i < histogram_ranges; ++i) {
    const int lo = i == 0 ? 0 : i * bin_width + 1;
    labels.push_back(std::to_string(lo) + "_" + std::to_string((i + 1) * bin_width));
  }
  labels.push_back("gt_" + std::to_string(histogram_ranges * bin_width));
  return labels;
}

/// Bins the per-block counts and adds the display scaling log10(10 n + 1).
inline BlockHistogram build_histogram(const std::vector<std::size_t>& counts,
                                      int bin_width = 20)
{
  if (bin_width < 1)
    throw InvalidInput{"build_histogram: bin width must be >= 1"};
  BlockHistogram h;
  h.bin_width = bin_width;
  h.labels = histogram_labels(bin_width);
  h.counts.assign(histogram_ranges + 1, 0);
  for (auto c : counts)
    ++h.counts[histogram_bin(c, bin_width)];
  for (auto n : h.counts)
    h.log_values.push_back(std::log10(10.0 * static_cast<double>(n) + 1.0));
  return h;
}

struct QuantReport
{
  std::string image_id;
  std::size_t n_discrete = 0;
  std::size_t n_clusters = 0;
  double mean_discrete_size = 0.0;
  std::size_t total_cluster_area = 0;
  double n_cells_in_clusters = 0.0;
  double n_total = 0.0;
  std::vector<std::size_t> per_block_counts;
  BlockHistogram histogram;
  std::size_t converged_blocks = 0;
  std::vector<BlockThreshold> block_thresholds;
};

inline double round2(double v)
{
  return std::floor(v * 100.0 + 0.5) / 100.0;
}

/// Aggregates the features of one image. Only cells whose centroid lies in
/// a selected ROI block are counted.
inline QuantReport assemble_report(std::string image_id,
                                   const std::vector<CellObject>& cells,
                                   const RoiGrid& roi, int width, int height,
                                   const std::vector<BlockThreshold>& outcomes,
                                   const QuantConfig& cfg = {})
{
  cfg.validate();
  std::vector<CellObject> kept;
  for (const auto& c : cells)
    if (roi.covers(c.component.cx, c.component.cy))
      kept.push_back(c);

  QuantReport r;
  r.image_id = std::move(image_id);
  for (const auto& c : kept) {
    if (c.kind == CellKind::discrete) {
      ++r.n_discrete;
    }
    else {
      ++r.n_clusters;
      r.total_cluster_area += c.component.area;
    }
  }
  r.mean_discrete_size = mean_discrete_size(kept);
  const double expected = expected_cell_size(kept, cfg);
  r.n_cells_in_clusters =
      round2(cells_in_clusters(static_cast<double>(r.total_cluster_area), expected));
  r.n_total = static_cast<double>(r.n_discrete) + r.n_cells_in_clusters;

  for (const auto& b : per_block_counts(kept, roi, width, height, expected, cfg))
    r.per_block_counts.push_back(b.count);
  r.histogram = build_histogram(r.per_block_counts, cfg.bin_width);
  r.block_thresholds = outcomes;
  for (const auto& o : outcomes)
    r.converged_blocks += o.outcome.converged;
  return r;
}

}  // namespace wbcq

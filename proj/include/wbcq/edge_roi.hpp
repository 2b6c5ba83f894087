#pragma once

#include <wbcq/canny.hpp>
#include <wbcq/components.hpp>
#include <wbcq/filters.hpp>
#include <wbcq/morphology.hpp>
#include <wbcq/threshold.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace wbcq {

enum class MergeMode { union_, intersection };

struct EdgeDetectorParams
{
  int avg_kernel = 16;
  double gauss_sigma = 2.0;
  // Width of the second Gaussian used by the sharpening step.
  double sharpen_sigma = 8.0;
  double sharpen_gain = 1.5;  // k
  double k1 = 0.9;
  int corner_window = 20;
  std::size_t min_area_texture = 60000;
  std::size_t min_area_final = 50000;
  int edge_exclusion_d = 200;
  StructuringElement se{SeShape::square, 11};
  MorphOrder morph_order = MorphOrder::erode_dilate;
  MergeMode merge_mode = MergeMode::union_;
  // When false, components touching any image border also count as
  // anchored, not only those reaching a corner window.
  bool strict_corners = false;
  CannyParams canny;

  void validate() const
  {
    if (avg_kernel < 1 || !(gauss_sigma > 0) || !(sharpen_sigma > 0) ||
        !(sharpen_gain > 0) || !(k1 > 0) || corner_window < 1 ||
        min_area_texture < 1 || min_area_final < 1 || edge_exclusion_d < 1 ||
        se.radius < 1)
      throw InvalidInput{"EdgeDetectorParams: all parameters must be positive"};
  }
};

/// Keeps components that have a pixel inside one of the four
/// corner_window x corner_window corner squares (or, unless `strict`, on the
/// image border).
inline BinaryMask corner_filter(const BinaryMask& mask, int corner_window,
                                bool strict)
{
  const int w = mask.width(), h = mask.height();
  auto anchored = [&](const Point& p) {
    const bool cx = p.x < corner_window || p.x >= w - corner_window;
    const bool cy = p.y < corner_window || p.y >= h - corner_window;
    if (cx && cy)
      return true;
    return !strict && (p.x == 0 || p.y == 0 || p.x == w - 1 || p.y == h - 1);
  };
  auto comps = connected_components(mask, 8);
  std::erase_if(comps, [&](const Component& c) {
    return std::none_of(c.pixels.begin(), c.pixels.end(), anchored);
  });
  return render(comps, w, h);
}

namespace detail {

inline void require_detector_size(const GrayImage& img, const EdgeDetectorParams& p)
{
  if (img.width() < 400 || img.height() < 400)
    throw InvalidInput{"muscle edge detection needs an image of at least 400x400"};
  if (2 * p.corner_window >= std::min(img.width(), img.height()))
    throw InvalidInput{"corner window does not fit the image"};
}

}  // namespace detail

/// Candidate non-muscle area from the absence of fiber texture.
inline BinaryMask detect_muscle_texture(const GrayImage& img,
                                        const EdgeDetectorParams& p)
{
  p.validate();
  detail::require_detector_size(img, p);
  const auto g = box_filter(img, p.avg_kernel);
  const auto g2 = gaussian_filter(g, p.gauss_sigma);
  const auto g4 = unsharp(g2, p.sharpen_sigma, p.sharpen_gain);

  // Otsu over the equalized image, mapped back onto g4's levels: the
  // equalization map is monotone, so g5 > t5 exactly when g4 > t4.
  const auto lut = equalization_lut(Histogram256::of(g4));
  Histogram256 h5;
  for (auto v : g4)
    h5.add(lut[v]);
  const int t5 = otsu_threshold(h5);
  int t4 = 0;
  for (int v = 0; v < 256; ++v)
    if (lut[v] <= t5)
      t4 = v;
  const auto g6 = apply_threshold(g4, t4, Polarity::bright_is_foreground);

  const auto g7 = morph_close(invert(g6), p.se, p.morph_order);
  return remove_small(corner_filter(g7, p.corner_window, p.strict_corners),
                      p.min_area_texture);
}

/// Candidate void from the mean-relative intensity threshold; catches
/// regions where dense cells hide the fiber texture.
inline BinaryMask detect_fuzzy_wbc(const GrayImage& img, const EdgeDetectorParams& p)
{
  p.validate();
  if (img.empty())
    throw InvalidInput{"detect_fuzzy_wbc: empty image"};
  const double cut = p.k1 * global_mean(img);
  const auto g = gaussian_filter(img, p.gauss_sigma);
  BinaryMask g2{img.width(), img.height()};
  for (std::size_t i = 0; i < g.size(); ++i)
    g2.pixels()[i] = g.pixels()[i] > cut;
  const auto g3 = morph_close(invert(g2), p.se, p.morph_order);
  return corner_filter(g3, p.corner_window, p.strict_corners);
}

struct EdgeResult
{
  BinaryMask empty_space;
  BinaryMask muscle_edge;
  // Pixels both detectors agree on.
  BinaryMask agreement;
  bool has_edge = false;
};

inline GrayImage mask_to_image(const BinaryMask& m)
{
  GrayImage out{m.width(), m.height()};
  for (std::size_t i = 0; i < m.size(); ++i)
    out.pixels()[i] = m.pixels()[i] ? 255 : 0;
  return out;
}

/// Area floor, hole filling and Canny contour of a candidate void mask.
inline EdgeResult refine_void(const BinaryMask& candidate, const EdgeDetectorParams& p)
{
  EdgeResult r;
  r.empty_space = fill_holes(remove_small(candidate, p.min_area_final, 8), 4);
  r.muscle_edge = canny(mask_to_image(r.empty_space), p.canny);
  r.has_edge = popcount(r.muscle_edge) > 0;
  return r;
}

inline EdgeResult intersect_and_refine(const BinaryMask& texture,
                                       const BinaryMask& fuzzy,
                                       const EdgeDetectorParams& p)
{
  require_same_shape(texture, fuzzy, "intersect_and_refine");
  const auto both = mask_and(texture, fuzzy);
  auto r = refine_void(both, p);
  r.agreement = both;
  return r;
}

/// Runs both detectors and combines them per `p.merge_mode`.
inline EdgeResult merge_detectors(const GrayImage& img, const EdgeDetectorParams& p)
{
  const auto texture = detect_muscle_texture(img, p);
  const auto fuzzy = detect_fuzzy_wbc(img, p);
  if (p.merge_mode == MergeMode::intersection)
    return intersect_and_refine(texture, fuzzy, p);
  auto r = refine_void(mask_or(texture, fuzzy), p);
  r.agreement = mask_and(texture, fuzzy);
  return r;
}

/// Chessboard distance from every pixel to the nearest set pixel of
/// `sources`; max int where there is none.
inline Raster<int> chebyshev_distance(const BinaryMask& sources)
{
  const int w = sources.width(), h = sources.height();
  constexpr int inf = std::numeric_limits<int>::max() / 2;
  Raster<int> d{w, h, inf};
  for (std::size_t i = 0; i < d.size(); ++i)
    if (sources.pixels()[i])
      d.pixels()[i] = 0;
  auto relax = [&](int x, int y, int nx, int ny) {
    if (d.contains(nx, ny) && d(nx, ny) + 1 < d(x, y))
      d(x, y) = d(nx, ny) + 1;
  };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      relax(x, y, x - 1, y);
      relax(x, y, x - 1, y - 1);
      relax(x, y, x, y - 1);
      relax(x, y, x + 1, y - 1);
    }
  for (int y = h - 1; y >= 0; --y)
    for (int x = w - 1; x >= 0; --x) {
      relax(x, y, x + 1, y);
      relax(x, y, x + 1, y + 1);
      relax(x, y, x, y + 1);
      relax(x, y, x - 1, y + 1);
    }
  if (popcount(sources) == 0)
    for (auto& v : d)
      v = std::numeric_limits<int>::max();
  return d;
}

inline int round_coord(double v, int n)
{
  return detail::clamp_index(static_cast<int>(std::floor(v + 0.5)), n);
}

/// Drops components whose centroid lies within chessboard distance d of
/// the muscle edge.
inline std::vector<Component> exclude_near_edge(std::vector<Component> objects,
                                                const EdgeResult& edge, int d)
{
  if (d < 0)
    throw InvalidInput{"exclude_near_edge: d must be >= 0"};
  if (!edge.has_edge)
    return objects;
  const auto dist = chebyshev_distance(edge.muscle_edge);
  std::erase_if(objects, [&](const Component& c) {
    return dist(round_coord(c.cx, dist.width()), round_coord(c.cy, dist.height())) < d;
  });
  return objects;
}

struct RoiScoring
{
  double w_corner = 0.5;
  double w_void = 0.3;
  double w_objects = 0.2;
  double objects_saturation = 5.0;
  double admit = 0.5;
  double max_void = 0.5;
};

struct RoiGrid
{
  int block_size = 200;
  int cols = 0;
  int rows = 0;
  std::vector<double> scores;
  std::vector<double> void_fraction;
  std::vector<std::uint8_t> in_roi;

  Region block(int col, int row, int width, int height) const
  {
    const int x = col * block_size, y = row * block_size;
    return {x, y, std::min(block_size, width - x), std::min(block_size, height - y)};
  }

  bool selected(int col, int row) const
  {
    return in_roi[static_cast<std::size_t>(row) * cols + col] != 0;
  }

  /// Whether pixel (x, y) falls in a selected block.
  bool covers(double x, double y) const
  {
    const int col = static_cast<int>(std::floor(x)) / block_size;
    const int row = static_cast<int>(std::floor(y)) / block_size;
    if (col < 0 || row < 0 || col >= cols || row >= rows)
      return false;
    return selected(col, row);
  }
};

/// Scores each block_size x block_size block from its corner distance to
/// the muscle edge, its void fraction and the number of effective objects.
inline RoiGrid score_blocks(int width, int height, const EdgeResult& edge,
                            const std::vector<Component>& effective_objects,
                            int block_size = 200, int d = 200,
                            const RoiScoring& s = {})
{
  if (block_size < 1 || d < 1)
    throw InvalidInput{"score_blocks: block size and d must be positive"};
  RoiGrid g;
  g.block_size = block_size;
  g.cols = (width + block_size - 1) / block_size;
  g.rows = (height + block_size - 1) / block_size;
  const std::size_t n = static_cast<std::size_t>(g.cols) * g.rows;
  g.scores.assign(n, 0.0);
  g.void_fraction.assign(n, 0.0);
  g.in_roi.assign(n, 0);

  Raster<int> dist;
  if (edge.has_edge)
    dist = chebyshev_distance(edge.muscle_edge);
  const bool has_void = !edge.empty_space.empty();

  std::vector<int> objects(n, 0);
  for (const auto& c : effective_objects) {
    const int col = round_coord(c.cx, width) / block_size;
    const int row = round_coord(c.cy, height) / block_size;
    ++objects[static_cast<std::size_t>(row) * g.cols + col];
  }

  for (int row = 0; row < g.rows; ++row)
    for (int col = 0; col < g.cols; ++col) {
      const auto i = static_cast<std::size_t>(row) * g.cols + col;
      const auto r = g.block(col, row, width, height);
      double c = 1.0;
      if (edge.has_edge) {
        const int corners[4][2] = {{r.x, r.y},
                                   {r.x_end() - 1, r.y},
                                   {r.x, r.y_end() - 1},
                                   {r.x_end() - 1, r.y_end() - 1}};
        int nearest = std::numeric_limits<int>::max();
        for (const auto& k : corners)
          nearest = std::min(nearest, dist(k[0], k[1]));
        c = std::min(1.0, static_cast<double>(nearest) / d);
      }
      double v = 0.0;
      if (has_void) {
        std::size_t hits = 0;
        for (int y = r.y; y < r.y_end(); ++y)
          for (int x = r.x; x < r.x_end(); ++x)
            hits += edge.empty_space(x, y) != 0;
        v = static_cast<double>(hits) / static_cast<double>(r.area());
      }
      const double nn = std::min(objects[i] / s.objects_saturation, 1.0);
      const double score = s.w_corner * c + s.w_void * (1.0 - v) + s.w_objects * nn;
      g.scores[i] = score;
      g.void_fraction[i] = v;
      g.in_roi[i] = score >= s.admit && v < s.max_void;
    }
  return g;
}

}  // namespace wbcq

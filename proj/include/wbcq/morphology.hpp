#pragma once

#include <wbcq/image.hpp>

#include <cmath>
#include <cstdint>
#include <deque>
#include <vector>

namespace wbcq {

enum class Polarity {
  dark_is_foreground,   // pixel <= t
  bright_is_foreground  // pixel > t
};

inline BinaryMask apply_threshold(const GrayImage& img, int t, Polarity polarity)
{
  if (t < 0 || t > 255)
    throw InvalidInput{"apply_threshold: t must lie in [0, 255]"};
  BinaryMask out{img.width(), img.height()};
  auto src = img.pixels();
  auto dst = out.pixels();
  if (polarity == Polarity::dark_is_foreground)
    for (std::size_t i = 0; i < src.size(); ++i)
      dst[i] = src[i] <= t;
  else
    for (std::size_t i = 0; i < src.size(); ++i)
      dst[i] = src[i] > t;
  return out;
}

inline BinaryMask invert(const BinaryMask& mask)
{
  BinaryMask out{mask.width(), mask.height()};
  auto src = mask.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] = src[i] ? 0 : 1;
  return out;
}

inline BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b)
{
  require_same_shape(a, b, "mask_and");
  BinaryMask out{a.width(), a.height()};
  for (std::size_t i = 0; i < out.size(); ++i)
    out.pixels()[i] = a.pixels()[i] && b.pixels()[i];
  return out;
}

inline BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b)
{
  require_same_shape(a, b, "mask_or");
  BinaryMask out{a.width(), a.height()};
  for (std::size_t i = 0; i < out.size(); ++i)
    out.pixels()[i] = a.pixels()[i] || b.pixels()[i];
  return out;
}

namespace detail {

/// Half-width of the structuring element on each row offset dy in
/// [-radius, radius].
inline std::vector<int> se_row_extents(const StructuringElement& b)
{
  std::vector<int> ext(2 * b.radius + 1);
  for (int dy = -b.radius; dy <= b.radius; ++dy)
    ext[dy + b.radius] =
        b.shape == SeShape::square
            ? b.radius
            : static_cast<int>(std::floor(
                  std::sqrt(double(b.radius * b.radius - dy * dy)) + 1e-9));
  return ext;
}

// Out-of-bounds pixels count as background for both operators. Each SE row
// is tested in O(1) with per-row prefix sums.
inline BinaryMask morph(const BinaryMask& mask, const StructuringElement& b,
                        bool erode)
{
  if (b.radius < 1)
    throw InvalidInput{"structuring element radius must be >= 1"};
  const int w = mask.width(), h = mask.height();
  const auto ext = se_row_extents(b);

  std::vector<int> prefix(static_cast<std::size_t>(w + 1) * h);
  for (int y = 0; y < h; ++y) {
    int* p = &prefix[static_cast<std::size_t>(y) * (w + 1)];
    p[0] = 0;
    for (int x = 0; x < w; ++x)
      p[x + 1] = p[x] + (mask(x, y) ? 1 : 0);
  }

  BinaryMask out{w, h};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      bool hit = erode;
      for (int dy = -b.radius; dy <= b.radius; ++dy) {
        const int yy = y + dy;
        const int e = ext[dy + b.radius];
        if (erode) {
          if (yy < 0 || yy >= h || x - e < 0 || x + e >= w) {
            hit = false;
            break;
          }
          const int* p = &prefix[static_cast<std::size_t>(yy) * (w + 1)];
          if (p[x + e + 1] - p[x - e] != 2 * e + 1) {
            hit = false;
            break;
          }
        }
        else {
          if (yy < 0 || yy >= h)
            continue;
          const int lo = std::max(0, x - e), hi = std::min(w - 1, x + e);
          const int* p = &prefix[static_cast<std::size_t>(yy) * (w + 1)];
          if (p[hi + 1] - p[lo] > 0) {
            hit = true;
            break;
          }
        }
      }
      out(x, y) = hit;
    }
  return out;
}

}  // namespace detail

inline BinaryMask erode(const BinaryMask& mask, const StructuringElement& b)
{
  return detail::morph(mask, b, true);
}

inline BinaryMask dilate(const BinaryMask& mask, const StructuringElement& b)
{
  return detail::morph(mask, b, false);
}

/// Order of the two passes in `morph_close`. `erode_dilate` is the order
/// the detectors were specified with; `dilate_erode` is the textbook closing.
enum class MorphOrder { erode_dilate, dilate_erode };

inline BinaryMask morph_close(const BinaryMask& mask,
                              const StructuringElement& b,
                              MorphOrder order = MorphOrder::erode_dilate)
{
  if (order == MorphOrder::erode_dilate)
    return dilate(erode(mask, b), b);
  return erode(dilate(mask, b), b);
}

/// Background regions not connected to the image border become foreground.
inline BinaryMask fill_holes(const BinaryMask& mask, int connectivity = 4)
{
  if (connectivity != 4 && connectivity != 8)
    throw InvalidInput{"fill_holes: connectivity must be 4 or 8"};
  const int w = mask.width(), h = mask.height();
  // 1 = background reachable from the border.
  BinaryMask outside{w, h};
  std::deque<Point> queue;
  auto seed = [&](int x, int y) {
    if (!mask(x, y) && !outside(x, y)) {
      outside(x, y) = 1;
      queue.push_back({x, y});
    }
  };
  for (int x = 0; x < w; ++x) {
    seed(x, 0);
    seed(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    seed(0, y);
    seed(w - 1, y);
  }
  while (!queue.empty()) {
    const auto p = queue.front();
    queue.pop_front();
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if ((dx == 0 && dy == 0) || (connectivity == 4 && dx != 0 && dy != 0))
          continue;
        const int nx = p.x + dx, ny = p.y + dy;
        if (mask.contains(nx, ny))
          seed(nx, ny);
      }
  }
  return invert(outside);
}

}  // namespace wbcq

#pragma once

#include <wbcq/filters.hpp>
#include <wbcq/image.hpp>

#include <cmath>
#include <vector>

namespace wbcq {

struct CannyParams
{
  double low = 100.0;
  double high = 200.0;
  double sigma = 1.4;
};

/// Canny edge detector: Gaussian smoothing, Sobel gradients, non-maximum
/// suppression along the quantized gradient direction, then hysteresis.
/// Thresholds are on the unnormalized Sobel L2 magnitude.
inline BinaryMask canny(const GrayImage& img, double low, double high,
                        double sigma = 1.4)
{
  if (!(low >= 0.0) || !(low < high))
    throw InvalidInput{"canny: require 0 <= low < high"};
  const int w = img.width(), h = img.height();
  BinaryMask edges{w, h};
  if (img.empty())
    return edges;

  const RealImage s = convolve_separable(img, gaussian_kernel(sigma));
  auto at = [&](int x, int y) {
    return s(detail::clamp_index(x, w), detail::clamp_index(y, h));
  };

  RealImage gx{w, h}, gy{w, h}, mag{w, h};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double dx = (at(x + 1, y - 1) + 2 * at(x + 1, y) + at(x + 1, y + 1)) -
                        (at(x - 1, y - 1) + 2 * at(x - 1, y) + at(x - 1, y + 1));
      const double dy = (at(x - 1, y + 1) + 2 * at(x, y + 1) + at(x + 1, y + 1)) -
                        (at(x - 1, y - 1) + 2 * at(x, y - 1) + at(x + 1, y - 1));
      gx(x, y) = dx;
      gy(x, y) = dy;
      mag(x, y) = std::hypot(dx, dy);
    }

  auto mag_at = [&](int x, int y) { return mag.contains(x, y) ? mag(x, y) : 0.0; };

  // tan(22.5 deg); the test is symmetric under swapping the axes so that a
  // 90 degree rotation of the input maps direction bins onto each other.
  const double t = 0.41421356237309503;
  enum : std::uint8_t { none = 0, weak = 1, strong = 2 };
  Raster<std::uint8_t> cls{w, h, none};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double m = mag(x, y);
      if (m < low || m == 0.0)
        continue;
      const double ax = std::abs(gx(x, y)), ay = std::abs(gy(x, y));
      int px, py, nx, ny;
      if (ay <= t * ax) {
        px = x - 1, py = y, nx = x + 1, ny = y;
      }
      else if (ax <= t * ay) {
        px = x, py = y - 1, nx = x, ny = y + 1;
      }
      else if ((gx(x, y) > 0) == (gy(x, y) > 0)) {
        px = x - 1, py = y - 1, nx = x + 1, ny = y + 1;
      }
      else {
        px = x + 1, py = y - 1, nx = x - 1, ny = y + 1;
      }
      // Plateaus of two equal maxima keep the first pixel only.
      if (m > mag_at(px, py) && m >= mag_at(nx, ny))
        cls(x, y) = m >= high ? strong : weak;
    }

  std::vector<Point> stack;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (cls(x, y) == strong) {
        edges(x, y) = 1;
        stack.push_back({x, y});
      }
  while (!stack.empty()) {
    const auto p = stack.back();
    stack.pop_back();
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int qx = p.x + dx, qy = p.y + dy;
        if (cls.contains(qx, qy) && cls(qx, qy) == weak && !edges(qx, qy)) {
          edges(qx, qy) = 1;
          stack.push_back({qx, qy});
        }
      }
  }
  return edges;
}

inline BinaryMask canny(const GrayImage& img, const CannyParams& p)
{
  return canny(img, p.low, p.high, p.sigma);
}

}  // namespace wbcq

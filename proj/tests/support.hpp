#pragma once

// Seeded generators and brute-force reference implementations shared by the
// test binaries.

#include <wbcq/image.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <random>
#include <vector>

namespace wbcq::fixtures {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi)
{
  return std::uniform_int_distribution<int>{lo, hi}(rng);
}

inline GrayImage random_image(Rng& rng, int w, int h, int lo = 0, int hi = 255)
{
  GrayImage img{w, h};
  for (auto& v : img)
    v = static_cast<std::uint8_t>(uniform_int(rng, lo, hi));
  return img;
}

inline BinaryMask random_mask(Rng& rng, int w, int h, double density)
{
  std::bernoulli_distribution on{density};
  BinaryMask m{w, h};
  for (auto& v : m)
    v = on(rng);
  return m;
}

/// Union of random axis-aligned rectangles: masks with real structure.
inline BinaryMask random_blocks(Rng& rng, int w, int h, int n_rects, int max_side)
{
  BinaryMask m{w, h};
  for (int i = 0; i < n_rects; ++i) {
    const int rw = uniform_int(rng, 1, max_side), rh = uniform_int(rng, 1, max_side);
    const int x0 = uniform_int(rng, 0, w - 1), y0 = uniform_int(rng, 0, h - 1);
    for (int y = y0; y < std::min(h, y0 + rh); ++y)
      for (int x = x0; x < std::min(w, x0 + rw); ++x)
        m(x, y) = 1;
  }
  return m;
}

/// Random smooth-ish image: random rectangles of random levels over a
/// random background, plus light per-pixel jitter.
inline GrayImage random_scene(Rng& rng, int w, int h)
{
  GrayImage img{w, h, static_cast<std::uint8_t>(uniform_int(rng, 0, 255))};
  const int n = uniform_int(rng, 1, 12);
  for (int i = 0; i < n; ++i) {
    const auto level = static_cast<std::uint8_t>(uniform_int(rng, 0, 255));
    const int x0 = uniform_int(rng, 0, w - 1), y0 = uniform_int(rng, 0, h - 1);
    const int rw = uniform_int(rng, 1, w), rh = uniform_int(rng, 1, h);
    for (int y = y0; y < std::min(h, y0 + rh); ++y)
      for (int x = x0; x < std::min(w, x0 + rw); ++x)
        img(x, y) = level;
  }
  for (auto& v : img)
    v = static_cast<std::uint8_t>(std::clamp(v + uniform_int(rng, -3, 3), 0, 255));
  return img;
}

inline void draw_disk(GrayImage& img, double cx, double cy, double r, std::uint8_t level)
{
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r)
        img(x, y) = level;
}

inline void fill_rect(GrayImage& img, int x0, int y0, int w, int h, std::uint8_t level)
{
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x)
      img(x, y) = level;
}

/// Histogram with a random number of occupied levels and random counts,
/// sometimes concentrated in two or three modes.
inline std::array<std::uint64_t, 256> random_histogram(Rng& rng)
{
  std::array<std::uint64_t, 256> c{};
  const int style = uniform_int(rng, 0, 3);
  if (style == 0) {
    for (auto& v : c)
      v = static_cast<std::uint64_t>(uniform_int(rng, 0, 1000));
  }
  else if (style == 1) {
    const int k = uniform_int(rng, 1, 12);
    for (int i = 0; i < k; ++i)
      c[uniform_int(rng, 0, 255)] += static_cast<std::uint64_t>(uniform_int(rng, 1, 5000));
  }
  else {
    const int modes = style;
    for (int m = 0; m < modes; ++m) {
      const double mu = uniform_int(rng, 10, 245);
      const double sd = uniform_int(rng, 2, 30);
      std::normal_distribution<double> g{mu, sd};
      const int n = uniform_int(rng, 100, 20000);
      for (int i = 0; i < n; ++i)
        ++c[std::clamp(static_cast<int>(std::lround(g(rng))), 0, 255)];
    }
  }
  std::uint64_t total = 0;
  for (auto v : c)
    total += v;
  if (total == 0)
    c[uniform_int(rng, 0, 255)] = 1;
  return c;
}

// Threshold oracles. Each evaluates its criterion from scratch at every
// candidate t, with classes {<= t} and {> t}; ties keep the smallest t.

inline int oracle_otsu(const std::array<std::uint64_t, 256>& c)
{
  long double n = 0;
  for (auto v : c)
    n += v;
  int best = -1;
  long double best_w = std::numeric_limits<long double>::infinity();
  for (int t = 0; t < 256; ++t) {
    long double n0 = 0, n1 = 0, m0 = 0, m1 = 0;
    for (int i = 0; i <= t; ++i) {
      n0 += c[i];
      m0 += static_cast<long double>(i) * c[i];
    }
    for (int i = t + 1; i < 256; ++i) {
      n1 += c[i];
      m1 += static_cast<long double>(i) * c[i];
    }
    if (n0 == 0)
      continue;
    m0 /= n0;
    if (n1 > 0)
      m1 /= n1;
    long double v0 = 0, v1 = 0;
    for (int i = 0; i <= t; ++i)
      v0 += (i - m0) * (i - m0) * c[i];
    for (int i = t + 1; i < 256; ++i)
      v1 += (i - m1) * (i - m1) * c[i];
    const long double within = (v0 + v1) / n;  // w0*var0 + w1*var1
    if (within < best_w) {
      best_w = within;
      best = t;
    }
  }
  return best;
}

inline int oracle_max_entropy(const std::array<std::uint64_t, 256>& c)
{
  double n = 0;
  for (auto v : c)
    n += static_cast<double>(v);
  int best = -1;
  double best_h = 0;
  for (int t = 0; t < 255; ++t) {
    double p0 = 0, p1 = 0;
    for (int i = 0; i <= t; ++i)
      p0 += c[i] / n;
    for (int i = t + 1; i < 256; ++i)
      p1 += c[i] / n;
    if (p0 <= 0 || p1 <= 0)
      continue;
    double h0 = 0, h1 = 0;
    for (int i = 0; i <= t; ++i)
      if (c[i]) {
        const double q = c[i] / n / p0;
        h0 -= q * std::log(q);
      }
    for (int i = t + 1; i < 256; ++i)
      if (c[i]) {
        const double q = c[i] / n / p1;
        h1 -= q * std::log(q);
      }
    if (best < 0 || h0 + h1 > best_h) {
      best_h = h0 + h1;
      best = t;
    }
  }
  if (best < 0)
    for (int i = 0; i < 256; ++i)
      if (c[i])
        return i;
  return best;
}

inline int oracle_yen(const std::array<std::uint64_t, 256>& c)
{
  double n = 0;
  for (auto v : c)
    n += static_cast<double>(v);
  int best = -1;
  double best_tc = 0;
  for (int t = 0; t < 255; ++t) {
    double p0 = 0, p1 = 0;
    for (int i = 0; i <= t; ++i)
      p0 += c[i] / n;
    for (int i = t + 1; i < 256; ++i)
      p1 += c[i] / n;
    if (p0 <= 0 || p1 <= 0)
      continue;
    double s0 = 0, s1 = 0;
    for (int i = 0; i <= t; ++i)
      s0 += (c[i] / n / p0) * (c[i] / n / p0);
    for (int i = t + 1; i < 256; ++i)
      s1 += (c[i] / n / p1) * (c[i] / n / p1);
    const double tc = -std::log(s0) - std::log(s1);
    if (best < 0 || tc > best_tc) {
      best_tc = tc;
      best = t;
    }
  }
  if (best < 0)
    for (int i = 0; i < 256; ++i)
      if (c[i])
        return i;
  return best;
}

// Filtering oracles.

/// size x size moving average by direct summation with edge replication.
inline GrayImage oracle_box(const GrayImage& img, int size)
{
  const int w = img.width(), h = img.height(), lo = -(size / 2);
  GrayImage out{w, h};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      long sum = 0;
      for (int dy = lo; dy < lo + size; ++dy)
        for (int dx = lo; dx < lo + size; ++dx)
          sum += img(std::clamp(x + dx, 0, w - 1), std::clamp(y + dy, 0, h - 1));
      out(x, y) = to_intensity(static_cast<double>(sum) / (size * size));
    }
  return out;
}

/// Dense 2-D Gaussian convolution with its own normalized 2-D kernel.
inline GrayImage oracle_gaussian(const GrayImage& img, double sigma)
{
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k;
  double sum = 0;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) {
      k.push_back(std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma)));
      sum += k.back();
    }
  const int w = img.width(), h = img.height();
  GrayImage out{w, h};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      std::size_t i = 0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
          acc += k[i++] / sum * img(std::clamp(x + dx, 0, w - 1), std::clamp(y + dy, 0, h - 1));
      out(x, y) = to_intensity(acc);
    }
  return out;
}

// Morphology oracles: direct neighbourhood scans, outside pixels are
// background.

inline bool in_se(const StructuringElement& b, int dx, int dy)
{
  if (b.shape == SeShape::square)
    return true;
  return dx * dx + dy * dy <= b.radius * b.radius;
}

inline BinaryMask oracle_erode(const BinaryMask& m, const StructuringElement& b)
{
  BinaryMask out{m.width(), m.height()};
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      bool all = true;
      for (int dy = -b.radius; dy <= b.radius && all; ++dy)
        for (int dx = -b.radius; dx <= b.radius && all; ++dx)
          if (in_se(b, dx, dy) && !(m.contains(x + dx, y + dy) && m(x + dx, y + dy)))
            all = false;
      out(x, y) = all;
    }
  return out;
}

inline BinaryMask oracle_dilate(const BinaryMask& m, const StructuringElement& b)
{
  BinaryMask out{m.width(), m.height()};
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      bool any = false;
      for (int dy = -b.radius; dy <= b.radius && !any; ++dy)
        for (int dx = -b.radius; dx <= b.radius && !any; ++dx)
          if (in_se(b, dx, dy) && m.contains(x + dx, y + dy) && m(x + dx, y + dy))
            any = true;
      out(x, y) = any;
    }
  return out;
}

/// Breadth-first flood labelling; returns component sizes in discovery order.
inline std::vector<std::size_t> oracle_component_areas(const BinaryMask& m, int conn)
{
  Raster<int> seen{m.width(), m.height(), 0};
  std::vector<std::size_t> areas;
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      if (!m(x, y) || seen(x, y))
        continue;
      std::size_t area = 0;
      std::deque<Point> q{{x, y}};
      seen(x, y) = 1;
      while (!q.empty()) {
        const auto p = q.front();
        q.pop_front();
        ++area;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            if ((dx == 0 && dy == 0) || (conn == 4 && dx != 0 && dy != 0))
              continue;
            const int nx = p.x + dx, ny = p.y + dy;
            if (m.contains(nx, ny) && m(nx, ny) && !seen(nx, ny)) {
              seen(nx, ny) = 1;
              q.push_back({nx, ny});
            }
          }
      }
      areas.push_back(area);
    }
  return areas;
}

template <typename T>
Raster<T> rotate90(const Raster<T>& img)
{
  // (x, y) -> (h - 1 - y, x)
  Raster<T> out{img.height(), img.width()};
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      out(img.height() - 1 - y, x) = img(x, y);
  return out;
}

}  // namespace wbcq::fixtures

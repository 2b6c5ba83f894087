#pragma once

#include <wbcq/image.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace wbcq {

/// Luma conversion with the ITU-R BT.601 weights.
inline GrayImage to_grayscale(const RgbImage& rgb)
{
  if (rgb.empty())
    throw InvalidInput{"to_grayscale: zero-sized image"};
  GrayImage out{rgb.width(), rgb.height()};
  auto src = rgb.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] = to_intensity(0.299 * src[i].r + 0.587 * src[i].g +
                          0.114 * src[i].b);
  return out;
}

inline double global_mean(const GrayImage& img)
{
  if (img.empty())
    throw InvalidInput{"global_mean: empty image"};
  std::uint64_t sum = 0;
  for (auto v : img)
    sum += v;
  return static_cast<double>(sum) / static_cast<double>(img.size());
}

/// Population standard deviation of the intensities inside `block`.
inline double local_std(const GrayImage& img, const Region& block)
{
  if (block.width <= 0 || block.height <= 0)
    throw InvalidInput{"local_std: empty block"};
  if (block.x < 0 || block.y < 0 || block.x_end() > img.width() ||
      block.y_end() > img.height())
    throw InvalidInput{"local_std: block out of bounds"};
  // Integer moments keep n*sum(x^2) - sum(x)^2 exact.
  std::uint64_t s1 = 0, s2 = 0;
  for (int y = block.y; y < block.y_end(); ++y)
    for (int x = block.x; x < block.x_end(); ++x) {
      const std::uint64_t v = img(x, y);
      s1 += v;
      s2 += v * v;
    }
  const auto n = static_cast<std::uint64_t>(block.area());
  const auto num = static_cast<long double>(n * s2 - s1 * s1);
  return static_cast<double>(std::sqrt(num) / static_cast<long double>(n));
}

inline double local_mean(const GrayImage& img, const Region& block)
{
  if (block.width <= 0 || block.height <= 0)
    throw InvalidInput{"local_mean: empty block"};
  std::uint64_t s = 0;
  for (int y = block.y; y < block.y_end(); ++y)
    for (int x = block.x; x < block.x_end(); ++x)
      s += img(x, y);
  return static_cast<double>(s) / static_cast<double>(block.area());
}

inline GrayImage fill_artifacts(const GrayImage& img,
                                const BinaryMask& artifact_mask, double fill)
{
  require_same_shape(img, artifact_mask, "fill_artifacts");
  const auto value = to_intensity(fill);
  GrayImage out = img;
  auto dst = out.pixels();
  auto m = artifact_mask.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i)
    if (m[i])
      dst[i] = value;
  return out;
}

namespace detail {

inline int clamp_index(int i, int n) noexcept
{
  return i < 0 ? 0 : (i >= n ? n - 1 : i);
}

}  // namespace detail

/// size x size moving average with edge replication. For even sizes the
/// window spans [-size/2, size/2 - 1] around the centre pixel.
inline GrayImage box_filter(const GrayImage& img, int size)
{
  if (size < 1)
    throw InvalidInput{"box_filter: size must be >= 1"};
  if (size > std::min(img.width(), img.height()))
    throw InvalidInput{"box_filter: kernel larger than image"};
  const int w = img.width(), h = img.height();
  const int lo = -(size / 2);

  // Horizontal window sums, then vertical sums of those; all integer.
  std::vector<std::uint32_t> rows(static_cast<std::size_t>(w) * h);
  std::vector<std::uint32_t> prefix(static_cast<std::size_t>(w) + size + 1);
  for (int y = 0; y < h; ++y) {
    prefix[0] = 0;
    for (int i = 0; i < w + size; ++i)
      prefix[i + 1] = prefix[i] + img(detail::clamp_index(i + lo, w), y);
    for (int x = 0; x < w; ++x)
      rows[static_cast<std::size_t>(y) * w + x] = prefix[x + size] - prefix[x];
  }

  GrayImage out{w, h};
  const std::uint64_t area = static_cast<std::uint64_t>(size) * size;
  std::vector<std::uint64_t> col(static_cast<std::size_t>(h) + size + 1);
  for (int x = 0; x < w; ++x) {
    col[0] = 0;
    for (int i = 0; i < h + size; ++i)
      col[i + 1] =
          col[i] +
          rows[static_cast<std::size_t>(detail::clamp_index(i + lo, h)) * w + x];
    for (int y = 0; y < h; ++y) {
      const std::uint64_t sum = col[y + size] - col[y];
      // Round half up: floor(sum / area + 1/2).
      out(x, y) = static_cast<std::uint8_t>((2 * sum + area) / (2 * area));
    }
  }
  return out;
}

/// Normalized 1-D Gaussian taps over [-ceil(3 sigma), ceil(3 sigma)].
inline std::vector<double> gaussian_kernel(double sigma)
{
  if (!(sigma > 0.0))
    throw InvalidInput{"gaussian_kernel: sigma must be > 0"};
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += k[i + radius];
  }
  for (auto& v : k)
    v /= sum;
  return k;
}

/// Separable convolution, rows first, with edge replication.
template <typename T>
RealImage convolve_separable(const Raster<T>& img,
                             const std::vector<double>& kernel)
{
  const int w = img.width(), h = img.height();
  const int radius = static_cast<int>(kernel.size() / 2);
  RealImage tmp{w, h};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k)
        acc += kernel[k + radius] * img(detail::clamp_index(x + k, w), y);
      tmp(x, y) = acc;
    }
  RealImage out{w, h};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k)
        acc += kernel[k + radius] * tmp(x, detail::clamp_index(y + k, h));
      out(x, y) = acc;
    }
  return out;
}

inline GrayImage quantize(const RealImage& img)
{
  GrayImage out{img.width(), img.height()};
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] = to_intensity(src[i]);
  return out;
}

inline GrayImage gaussian_filter(const GrayImage& img, double sigma)
{
  if (!(sigma > 0.0))
    throw InvalidInput{"gaussian_filter: sigma must be > 0"};
  return quantize(convolve_separable(img, gaussian_kernel(sigma)));
}

/// High-pass sharpening: clamp(round(k * (img - gaussian(img, sigma)))).
inline GrayImage unsharp(const GrayImage& img, double sigma, double k)
{
  if (!(k > 0.0))
    throw InvalidInput{"unsharp: gain must be > 0"};
  const GrayImage blurred = gaussian_filter(img, sigma);
  GrayImage out{img.width(), img.height()};
  auto a = img.pixels();
  auto b = blurred.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i)
    dst[i] = to_intensity(k * (static_cast<int>(a[i]) - static_cast<int>(b[i])));
  return out;
}

/// Level mapping floor(255 * CDF(level)) for the given histogram.
inline std::array<std::uint8_t, 256> equalization_lut(const Histogram256& hist)
{
  if (hist.total == 0)
    throw InvalidInput{"equalization_lut: empty histogram"};
  std::array<std::uint8_t, 256> lut{};
  std::uint64_t cum = 0;
  for (int v = 0; v < 256; ++v) {
    cum += hist.counts[v];
    lut[v] = static_cast<std::uint8_t>(255 * cum / hist.total);
  }
  return lut;
}

inline GrayImage hist_equalize(const GrayImage& img)
{
  if (img.empty())
    throw InvalidInput{"hist_equalize: empty image"};
  const auto lut = equalization_lut(Histogram256::of(img));
  GrayImage out{img.width(), img.height()};
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] = lut[src[i]];
  return out;
}

}  // namespace wbcq

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wbcq {

/// Raised for any precondition violation on caller-supplied data.
class InvalidInput : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Generic row-major raster. `GrayImage` and `BinaryMask` are the two
/// instantiations the pipeline passes around.
template <typename T>
class Raster
{
public:
  using value_type = T;

  Raster() = default;

  Raster(int width, int height, T fill = T{})
    : width_{width}
    , height_{height}
  {
    if (width < 0 || height < 0)
      throw InvalidInput{"raster dimensions must be non-negative"};
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  Raster(int width, int height, std::vector<T> data)
    : width_{width}
    , height_{height}
    , data_{std::move(data)}
  {
    if (width < 0 || height < 0)
      throw InvalidInput{"raster dimensions must be non-negative"};
    if (data_.size() != static_cast<std::size_t>(width) * height)
      throw InvalidInput{"raster data length does not match width x height"};
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int x, int y) noexcept
  {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  const T& operator()(int x, int y) const noexcept
  {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  bool contains(int x, int y) const noexcept
  {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::span<T> pixels() noexcept { return data_; }
  std::span<const T> pixels() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  friend bool operator==(const Raster&, const Raster&) = default;

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using GrayImage = Raster<std::uint8_t>;
// uint8_t rather than bool: std::vector<bool> has no contiguous storage.
using BinaryMask = Raster<std::uint8_t>;
using RealImage = Raster<double>;

struct Rgb
{
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

using RgbImage = Raster<Rgb>;

template <typename A, typename B>
bool same_shape(const Raster<A>& a, const Raster<B>& b) noexcept
{
  return a.width() == b.width() && a.height() == b.height();
}

template <typename A, typename B>
void require_same_shape(const Raster<A>& a, const Raster<B>& b,
                        const char* what)
{
  if (!same_shape(a, b))
    throw InvalidInput{std::string{what} + ": dimension mismatch"};
}

/// Axis-aligned pixel rectangle, half-open on the right and bottom.
struct Region
{
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  int x_end() const noexcept { return x + width; }
  int y_end() const noexcept { return y + height; }
  long long area() const noexcept
  {
    return static_cast<long long>(width) * height;
  }
  friend bool operator==(const Region&, const Region&) = default;
};

/// Tiles a width x height image into block x block regions, row-major.
/// Right and bottom remainders keep their natural smaller size.
inline std::vector<Region> tile(int width, int height, int block)
{
  if (block < 1)
    throw InvalidInput{"tile: block size must be >= 1"};
  std::vector<Region> tiles;
  for (int y = 0; y < height; y += block)
    for (int x = 0; x < width; x += block)
      tiles.push_back({x, y, std::min(block, width - x),
                       std::min(block, height - y)});
  return tiles;
}

template <typename T>
Raster<T> crop(const Raster<T>& img, const Region& r)
{
  if (r.x < 0 || r.y < 0 || r.width < 0 || r.height < 0 ||
      r.x_end() > img.width() || r.y_end() > img.height())
    throw InvalidInput{"crop: region out of bounds"};
  Raster<T> out{r.width, r.height};
  for (int y = 0; y < r.height; ++y)
    for (int x = 0; x < r.width; ++x)
      out(x, y) = img(r.x + x, r.y + y);
  return out;
}

template <typename T>
void paste(Raster<T>& dst, const Raster<T>& src, int x0, int y0)
{
  for (int y = 0; y < src.height(); ++y)
    for (int x = 0; x < src.width(); ++x)
      dst(x0 + x, y0 + y) = src(x, y);
}

inline std::size_t popcount(const BinaryMask& m) noexcept
{
  std::size_t n = 0;
  for (auto b : m)
    n += b != 0;
  return n;
}

/// Intensity histogram over L = 256 levels.
struct Histogram256
{
  std::array<std::uint64_t, 256> counts{};
  std::uint64_t total = 0;

  void add(std::uint8_t level, std::uint64_t n = 1) noexcept
  {
    counts[level] += n;
    total += n;
  }

  static Histogram256 of(const GrayImage& img) noexcept
  {
    Histogram256 h;
    for (auto v : img)
      ++h.counts[v];
    h.total = img.size();
    return h;
  }

  static Histogram256 of(const GrayImage& img, const Region& r)
  {
    Histogram256 h;
    for (int y = r.y; y < r.y_end(); ++y)
      for (int x = r.x; x < r.x_end(); ++x)
        ++h.counts[img(x, y)];
    h.total = static_cast<std::uint64_t>(r.area());
    return h;
  }

  static Histogram256 from_counts(const std::array<std::uint64_t, 256>& c)
  {
    Histogram256 h;
    h.counts = c;
    for (auto n : c)
      h.total += n;
    return h;
  }
};

enum class SeShape { square, disk };

struct StructuringElement
{
  SeShape shape = SeShape::square;
  int radius = 1;
};

struct Point
{
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct BoundingBox
{
  int min_x = 0;
  int min_y = 0;
  int max_x = 0;
  int max_y = 0;
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// A connected foreground region.
struct Component
{
  int label = 0;
  std::size_t area = 0;
  BoundingBox bbox;
  double cx = 0.0;
  double cy = 0.0;
  std::vector<Point> pixels;
};

/// Round half up, then clamp to the 8-bit range.
inline std::uint8_t to_intensity(double v) noexcept
{
  const double r = std::floor(v + 0.5);
  if (r <= 0.0)
    return 0;
  if (r >= 255.0)
    return 255;
  return static_cast<std::uint8_t>(r);
}

}  // namespace wbcq

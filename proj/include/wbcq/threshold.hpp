#pragma once

#include <wbcq/components.hpp>
#include <wbcq/image.hpp>
#include <wbcq/morphology.hpp>

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wbcq {

// All three global criteria split the levels into {<= t} and {> t} and
// break ties towards the smallest t.

/// Otsu's threshold: minimizes the within-class variance
/// w0*var0 + w1*var1, computed here in the equivalent between-class form.
/// Only thresholds with a non-empty lower class are considered, so a
/// single-level histogram yields that level.
inline int otsu_threshold(const Histogram256& hist)
{
  if (hist.total == 0)
    throw InvalidInput{"otsu_threshold: empty histogram"};
  long double total_sum = 0;
  for (int i = 0; i < 256; ++i)
    total_sum += static_cast<long double>(i) * hist.counts[i];
  const auto n = static_cast<long double>(hist.total);

  int best_t = -1;
  long double best = -1;
  std::uint64_t n0 = 0;
  long double s0 = 0;
  for (int t = 0; t < 256; ++t) {
    n0 += hist.counts[t];
    s0 += static_cast<long double>(t) * hist.counts[t];
    if (n0 == 0)
      continue;
    const std::uint64_t n1 = hist.total - n0;
    long double between = 0;
    if (n1 > 0) {
      const long double d = static_cast<long double>(n0) * total_sum - n * s0;
      between = d * d / (static_cast<long double>(n0) * static_cast<long double>(n1));
    }
    if (between > best) {
      best = between;
      best_t = t;
    }
  }
  return best_t;
}

/// Kapur-Sahoo-Wong maximum entropy threshold.
inline int max_entropy_threshold(const Histogram256& hist)
{
  if (hist.total == 0)
    throw InvalidInput{"max_entropy_threshold: empty histogram"};
  const double n = static_cast<double>(hist.total);
  std::array<double, 256> plogp{};
  int first_level = -1;
  for (int i = 0; i < 256; ++i) {
    if (hist.counts[i] == 0)
      continue;
    if (first_level < 0)
      first_level = i;
    const double p = hist.counts[i] / n;
    plogp[i] = p * std::log(p);
  }
  // Upper-class sums accumulated separately rather than by subtraction.
  std::array<double, 257> upper{};
  for (int i = 255; i >= 0; --i)
    upper[i] = upper[i + 1] + plogp[i];

  int best_t = -1;
  double best = 0.0;
  std::uint64_t n0 = 0;
  double cum_plogp = 0.0;
  for (int t = 0; t < 256; ++t) {
    n0 += hist.counts[t];
    cum_plogp += plogp[t];
    if (n0 == 0 || n0 == hist.total)
      continue;
    const double p0 = n0 / n;
    const double p1 = (hist.total - n0) / n;
    // -sum (p/P) ln(p/P) = ln P - (sum p ln p) / P
    const double h0 = std::log(p0) - cum_plogp / p0;
    const double h1 = std::log(p1) - upper[t + 1] / p1;
    if (best_t < 0 || h0 + h1 > best) {
      best = h0 + h1;
      best_t = t;
    }
  }
  return best_t < 0 ? first_level : best_t;
}

/// Yen's maximum correlation criterion.
inline int yen_threshold(const Histogram256& hist)
{
  if (hist.total == 0)
    throw InvalidInput{"yen_threshold: empty histogram"};
  const double n = static_cast<double>(hist.total);
  std::array<double, 256> sq{};
  int first_level = -1;
  for (int i = 0; i < 256; ++i) {
    if (hist.counts[i] == 0)
      continue;
    if (first_level < 0)
      first_level = i;
    const double p = hist.counts[i] / n;
    sq[i] = p * p;
  }
  std::array<double, 257> upper{};
  for (int i = 255; i >= 0; --i)
    upper[i] = upper[i + 1] + sq[i];

  int best_t = -1;
  double best = 0.0;
  std::uint64_t n0 = 0;
  double cum_sq = 0.0;
  for (int t = 0; t < 256; ++t) {
    n0 += hist.counts[t];
    cum_sq += sq[t];
    if (n0 == 0 || n0 == hist.total)
      continue;
    const double p0 = n0 / n;
    const double crit = -std::log(cum_sq * upper[t + 1]) +
                        2.0 * std::log(p0 * (1.0 - p0));
    if (best_t < 0 || crit > best) {
      best = crit;
      best_t = t;
    }
  }
  return best_t < 0 ? first_level : best_t;
}

/// Parameters of the localized iterative Otsu refinement.
struct LiOtsuConfig
{
  double foreground_ratio = 0.10;  // F
  std::size_t max_objects = 200;   // N_max
  double step = 0.90;              // S, 0.8 < S < 1
  int t_floor = 10;
  int max_iters = 50;
  std::size_t min_object_area = 4;

  void validate() const
  {
    if (!(foreground_ratio > 0.0 && foreground_ratio < 1.0))
      throw InvalidInput{"LiOtsuConfig: foreground ratio F must lie in (0, 1)"};
    if (!(step > 0.8 && step < 1.0))
      throw InvalidInput{"LiOtsuConfig: step S must satisfy 0.8 < S < 1"};
    if (max_objects < 1)
      throw InvalidInput{"LiOtsuConfig: N_max must be >= 1"};
    if (t_floor < 0 || t_floor > 255)
      throw InvalidInput{"LiOtsuConfig: t_floor must lie in [0, 255]"};
    if (max_iters < 1)
      throw InvalidInput{"LiOtsuConfig: max_iters must be >= 1"};
    if (min_object_area < 1)
      throw InvalidInput{"LiOtsuConfig: min_object_area must be >= 1"};
  }
};

struct ThresholdOutcome
{
  int t = 0;
  int iterations = 0;
  double foreground_ratio = 0.0;
  std::size_t object_count = 0;
  bool converged = false;
};

/// Localized iterative Otsu on one block. Starts at Otsu's threshold and
/// lowers it by t <- floor(S * t) until the dark foreground covers less than
/// F of the block and there are fewer than N_max objects.
inline ThresholdOutcome li_otsu(const GrayImage& block, const LiOtsuConfig& cfg)
{
  if (block.empty())
    throw InvalidInput{"li_otsu: empty block"};
  cfg.validate();

  const auto hist = Histogram256::of(block);
  std::array<std::uint64_t, 256> cum{};
  std::uint64_t running = 0;
  for (int i = 0; i < 256; ++i) {
    running += hist.counts[i];
    cum[i] = running;
  }
  auto objects_at = [&](int t) {
    return count_components(
        apply_threshold(block, t, Polarity::dark_is_foreground),
        cfg.min_object_area, 8);
  };

  ThresholdOutcome out;
  out.t = otsu_threshold(hist);
  for (;;) {
    out.foreground_ratio =
        static_cast<double>(cum[out.t]) / static_cast<double>(hist.total);
    // The object count is only needed once the ratio test passes.
    if (out.foreground_ratio < cfg.foreground_ratio) {
      out.object_count = objects_at(out.t);
      if (out.object_count < cfg.max_objects) {
        out.converged = true;
        return out;
      }
    }
    if (out.t <= cfg.t_floor || out.iterations >= cfg.max_iters)
      break;
    const int next = static_cast<int>(std::floor(cfg.step * out.t + 1e-9));
    out.t = std::max(next, cfg.t_floor);
    ++out.iterations;
  }
  if (out.foreground_ratio >= cfg.foreground_ratio)
    out.object_count = objects_at(out.t);
  out.converged = false;
  return out;
}

struct BlockThreshold
{
  Region region;
  ThresholdOutcome outcome;
};

struct Segmentation
{
  BinaryMask mask;
  std::vector<BlockThreshold> blocks;
};

/// Tiles the image, runs `li_otsu` per tile with dark-is-foreground
/// polarity and stitches the per-tile masks.
inline Segmentation segment_image(const GrayImage& img, const LiOtsuConfig& cfg,
                                  int block_size = 400)
{
  cfg.validate();
  if (block_size < 64)
    throw InvalidInput{"segment_image: block size must be >= 64"};
  if (img.empty())
    throw InvalidInput{"segment_image: empty image"};
  Segmentation seg;
  seg.mask = BinaryMask{img.width(), img.height()};
  for (const auto& r : tile(img.width(), img.height(), block_size)) {
    const auto block = crop(img, r);
    const auto outcome = li_otsu(block, cfg);
    paste(seg.mask,
          apply_threshold(block, outcome.t, Polarity::dark_is_foreground), r.x,
          r.y);
    seg.blocks.push_back({r, outcome});
  }
  return seg;
}

enum class ThresholdMethod { li_otsu, otsu, max_entropy, yen };

inline std::string_view method_name(ThresholdMethod m)
{
  switch (m) {
  case ThresholdMethod::li_otsu:
    return "li_otsu";
  case ThresholdMethod::otsu:
    return "otsu";
  case ThresholdMethod::max_entropy:
    return "max_entropy";
  case ThresholdMethod::yen:
    return "yen";
  }
  return "?";
}

inline std::optional<ThresholdMethod> parse_method(std::string_view s)
{
  for (auto m : {ThresholdMethod::li_otsu, ThresholdMethod::otsu,
                 ThresholdMethod::max_entropy, ThresholdMethod::yen})
    if (method_name(m) == s)
      return m;
  return std::nullopt;
}

/// Dark-foreground mask from one of the comparators. The global methods
/// apply a single threshold to the whole image; li_otsu works per block.
inline BinaryMask segment_with(const GrayImage& img, ThresholdMethod method,
                               const LiOtsuConfig& cfg = {},
                               int block_size = 400)
{
  const auto hist = Histogram256::of(img);
  switch (method) {
  case ThresholdMethod::li_otsu:
    return segment_image(img, cfg, block_size).mask;
  case ThresholdMethod::otsu:
    return apply_threshold(img, otsu_threshold(hist), Polarity::dark_is_foreground);
  case ThresholdMethod::max_entropy:
    return apply_threshold(img, max_entropy_threshold(hist),
                           Polarity::dark_is_foreground);
  case ThresholdMethod::yen:
    return apply_threshold(img, yen_threshold(hist), Polarity::dark_is_foreground);
  }
  throw InvalidInput{"segment_with: unknown method"};
}

}  // namespace wbcq

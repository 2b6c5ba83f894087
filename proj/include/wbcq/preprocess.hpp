#pragma once

#include <wbcq/components.hpp>
#include <wbcq/filters.hpp>
#include <wbcq/morphology.hpp>

namespace wbcq {

struct BubbleParams
{
  int min_intensity = 250;
  std::size_t min_area = 2000;
};

/// Air bubbles show up as large near-saturated blobs.
inline BinaryMask detect_bubbles(const GrayImage& img,
                                 const BubbleParams& p = {})
{
  if (img.empty())
    throw InvalidInput{"detect_bubbles: empty image"};
  if (p.min_intensity < 1 || p.min_intensity > 255)
    throw InvalidInput{"detect_bubbles: min_intensity must lie in [1, 255]"};
  const auto bright =
      apply_threshold(img, p.min_intensity - 1, Polarity::bright_is_foreground);
  return remove_small(bright, p.min_area, 8);
}

/// Replaces bubble pixels by the global mean intensity.
inline GrayImage correct_artifacts(const GrayImage& img,
                                   const BubbleParams& p = {})
{
  return fill_artifacts(img, detect_bubbles(img, p), global_mean(img));
}

}  // namespace wbcq

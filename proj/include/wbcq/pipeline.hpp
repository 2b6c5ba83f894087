#pragma once

#include <wbcq/components.hpp>
#include <wbcq/edge_roi.hpp>
#include <wbcq/preprocess.hpp>
#include <wbcq/quantify.hpp>
#include <wbcq/threshold.hpp>

#include <string>
#include <vector>

namespace wbcq {

struct PipelineConfig
{
  BubbleParams bubbles;
  LiOtsuConfig li_otsu;
  int segment_block = 400;
  EdgeDetectorParams edge;
  int roi_block = 200;
  RoiScoring roi;
  QuantConfig quant;

  void validate() const
  {
    li_otsu.validate();
    edge.validate();
    quant.validate();
    if (segment_block < 64)
      throw InvalidInput{"segment block size must be >= 64"};
    if (roi_block < 1)
      throw InvalidInput{"ROI block size must be >= 1"};
    if (bubbles.min_intensity < 1 || bubbles.min_intensity > 255)
      throw InvalidInput{"bubble intensity must lie in [1, 255]"};
  }
};

struct PipelineResult
{
  QuantReport report;
  BinaryMask segmentation;
  EdgeResult edge;
  RoiGrid roi;
};

/// pre-process -> LI Otsu segmentation -> muscle edge -> ROI -> quantify.
inline PipelineResult analyze_image(const GrayImage& img, std::string image_id,
                                    const PipelineConfig& cfg = {})
{
  cfg.validate();
  if (img.empty())
    throw InvalidInput{"analyze_image: empty image"};
  const auto corrected = correct_artifacts(img, cfg.bubbles);

  PipelineResult out;
  auto seg = segment_image(corrected, cfg.li_otsu, cfg.segment_block);
  auto objects = connected_components(seg.mask, 8);

  if (img.width() >= 400 && img.height() >= 400) {
    out.edge = merge_detectors(corrected, cfg.edge);
  }
  else {
    // Too small for the texture detector; treat as edge-free.
    out.edge.empty_space = BinaryMask{img.width(), img.height()};
    out.edge.muscle_edge = BinaryMask{img.width(), img.height()};
    out.edge.agreement = BinaryMask{img.width(), img.height()};
  }

  auto effective = exclude_near_edge(std::move(objects), out.edge,
                                     cfg.edge.edge_exclusion_d);
  std::erase_if(effective, [&](const Component& c) {
    return c.area < cfg.quant.min_cell_area;
  });
  out.roi = score_blocks(img.width(), img.height(), out.edge, effective,
                         cfg.roi_block, cfg.edge.edge_exclusion_d, cfg.roi);
  const auto cells = classify_objects(effective, cfg.quant);
  out.report = assemble_report(std::move(image_id), cells, out.roi, img.width(),
                               img.height(), seg.blocks, cfg.quant);
  out.segmentation = std::move(seg.mask);
  return out;
}

}  // namespace wbcq

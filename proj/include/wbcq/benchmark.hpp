#pragma once

#include <wbcq/components.hpp>
#include <wbcq/synth.hpp>
#include <wbcq/threshold.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

namespace wbcq {

struct BenchmarkParams
{
  LiOtsuConfig li_otsu;
  int block_size = 400;
  double match_radius = 15.0;
  std::size_t debris_area = 25;
};

struct Detection
{
  double x = 0.0;
  double y = 0.0;
  std::size_t area = 0;
};

struct Detections
{
  std::vector<Detection> objects;  // at or above the debris floor
  std::size_t debris = 0;
};

inline Detections detect_objects(const GrayImage& img, ThresholdMethod method,
                                 const BenchmarkParams& p)
{
  Detections d;
  for (const auto& c : connected_components(
           segment_with(img, method, p.li_otsu, p.block_size), 8)) {
    if (c.area < p.debris_area)
      ++d.debris;
    else
      d.objects.push_back({c.cx, c.cy, c.area});
  }
  return d;
}

struct TruthPoint
{
  double x = 0.0;
  double y = 0.0;
};

/// One truth object per discrete cell and one per cluster (at the mean of
/// its member centres).
inline std::vector<TruthPoint> truth_points(const GroundTruth& gt)
{
  std::vector<TruthPoint> pts;
  for (const auto& c : gt.cells)
    if (c.cluster < 0)
      pts.push_back({c.x, c.y});
  for (const auto& c : gt.clusters)
    pts.push_back({c.x, c.y});
  return pts;
}

/// Greedy one-to-one matching by increasing centroid distance, within
/// `radius`. Returns the number of matched pairs.
inline std::size_t match_count(const std::vector<Detection>& dets,
                               const std::vector<TruthPoint>& truth, double radius)
{
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < dets.size(); ++i)
    for (std::size_t j = 0; j < truth.size(); ++j) {
      const double d = std::hypot(dets[i].x - truth[j].x, dets[i].y - truth[j].y);
      if (d <= radius)
        pairs.emplace_back(d, i, j);
    }
  std::sort(pairs.begin(), pairs.end());
  std::vector<std::uint8_t> used_det(dets.size()), used_truth(truth.size());
  std::size_t matched = 0;
  for (const auto& [d, i, j] : pairs) {
    if (used_det[i] || used_truth[j])
      continue;
    used_det[i] = used_truth[j] = 1;
    ++matched;
  }
  return matched;
}

struct BenchmarkRow
{
  std::string method;
  std::size_t false_positive = 0;
  std::size_t false_negative = 0;
  std::size_t debris = 0;
  std::size_t total_count = 0;
  std::size_t matched = 0;
  bool empty_space_resistant = true;
  double accuracy = 0.0;  // matched / (matched + FP + FN)
};

struct BenchmarkSample
{
  std::string id;
  GrayImage image;
  GroundTruth truth;
};

inline void accumulate(BenchmarkRow& row, const Detections& d,
                       const std::vector<TruthPoint>& truth, bool void_only,
                       double radius)
{
  const auto m = match_count(d.objects, truth, radius);
  row.matched += m;
  row.false_positive += d.objects.size() - m;
  row.false_negative += truth.size() - m;
  row.debris += d.debris;
  row.total_count += d.objects.size();
  if (void_only && !d.objects.empty())
    row.empty_space_resistant = false;
}

inline void finish(BenchmarkRow& row)
{
  const auto denom = row.matched + row.false_positive + row.false_negative;
  row.accuracy = denom == 0 ? 1.0 : static_cast<double>(row.matched) / denom;
}

inline std::vector<BenchmarkRow> run_benchmark(const std::vector<BenchmarkSample>& corpus,
                                               const std::vector<ThresholdMethod>& methods,
                                               const BenchmarkParams& p = {})
{
  std::vector<BenchmarkRow> rows;
  for (auto m : methods) {
    BenchmarkRow row;
    row.method = std::string{method_name(m)};
    for (const auto& s : corpus)
      accumulate(row, detect_objects(s.image, m, p), truth_points(s.truth),
                 s.truth.void_only, p.match_radius);
    finish(row);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace wbcq

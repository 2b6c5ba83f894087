#pragma once

#include <wbcq/image.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wbcq {

class GenerationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class VoidKind { none, half_plane, corner_wedge, full };

inline std::string_view void_kind_name(VoidKind k)
{
  switch (k) {
  case VoidKind::none:
    return "none";
  case VoidKind::half_plane:
    return "half_plane";
  case VoidKind::corner_wedge:
    return "corner_wedge";
  case VoidKind::full:
    return "full";
  }
  return "none";
}

inline VoidKind parse_void_kind(std::string_view s)
{
  for (auto k : {VoidKind::none, VoidKind::half_plane, VoidKind::corner_wedge,
                 VoidKind::full})
    if (void_kind_name(k) == s)
      return k;
  throw InvalidInput{"unknown void kind: " + std::string{s}};
}

/// Parameters of one synthetic muscle section.
struct SynthSpec
{
  int width = 1600;
  int height = 1200;
  int n_discrete = 50;
  std::vector<int> clusters;  // cells per cluster
  double radius_min = 12.0;
  double radius_max = 13.0;
  double cell_intensity = 60.0;
  double background = 180.0;
  double stripe_amplitude = 15.0;
  double stripe_period = 40.0;
  double stripe_angle_deg = 0.0;
  VoidKind void_kind = VoidKind::none;
  // Half-plane: void is x < void_fraction * width. Wedge: the top-left
  // triangle with legs void_fraction * width and void_fraction * height.
  double void_fraction = 0.4;
  double void_intensity = 230.0;
  double edge_band_width = 30.0;
  double edge_band_intensity = 90.0;
  double noise_sigma = 0.0;
  // Multiplicative exposure ramp: 1 + illumination * (x / width - 1/2).
  double illumination = 0.0;
  double min_gap = 10.0;
  // Centre spacing of neighbouring cluster cells, in diameters.
  double cluster_spacing = 0.92;
  std::uint64_t seed = 1;

  void validate() const
  {
    if (width < 1 || height < 1)
      throw InvalidInput{"SynthSpec: image dimensions must be positive"};
    if (n_discrete < 0)
      throw InvalidInput{"SynthSpec: n_discrete must be >= 0"};
    for (int k : clusters)
      if (k < 2)
        throw InvalidInput{"SynthSpec: a cluster needs at least 2 cells"};
    if (!(radius_min > 0) || radius_max < radius_min)
      throw InvalidInput{"SynthSpec: invalid radius range"};
    if (!(stripe_period > 0) || noise_sigma < 0 || min_gap < 0)
      throw InvalidInput{"SynthSpec: invalid texture or noise parameter"};
    if (!(void_fraction > 0 && void_fraction < 1))
      throw InvalidInput{"SynthSpec: void_fraction must lie in (0, 1)"};
    if (!(cluster_spacing > 0.5 && cluster_spacing <= 1.0))
      throw InvalidInput{"SynthSpec: cluster_spacing must lie in (0.5, 1]"};
    if (edge_band_width < 0)
      throw InvalidInput{"SynthSpec: edge_band_width must be >= 0"};
  }
};

struct PlantedCell
{
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;
  int cluster = -1;  // index into GroundTruth::clusters, -1 when discrete
};

struct PlantedCluster
{
  int cells = 0;
  double x = 0.0;  // mean of member centres
  double y = 0.0;
};

struct GroundTruth
{
  std::vector<PlantedCell> cells;
  std::vector<PlantedCluster> clusters;
  VoidKind void_kind = VoidKind::none;
  bool void_only = false;
  int n_discrete = 0;
  int n_clusters = 0;
  int n_cells_in_clusters = 0;
  int n_total = 0;
};

struct SynthImage
{
  GrayImage image;
  GrayImage clean;  // before noise
  BinaryMask void_mask;
  GroundTruth truth;
};

/// Signed distance from (x, y) to the void boundary, positive on the tissue
/// side. Infinite when there is no boundary.
inline double tissue_distance(const SynthSpec& s, double x, double y)
{
  switch (s.void_kind) {
  case VoidKind::none:
    return std::numeric_limits<double>::infinity();
  case VoidKind::full:
    return -std::numeric_limits<double>::infinity();
  case VoidKind::half_plane:
    return x - s.void_fraction * s.width;
  case VoidKind::corner_wedge: {
    const double a = s.void_fraction * s.width, b = s.void_fraction * s.height;
    return (x / a + y / b - 1.0) / std::sqrt(1.0 / (a * a) + 1.0 / (b * b));
  }
  }
  return 0.0;
}

namespace detail {

inline double disk_coverage(double cx, double cy, double r, int px, int py)
{
  const double dx = px - cx, dy = py - cy;
  const double d = std::sqrt(dx * dx + dy * dy);
  if (d <= r - 0.75)
    return 1.0;
  if (d >= r + 0.75)
    return 0.0;
  int inside = 0;
  for (int sy = 0; sy < 4; ++sy)
    for (int sx = 0; sx < 4; ++sx) {
      const double ux = px - 0.375 + 0.25 * sx - cx;
      const double uy = py - 0.375 + 0.25 * sy - cy;
      inside += ux * ux + uy * uy <= r * r;
    }
  return inside / 16.0;
}

}  // namespace detail

/// Renders a synthetic section and its ground truth. Deterministic in
/// `spec.seed`.
inline SynthImage generate(const SynthSpec& spec)
{
  spec.validate();
  std::mt19937_64 rng{spec.seed};
  std::uniform_real_distribution<double> unit{0.0, 1.0};
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  SynthImage out;
  auto& truth = out.truth;
  truth.void_kind = spec.void_kind;

  const int total_objects = spec.n_discrete + static_cast<int>(spec.clusters.size());
  if (spec.void_kind == VoidKind::full && total_objects > 0)
    throw GenerationError{"cannot plant cells in a void-only image"};

  std::vector<PlantedCell> placed;
  auto fits = [&](const std::vector<PlantedCell>& group) {
    for (const auto& c : group) {
      if (c.x - c.r < 2 || c.y - c.r < 2 || c.x + c.r > spec.width - 3 ||
          c.y + c.r > spec.height - 3)
        return false;
      if (tissue_distance(spec, c.x, c.y) < spec.edge_band_width + c.r + spec.min_gap)
        return false;
      for (const auto& o : placed) {
        const double d = std::hypot(c.x - o.x, c.y - o.y);
        if (d < c.r + o.r + spec.min_gap)
          return false;
      }
    }
    return true;
  };

  constexpr int max_attempts = 20000;
  auto place_group = [&](int k, int cluster_id) {
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
      const double r = uniform(spec.radius_min, spec.radius_max);
      std::vector<PlantedCell> group;
      group.push_back({uniform(r, spec.width - r), uniform(r, spec.height - r), r,
                       cluster_id});
      const double spacing = 2.0 * r * spec.cluster_spacing;
      int tries = 0;
      while (static_cast<int>(group.size()) < k && tries < 500) {
        ++tries;
        const auto& anchor = group[static_cast<std::size_t>(unit(rng) * group.size())];
        const double a = uniform(0.0, 2.0 * std::numbers::pi);
        PlantedCell c{anchor.x + spacing * std::cos(a), anchor.y + spacing * std::sin(a),
                      r, cluster_id};
        bool ok = true;
        for (const auto& g : group)
          if (std::hypot(c.x - g.x, c.y - g.y) < spacing - 0.5)
            ok = false;
        if (ok)
          group.push_back(c);
      }
      if (static_cast<int>(group.size()) == k && fits(group)) {
        placed.insert(placed.end(), group.begin(), group.end());
        return;
      }
    }
    throw GenerationError{"overfull spec: could not place all objects"};
  };

  for (std::size_t i = 0; i < spec.clusters.size(); ++i)
    place_group(spec.clusters[i], static_cast<int>(i));
  for (int i = 0; i < spec.n_discrete; ++i)
    place_group(1, -1);

  truth.cells = placed;
  truth.clusters.resize(spec.clusters.size());
  for (const auto& c : placed) {
    if (c.cluster < 0)
      continue;
    auto& pc = truth.clusters[c.cluster];
    ++pc.cells;
    pc.x += c.x;
    pc.y += c.y;
  }
  for (auto& pc : truth.clusters) {
    pc.x /= pc.cells;
    pc.y /= pc.cells;
  }
  truth.n_discrete = spec.n_discrete;
  truth.n_clusters = static_cast<int>(spec.clusters.size());
  for (int k : spec.clusters)
    truth.n_cells_in_clusters += k;
  truth.n_total = truth.n_discrete + truth.n_cells_in_clusters;
  truth.void_only = total_objects == 0 &&
                    (spec.void_kind == VoidKind::full || spec.stripe_amplitude == 0.0);

  // Rendering.
  const int w = spec.width, h = spec.height;
  RealImage canvas{w, h};
  out.void_mask = BinaryMask{w, h};
  const double theta = spec.stripe_angle_deg * std::numbers::pi / 180.0;
  const double kx = std::cos(theta) * 2.0 * std::numbers::pi / spec.stripe_period;
  const double ky = std::sin(theta) * 2.0 * std::numbers::pi / spec.stripe_period;
  auto exposure = [&](int x) { return 1.0 + spec.illumination * ((x + 0.5) / w - 0.5); };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double dist = tissue_distance(spec, x, y);
      double v;
      if (dist < 0) {
        v = spec.void_intensity;
        out.void_mask(x, y) = 1;
      }
      else if (dist < spec.edge_band_width) {
        v = spec.edge_band_intensity;
      }
      else {
        v = spec.background + spec.stripe_amplitude * std::sin(kx * x + ky * y);
      }
      canvas(x, y) = v * exposure(x);
    }

  Raster<double> coverage{w, h, 0.0};
  for (const auto& c : placed) {
    const int x0 = std::max(0, static_cast<int>(std::floor(c.x - c.r - 1)));
    const int x1 = std::min(w - 1, static_cast<int>(std::ceil(c.x + c.r + 1)));
    const int y0 = std::max(0, static_cast<int>(std::floor(c.y - c.r - 1)));
    const int y1 = std::min(h - 1, static_cast<int>(std::ceil(c.y + c.r + 1)));
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x)
        coverage(x, y) = std::max(coverage(x, y), detail::disk_coverage(c.x, c.y, c.r, x, y));
  }

  out.clean = GrayImage{w, h};
  out.image = GrayImage{w, h};
  std::normal_distribution<double> noise{0.0, spec.noise_sigma > 0 ? spec.noise_sigma : 1.0};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double a = coverage(x, y);
      const double v = canvas(x, y) * (1.0 - a) + spec.cell_intensity * exposure(x) * a;
      out.clean(x, y) = to_intensity(v);
      out.image(x, y) = spec.noise_sigma > 0 ? to_intensity(v + noise(rng)) : out.clean(x, y);
    }
  return out;
}

}  // namespace wbcq

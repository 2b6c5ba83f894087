#pragma once

#include <wbcq/image.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace wbcq {

namespace detail {

class DisjointSets
{
public:
  int make_set()
  {
    parent_.push_back(static_cast<int>(parent_.size()));
    return parent_.back();
  }

  int find(int i)
  {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  void join(int a, int b)
  {
    a = find(a);
    b = find(b);
    if (a == b)
      return;
    // Smaller root wins so that labels stay in raster order.
    if (a < b)
      parent_[b] = a;
    else
      parent_[a] = b;
  }

  std::size_t size() const noexcept { return parent_.size(); }

private:
  std::vector<int> parent_;
};

}  // namespace detail

/// Two-pass union-find labeling. Returns a label raster where 0 is
/// background and provisional labels have been resolved to their roots
/// (not yet dense).
inline Raster<int> label_raster(const BinaryMask& mask, int connectivity)
{
  if (connectivity != 4 && connectivity != 8)
    throw InvalidInput{"connected_components: connectivity must be 4 or 8"};
  const int w = mask.width(), h = mask.height();
  Raster<int> labels{w, h, 0};
  detail::DisjointSets ds;
  ds.make_set();  // 0 = background

  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!mask(x, y))
        continue;
      int current = 0;
      auto visit = [&](int nx, int ny) {
        if (!mask.contains(nx, ny))
          return;
        const int l = labels(nx, ny);
        if (l == 0)
          return;
        if (current == 0)
          current = l;
        else
          ds.join(current, l);
      };
      visit(x - 1, y);
      visit(x, y - 1);
      if (connectivity == 8) {
        visit(x - 1, y - 1);
        visit(x + 1, y - 1);
      }
      labels(x, y) = current == 0 ? ds.make_set() : current;
    }

  for (auto& l : labels)
    if (l != 0)
      l = ds.find(l);
  return labels;
}

/// Maximal connected foreground regions, labelled densely from 1 in order
/// of (min_y, min_x) of their bounding boxes.
inline std::vector<Component> connected_components(const BinaryMask& mask,
                                                   int connectivity = 8)
{
  const auto labels = label_raster(mask, connectivity);
  const int w = mask.width(), h = mask.height();

  std::vector<int> slot;  // root label -> index into comps, -1 if unseen
  std::vector<Component> comps;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int l = labels(x, y);
      if (l == 0)
        continue;
      if (static_cast<std::size_t>(l) >= slot.size())
        slot.resize(l + 1, -1);
      if (slot[l] < 0) {
        slot[l] = static_cast<int>(comps.size());
        Component c;
        c.bbox = {x, y, x, y};
        comps.push_back(std::move(c));
      }
      auto& c = comps[slot[l]];
      c.pixels.push_back({x, y});
      c.bbox.min_x = std::min(c.bbox.min_x, x);
      c.bbox.max_x = std::max(c.bbox.max_x, x);
      c.bbox.max_y = y;
    }

  for (auto& c : comps) {
    c.area = c.pixels.size();
    double sx = 0.0, sy = 0.0;
    for (const auto& p : c.pixels) {
      sx += p.x;
      sy += p.y;
    }
    c.cx = sx / static_cast<double>(c.area);
    c.cy = sy / static_cast<double>(c.area);
  }

  std::stable_sort(comps.begin(), comps.end(),
                   [](const Component& a, const Component& b) {
                     if (a.bbox.min_y != b.bbox.min_y)
                       return a.bbox.min_y < b.bbox.min_y;
                     return a.bbox.min_x < b.bbox.min_x;
                   });
  for (std::size_t i = 0; i < comps.size(); ++i)
    comps[i].label = static_cast<int>(i) + 1;
  return comps;
}

/// Renders components back into a mask of the given size.
inline BinaryMask render(const std::vector<Component>& comps, int width,
                         int height)
{
  BinaryMask out{width, height};
  for (const auto& c : comps)
    for (const auto& p : c.pixels)
      out(p.x, p.y) = 1;
  return out;
}

/// Drops components with fewer than `min_area` pixels.
inline BinaryMask remove_small(const BinaryMask& mask, std::size_t min_area,
                               int connectivity = 8)
{
  auto comps = connected_components(mask, connectivity);
  std::erase_if(comps, [&](const Component& c) { return c.area < min_area; });
  return render(comps, mask.width(), mask.height());
}

/// Number of components with at least `min_area` pixels, without
/// materializing pixel lists.
inline std::size_t count_components(const BinaryMask& mask,
                                    std::size_t min_area, int connectivity = 8)
{
  const auto labels = label_raster(mask, connectivity);
  std::vector<std::size_t> area;
  for (const int l : labels) {
    if (l == 0)
      continue;
    if (static_cast<std::size_t>(l) >= area.size())
      area.resize(l + 1, 0);
    ++area[l];
  }
  return static_cast<std::size_t>(std::count_if(
      area.begin(), area.end(),
      [&](std::size_t a) { return a > 0 && a >= min_area; }));
}

}  // namespace wbcq

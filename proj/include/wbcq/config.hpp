#pragma once

#include <wbcq/pipeline.hpp>
#include <wbcq/synth.hpp>

#include <charconv>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wbcq {

class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

namespace detail {

inline std::string_view trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text)
{
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ConfigError{"invalid value for " + std::string{key} + ": '" +
                      std::string{text} + "'"};
  return v;
}

inline bool parse_bool(std::string_view key, std::string_view text)
{
  if (text == "1" || text == "true" || text == "yes" || text == "on")
    return true;
  if (text == "0" || text == "false" || text == "no" || text == "off")
    return false;
  throw ConfigError{"invalid boolean for " + std::string{key}};
}

using Setter = std::function<void(std::string_view key, std::string_view value)>;

template <typename T>
Setter number(T& field)
{
  return [&field](std::string_view k, std::string_view v) {
    field = parse_number<T>(k, v);
  };
}

inline Setter boolean(bool& field)
{
  return [&field](std::string_view k, std::string_view v) { field = parse_bool(k, v); };
}

inline void apply(const std::map<std::string, Setter, std::less<>>& setters,
                  const KeyValues& kv)
{
  for (const auto& [k, v] : kv) {
    const auto it = setters.find(k);
    if (it == setters.end())
      throw ConfigError{"unknown configuration key: " + k};
    it->second(k, v);
  }
}

}  // namespace detail

/// Flat `key = value` text, one pair per line, `#` starts a comment.
inline KeyValues parse_key_values(std::string_view text)
{
  KeyValues kv;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError{"line " + std::to_string(line_no) + ": expected key = value"};
    const auto key = detail::trim(line.substr(0, eq));
    if (key.empty())
      throw ConfigError{"line " + std::to_string(line_no) + ": empty key"};
    kv.emplace_back(std::string{key}, std::string{detail::trim(line.substr(eq + 1))});
  }
  return kv;
}

inline void apply_pipeline_options(PipelineConfig& c, const KeyValues& kv)
{
  using namespace detail;
  auto& e = c.edge;
  const std::map<std::string, Setter, std::less<>> setters{
      {"foreground_ratio", number(c.li_otsu.foreground_ratio)},
      {"max_objects", number(c.li_otsu.max_objects)},
      {"step", number(c.li_otsu.step)},
      {"t_floor", number(c.li_otsu.t_floor)},
      {"max_iters", number(c.li_otsu.max_iters)},
      {"min_object_area", number(c.li_otsu.min_object_area)},
      {"segment_block", number(c.segment_block)},
      {"roi_block", number(c.roi_block)},
      {"bubble_min_intensity", number(c.bubbles.min_intensity)},
      {"bubble_min_area", number(c.bubbles.min_area)},
      {"avg_kernel", number(e.avg_kernel)},
      {"gauss_sigma", number(e.gauss_sigma)},
      {"sharpen_sigma", number(e.sharpen_sigma)},
      {"sharpen_gain", number(e.sharpen_gain)},
      {"k1", number(e.k1)},
      {"corner_window", number(e.corner_window)},
      {"min_area_texture", number(e.min_area_texture)},
      {"min_area_final", number(e.min_area_final)},
      {"edge_exclusion_d", number(e.edge_exclusion_d)},
      {"se_radius", number(e.se.radius)},
      {"se_shape",
       [&e](std::string_view k, std::string_view v) {
         if (v == "square")
           e.se.shape = SeShape::square;
         else if (v == "disk")
           e.se.shape = SeShape::disk;
         else
           throw ConfigError{"invalid value for " + std::string{k}};
       }},
      {"morph_order",
       [&e](std::string_view k, std::string_view v) {
         if (v == "erode_dilate")
           e.morph_order = MorphOrder::erode_dilate;
         else if (v == "dilate_erode")
           e.morph_order = MorphOrder::dilate_erode;
         else
           throw ConfigError{"invalid value for " + std::string{k}};
       }},
      {"merge_mode",
       [&e](std::string_view k, std::string_view v) {
         if (v == "union")
           e.merge_mode = MergeMode::union_;
         else if (v == "intersection")
           e.merge_mode = MergeMode::intersection;
         else
           throw ConfigError{"invalid value for " + std::string{k}};
       }},
      {"strict_corners", boolean(e.strict_corners)},
      {"canny_low", number(e.canny.low)},
      {"canny_high", number(e.canny.high)},
      {"canny_sigma", number(e.canny.sigma)},
      {"roi_w_corner", number(c.roi.w_corner)},
      {"roi_w_void", number(c.roi.w_void)},
      {"roi_w_objects", number(c.roi.w_objects)},
      {"roi_objects_saturation", number(c.roi.objects_saturation)},
      {"roi_admit", number(c.roi.admit)},
      {"roi_max_void", number(c.roi.max_void)},
      {"avg_cell_size", number(c.quant.avg_cell_size)},
      {"cluster_factor", number(c.quant.cluster_factor)},
      {"min_cell_area", number(c.quant.min_cell_area)},
      {"analysis_block", number(c.quant.analysis_block)},
      {"bin_width", number(c.quant.bin_width)},
      {"roi_coverage", number(c.quant.roi_coverage)},
  };
  apply(setters, kv);
  try {
    c.validate();
  }
  catch (const InvalidInput& ex) {
    throw ConfigError{ex.what()};
  }
}

/// Synthesis request: one spec plus how many images to render from it.
struct SynthRequest
{
  SynthSpec spec;
  int images = 1;
  std::string name = "synth";
};

inline std::vector<int> parse_int_list(std::string_view key, std::string_view text)
{
  std::vector<int> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = detail::trim(text.substr(0, comma));
    if (!item.empty())
      out.push_back(detail::parse_number<int>(key, item));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
  }
  return out;
}

inline SynthRequest parse_synth_request(const KeyValues& kv)
{
  using namespace detail;
  SynthRequest r;
  auto& s = r.spec;
  const std::map<std::string, Setter, std::less<>> setters{
      {"width", number(s.width)},
      {"height", number(s.height)},
      {"n_discrete", number(s.n_discrete)},
      {"clusters",
       [&s](std::string_view k, std::string_view v) { s.clusters = parse_int_list(k, v); }},
      {"radius_min", number(s.radius_min)},
      {"radius_max", number(s.radius_max)},
      {"cell_intensity", number(s.cell_intensity)},
      {"background", number(s.background)},
      {"stripe_amplitude", number(s.stripe_amplitude)},
      {"stripe_period", number(s.stripe_period)},
      {"stripe_angle_deg", number(s.stripe_angle_deg)},
      {"void",
       [&s](std::string_view, std::string_view v) {
         try {
           s.void_kind = parse_void_kind(v);
         }
         catch (const InvalidInput& ex) {
           throw ConfigError{ex.what()};
         }
       }},
      {"void_fraction", number(s.void_fraction)},
      {"void_intensity", number(s.void_intensity)},
      {"edge_band_width", number(s.edge_band_width)},
      {"edge_band_intensity", number(s.edge_band_intensity)},
      {"noise_sigma", number(s.noise_sigma)},
      {"illumination", number(s.illumination)},
      {"min_gap", number(s.min_gap)},
      {"cluster_spacing", number(s.cluster_spacing)},
      {"seed", number(s.seed)},
      {"images", number(r.images)},
      {"name", [&r](std::string_view, std::string_view v) { r.name = std::string{v}; }},
  };
  apply(setters, kv);
  if (r.images < 1)
    throw ConfigError{"images must be >= 1"};
  try {
    s.validate();
  }
  catch (const InvalidInput& ex) {
    throw ConfigError{ex.what()};
  }
  return r;
}

}  // namespace wbcq

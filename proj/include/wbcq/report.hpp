#pragma once

#include <wbcq/benchmark.hpp>
#include <wbcq/quantify.hpp>
#include <wbcq/synth.hpp>

#include <json.hpp>

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace wbcq {

using Json = nlohmann::ordered_json;

inline constexpr int report_schema_version = 1;

inline Json to_json(const ThresholdOutcome& o)
{
  return Json{{"t", o.t},
              {"iterations", o.iterations},
              {"foreground_ratio", o.foreground_ratio},
              {"object_count", o.object_count},
              {"converged", o.converged}};
}

inline Json to_json(const BlockHistogram& h)
{
  return Json{{"bin_width", h.bin_width},
              {"bin_edges", h.labels},
              {"counts", h.counts},
              {"log_values", h.log_values}};
}

inline Json to_json(const QuantReport& r)
{
  Json blocks = Json::array();
  for (const auto& b : r.block_thresholds) {
    Json j = to_json(b.outcome);
    j["x"] = b.region.x;
    j["y"] = b.region.y;
    j["width"] = b.region.width;
    j["height"] = b.region.height;
    blocks.push_back(std::move(j));
  }
  return Json{{"schema", report_schema_version},
              {"image_id", r.image_id},
              {"n_discrete", r.n_discrete},
              {"n_clusters", r.n_clusters},
              {"mean_discrete_size", r.mean_discrete_size},
              {"total_cluster_area", r.total_cluster_area},
              {"n_cells_in_clusters", r.n_cells_in_clusters},
              {"n_total", r.n_total},
              {"per_block_counts", r.per_block_counts},
              {"histogram", to_json(r.histogram)},
              {"converged_blocks", r.converged_blocks},
              {"block_thresholds", std::move(blocks)}};
}

namespace detail {

inline std::string fixed2(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace detail

inline std::string csv_header(int bin_width = 20)
{
  std::string s = "image_id,n_discrete,n_clusters,mean_discrete_size,"
                  "n_cells_in_clusters,n_total";
  for (const auto& l : histogram_labels(bin_width))
    s += ",bin_" + l;
  return s;
}

inline std::string csv_row(const QuantReport& r)
{
  std::ostringstream os;
  os << r.image_id << ',' << r.n_discrete << ',' << r.n_clusters << ','
     << detail::fixed2(r.mean_discrete_size) << ','
     << detail::fixed2(r.n_cells_in_clusters) << ',' << detail::fixed2(r.n_total);
  for (auto c : r.histogram.counts)
    os << ',' << c;
  return os.str();
}

inline Json to_json(const GroundTruth& gt)
{
  Json cells = Json::array();
  for (const auto& c : gt.cells)
    cells.push_back({{"x", c.x}, {"y", c.y}, {"r", c.r}, {"cluster", c.cluster}});
  Json clusters = Json::array();
  for (const auto& c : gt.clusters)
    clusters.push_back({{"cells", c.cells}, {"x", c.x}, {"y", c.y}});
  return Json{{"schema", report_schema_version},
              {"void_kind", void_kind_name(gt.void_kind)},
              {"void_only", gt.void_only},
              {"n_discrete", gt.n_discrete},
              {"n_clusters", gt.n_clusters},
              {"n_cells_in_clusters", gt.n_cells_in_clusters},
              {"n_total", gt.n_total},
              {"cells", std::move(cells)},
              {"clusters", std::move(clusters)}};
}

inline GroundTruth ground_truth_from_json(const Json& j)
{
  GroundTruth gt;
  gt.void_kind = parse_void_kind(j.at("void_kind").get<std::string>());
  gt.void_only = j.at("void_only").get<bool>();
  gt.n_discrete = j.at("n_discrete").get<int>();
  gt.n_clusters = j.at("n_clusters").get<int>();
  gt.n_cells_in_clusters = j.at("n_cells_in_clusters").get<int>();
  gt.n_total = j.at("n_total").get<int>();
  for (const auto& c : j.at("cells"))
    gt.cells.push_back({c.at("x").get<double>(), c.at("y").get<double>(),
                        c.at("r").get<double>(), c.at("cluster").get<int>()});
  for (const auto& c : j.at("clusters"))
    gt.clusters.push_back(
        {c.at("cells").get<int>(), c.at("x").get<double>(), c.at("y").get<double>()});
  return gt;
}

inline std::string benchmark_csv(const std::vector<BenchmarkRow>& rows)
{
  std::ostringstream os;
  os << "method,false_positive,false_negative,debris,total_count,"
        "empty_space_resistant,accuracy\n";
  char acc[32];
  for (const auto& r : rows) {
    std::snprintf(acc, sizeof acc, "%.4f", r.accuracy);
    os << r.method << ',' << r.false_positive << ',' << r.false_negative << ','
       << r.debris << ',' << r.total_count << ','
       << (r.empty_space_resistant ? "yes" : "no") << ',' << acc << '\n';
  }
  return os.str();
}

inline std::string benchmark_table(const std::vector<BenchmarkRow>& rows)
{
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %8s %8s %8s %8s %10s %9s\n", "method", "FP",
                "FN", "debris", "total", "empty-res", "accuracy");
  os << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-12s %8zu %8zu %8zu %8zu %10s %8.2f%%\n",
                  r.method.c_str(), r.false_positive, r.false_negative, r.debris,
                  r.total_count, r.empty_space_resistant ? "yes" : "no",
                  100.0 * r.accuracy);
    os << line;
  }
  return os.str();
}

}  // namespace wbcq

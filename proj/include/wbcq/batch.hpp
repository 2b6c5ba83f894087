#pragma once

// Batch runners behind the command-line tool: directory analysis, synthetic
// corpus generation and method benchmarking. Needs libpng, libtiff and
// threads.

#include <wbcq/benchmark.hpp>
#include <wbcq/config.hpp>
#include <wbcq/io.hpp>
#include <wbcq/pipeline.hpp>
#include <wbcq/report.hpp>
#include <wbcq/synth.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <thread>
#include <vector>

namespace wbcq {

namespace fs = std::filesystem;

enum ExitCode : int { exit_ok = 0, exit_partial = 1, exit_config = 2 };

struct RunConfig
{
  std::vector<fs::path> inputs;
  fs::path out_dir;
  PipelineConfig pipeline;
  bool debug_masks = false;
  unsigned workers = 0;  // 0 picks the hardware concurrency
};

inline bool is_image_path(const fs::path& p)
{
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".tif" || ext == ".tiff";
}

/// Image files directly inside `dir`, sorted by path.
inline std::vector<fs::path> list_images(const fs::path& dir)
{
  if (!fs::is_directory(dir))
    throw ConfigError{"not a directory: " + dir.string()};
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator{dir})
    if (e.is_regular_file() && is_image_path(e.path()))
      out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

/// Image ids are file stems, or full file names when two inputs share a stem.
inline std::vector<std::string> image_ids(const std::vector<fs::path>& paths)
{
  std::map<std::string, int> seen;
  for (const auto& p : paths)
    ++seen[p.stem().string()];
  std::vector<std::string> ids;
  for (const auto& p : paths)
    ids.push_back(seen[p.stem().string()] > 1 ? p.filename().string() : p.stem().string());
  return ids;
}

/// Runs `fn(i)` for i in [0, n) on a pool of `workers` threads.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn)
{
  if (workers == 0)
    workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++)
        fn(i);
    });
}

inline std::string roi_matrix(const RoiGrid& roi)
{
  std::string s;
  for (int r = 0; r < roi.rows; ++r) {
    for (int c = 0; c < roi.cols; ++c) {
      if (c)
        s += ' ';
      s += roi.in_roi[static_cast<std::size_t>(r * roi.cols + c)] ? '1' : '0';
    }
    s += '\n';
  }
  return s;
}

struct ImageOutcome
{
  fs::path path;
  std::string image_id;
  bool ok = false;
  std::string error;
  QuantReport report;
};

struct BatchResult
{
  std::vector<ImageOutcome> images;  // in input order
  int exit_code = exit_ok;
};

inline void write_debug_masks(const fs::path& dir, const std::string& id,
                              const PipelineResult& r)
{
  fs::create_directories(dir);
  const auto mask = [&](const std::string& suffix, const BinaryMask& m) {
    write_atomically(dir / (id + suffix),
                     [&](const fs::path& tmp) { write_mask_png(tmp, m); });
  };
  mask("_segmentation.png", r.segmentation);
  mask("_empty_space.png", r.edge.empty_space);
  mask("_muscle_edge.png", r.edge.muscle_edge);
  write_text_atomically(dir / (id + "_roi.txt"), roi_matrix(r.roi));
}

/// Analyzes every input, writing `<id>.json` per image and `counts.csv` for
/// the batch. Failed images are reported in `failures.txt` and excluded
/// from the CSV.
inline BatchResult run_analyze(const RunConfig& cfg)
{
  try {
    cfg.pipeline.validate();
  }
  catch (const InvalidInput& e) {
    throw ConfigError{e.what()};
  }
  fs::create_directories(cfg.out_dir);
  const auto ids = image_ids(cfg.inputs);

  BatchResult result;
  result.images.resize(cfg.inputs.size());
  parallel_for(cfg.inputs.size(), cfg.workers, [&](std::size_t i) {
    auto& o = result.images[i];
    o.path = cfg.inputs[i];
    o.image_id = ids[i];
    try {
      const auto img = read_image(o.path);
      auto r = analyze_image(img, o.image_id, cfg.pipeline);
      write_text_atomically(cfg.out_dir / (o.image_id + ".json"),
                            to_json(r.report).dump(2) + "\n");
      if (cfg.debug_masks)
        write_debug_masks(cfg.out_dir / "debug", o.image_id, r);
      o.report = std::move(r.report);
      o.ok = true;
    }
    catch (const std::exception& e) {
      o.error = e.what();
    }
  });

  std::string csv = csv_header(cfg.pipeline.quant.bin_width) + "\n";
  std::string failures;
  for (const auto& o : result.images) {
    if (o.ok)
      csv += csv_row(o.report) + "\n";
    else
      failures += o.path.string() + ": " + o.error + "\n";
  }
  write_text_atomically(cfg.out_dir / "counts.csv", csv);
  const auto failure_file = cfg.out_dir / "failures.txt";
  if (!failures.empty()) {
    write_text_atomically(failure_file, failures);
    result.exit_code = exit_partial;
  }
  else if (fs::exists(failure_file)) {
    fs::remove(failure_file);
  }
  return result;
}

inline std::string synth_name(const SynthRequest& r, int i)
{
  if (r.images == 1)
    return r.name;
  char buf[16];
  std::snprintf(buf, sizeof buf, "_%03d", i);
  return r.name + buf;
}

/// Writes `<name>.png`, `<name>.truth.json` and `masks/<name>_void.png` for
/// each requested image; image i uses seed + i. Returns the image paths.
inline std::vector<fs::path> write_synth_corpus(const SynthRequest& req,
                                                const fs::path& out_dir)
{
  fs::create_directories(out_dir / "masks");
  std::vector<fs::path> written;
  for (int i = 0; i < req.images; ++i) {
    auto spec = req.spec;
    spec.seed = req.spec.seed + static_cast<std::uint64_t>(i);
    const auto s = generate(spec);
    const auto name = synth_name(req, i);
    const auto png = out_dir / (name + ".png");
    write_atomically(png, [&](const fs::path& tmp) { write_png(tmp, s.image); });
    write_text_atomically(out_dir / (name + ".truth.json"),
                          to_json(s.truth).dump(2) + "\n");
    write_atomically(out_dir / "masks" / (name + "_void.png"),
                     [&](const fs::path& tmp) { write_mask_png(tmp, s.void_mask); });
    written.push_back(png);
  }
  return written;
}

/// Loads every image in `dir` with its `<stem>.truth.json`. Throws
/// ConfigError when the corpus is empty or a truth file is missing.
inline std::vector<BenchmarkSample> load_corpus(const fs::path& dir)
{
  std::vector<BenchmarkSample> corpus;
  for (const auto& p : list_images(dir)) {
    const auto truth = dir / (p.stem().string() + ".truth.json");
    if (!fs::exists(truth))
      throw ConfigError{"missing ground truth for " + p.string()};
    BenchmarkSample s;
    s.id = p.stem().string();
    s.image = read_image(p);
    try {
      s.truth = ground_truth_from_json(Json::parse(read_text(truth)));
    }
    catch (const Json::exception& e) {
      throw ConfigError{truth.string() + ": " + e.what()};
    }
    corpus.push_back(std::move(s));
  }
  if (corpus.empty())
    throw ConfigError{"no images in corpus " + dir.string()};
  return corpus;
}

inline std::vector<ThresholdMethod> parse_methods(std::string_view list)
{
  std::vector<ThresholdMethod> out;
  while (!list.empty()) {
    const auto comma = list.find(',');
    const auto item = detail::trim(list.substr(0, comma));
    if (!item.empty()) {
      const auto m = parse_method(item);
      if (!m)
        throw ConfigError{"unknown method: " + std::string{item}};
      out.push_back(*m);
    }
    list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
  }
  if (out.empty())
    throw ConfigError{"no methods given"};
  return out;
}

}  // namespace wbcq

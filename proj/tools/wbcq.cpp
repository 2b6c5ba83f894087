#include <wbcq/batch.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace wbcq;

struct AnalyzeArgs
{
  std::string input;
  std::string out;
  std::string config;
  bool debug_masks = false;
  std::optional<unsigned> workers;
  std::vector<std::string> overrides;
};

struct SynthArgs
{
  std::string spec;
  std::string out;
};

struct BenchmarkArgs
{
  std::string corpus;
  std::string methods = "li_otsu,otsu,max_entropy,yen";
  std::string out;
  double match_radius = 15.0;
};

KeyValues parse_overrides(const std::vector<std::string>& items)
{
  std::string text;
  for (const auto& s : items) {
    if (s.find('=') == std::string::npos)
      throw ConfigError{"expected key=value, got '" + s + "'"};
    text += s + "\n";
  }
  return parse_key_values(text);
}

/// Builds the run configuration: file values first, then command-line
/// flags and --set overrides.
RunConfig make_run_config(const AnalyzeArgs& a)
{
  KeyValues kv;
  if (!a.config.empty()) {
    if (!fs::exists(a.config))
      throw ConfigError{"config file not found: " + a.config};
    kv = parse_key_values(read_text(a.config));
  }
  const auto cli = parse_overrides(a.overrides);
  kv.insert(kv.end(), cli.begin(), cli.end());

  std::string input, out;
  bool debug = false;
  unsigned workers = 0;
  KeyValues pipeline;
  for (const auto& [k, v] : kv) {
    if (k == "input")
      input = v;
    else if (k == "out")
      out = v;
    else if (k == "debug_masks")
      debug = detail::parse_bool(k, v);
    else if (k == "workers")
      workers = detail::parse_number<unsigned>(k, v);
    else
      pipeline.emplace_back(k, v);
  }
  if (!a.input.empty())
    input = a.input;
  if (!a.out.empty())
    out = a.out;
  if (a.debug_masks)
    debug = true;
  if (a.workers)
    workers = *a.workers;
  if (input.empty() || out.empty())
    throw ConfigError{"both --input and --out are required"};

  RunConfig cfg;
  apply_pipeline_options(cfg.pipeline, pipeline);
  cfg.inputs = list_images(input);
  cfg.out_dir = out;
  cfg.debug_masks = debug;
  cfg.workers = workers;
  return cfg;
}

int cmd_analyze(const AnalyzeArgs& a)
{
  const auto cfg = make_run_config(a);
  const auto result = run_analyze(cfg);
  std::size_t ok = 0;
  for (const auto& o : result.images) {
    if (o.ok)
      ++ok;
    else
      std::cerr << "failed: " << o.path.string() << ": " << o.error << "\n";
  }
  std::cout << ok << "/" << result.images.size() << " images analyzed, reports in "
            << cfg.out_dir.string() << "\n";
  return result.exit_code;
}

int cmd_synth(const SynthArgs& a)
{
  if (!fs::exists(a.spec))
    throw ConfigError{"spec file not found: " + a.spec};
  const auto req = parse_synth_request(parse_key_values(read_text(a.spec)));
  const auto written = write_synth_corpus(req, a.out);
  std::cout << written.size() << " images written to " << a.out << "\n";
  return exit_ok;
}

int cmd_benchmark(const BenchmarkArgs& a)
{
  const auto methods = parse_methods(a.methods);
  if (!(a.match_radius > 0))
    throw ConfigError{"match radius must be positive"};
  BenchmarkParams params;
  params.match_radius = a.match_radius;
  const auto corpus = load_corpus(a.corpus);
  const auto rows = run_benchmark(corpus, methods, params);
  fs::create_directories(a.out);
  write_text_atomically(fs::path{a.out} / "benchmark.csv", benchmark_csv(rows));
  std::cout << benchmark_table(rows);
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"White blood cell segmentation and counting for muscle sections"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "Segment and count cells in a directory of images");
  an->add_option("--input", analyze.input, "Directory of PNG/TIFF images");
  an->add_option("--out", analyze.out, "Output directory");
  an->add_option("--config", analyze.config, "key=value configuration file");
  an->add_flag("--debug-masks", analyze.debug_masks, "Write intermediate masks");
  an->add_option("--workers", analyze.workers, "Worker threads (default: all cores)");
  an->add_option("--set", analyze.overrides, "Override a configuration key (key=value)");

  SynthArgs synth;
  auto* sy = app.add_subcommand("synth", "Render synthetic images with ground truth");
  sy->add_option("--spec", synth.spec, "key=value generator spec")->required();
  sy->add_option("--out", synth.out, "Output directory")->required();

  BenchmarkArgs bench;
  auto* be = app.add_subcommand("benchmark", "Compare threshold methods on a corpus");
  be->add_option("--corpus", bench.corpus, "Directory of images and .truth.json files")
      ->required();
  be->add_option("--methods", bench.methods, "Comma-separated method list");
  be->add_option("--out", bench.out, "Output directory")->required();
  be->add_option("--match-radius", bench.match_radius, "Matching radius in pixels");

  try {
    app.parse(argc, argv);
  }
  catch (const CLI::Success& e) {
    return app.exit(e);
  }
  catch (const CLI::Error& e) {
    app.exit(e);
    return exit_config;
  }

  try {
    if (*an)
      return cmd_analyze(analyze);
    if (*sy)
      return cmd_synth(synth);
    return cmd_benchmark(bench);
  }
  catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return exit_config;
  }
  catch (const GenerationError& e) {
    std::cerr << "generation error: " << e.what() << "\n";
    return exit_config;
  }
  catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_partial;
  }
}

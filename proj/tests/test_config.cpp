#include <wbcq/batch.hpp>
#include <wbcq/config.hpp>

#include <gtest/gtest.h>

using namespace wbcq;

TEST(KeyValues, ParsesCommentsAndWhitespace)
{
  const auto kv = parse_key_values("# header\n"
                                   "  foreground_ratio = 0.2  # inline\n"
                                   "\n"
                                   "step=0.85\r\n"
                                   "name = a b\n");
  ASSERT_EQ(kv.size(), 3u);
  EXPECT_EQ(kv[0], (std::pair<std::string, std::string>{"foreground_ratio", "0.2"}));
  EXPECT_EQ(kv[1].second, "0.85");
  EXPECT_EQ(kv[2].second, "a b");
  EXPECT_TRUE(parse_key_values("").empty());
}

TEST(KeyValues, ReportsLineNumbers)
{
  try {
    parse_key_values("a = 1\nbroken\n");
    FAIL();
  }
  catch (const ConfigError& e) {
    EXPECT_NE(std::string{e.what()}.find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_key_values(" = 3"), ConfigError);
}

TEST(PipelineOptions, AppliesValues)
{
  PipelineConfig c;
  apply_pipeline_options(c, parse_key_values("foreground_ratio = 0.2\n"
                                             "max_objects = 150\n"
                                             "t_floor = 12\n"
                                             "se_shape = disk\n"
                                             "morph_order = dilate_erode\n"
                                             "merge_mode = intersection\n"
                                             "strict_corners = yes\n"
                                             "edge_exclusion_d = 150\n"
                                             "bin_width = 10\n"));
  EXPECT_DOUBLE_EQ(c.li_otsu.foreground_ratio, 0.2);
  EXPECT_EQ(c.li_otsu.max_objects, 150u);
  EXPECT_EQ(c.li_otsu.t_floor, 12);
  EXPECT_EQ(c.edge.se.shape, SeShape::disk);
  EXPECT_EQ(c.edge.morph_order, MorphOrder::dilate_erode);
  EXPECT_EQ(c.edge.merge_mode, MergeMode::intersection);
  EXPECT_TRUE(c.edge.strict_corners);
  EXPECT_EQ(c.edge.edge_exclusion_d, 150);
  EXPECT_EQ(c.quant.bin_width, 10);
}

TEST(PipelineOptions, LaterValuesWin)
{
  PipelineConfig c;
  apply_pipeline_options(c, {{"step", "0.8"}, {"step", "0.95"}});
  EXPECT_DOUBLE_EQ(c.li_otsu.step, 0.95);
}

TEST(PipelineOptions, Rejections)
{
  const std::vector<KeyValues> bad{
      {{"no_such_key", "1"}},
      {{"step", "fast"}},
      {{"step", "0.9x"}},
      {{"max_objects", "-3"}},
      {{"se_shape", "hexagon"}},
      {{"strict_corners", "maybe"}},
      {{"foreground_ratio", "1.5"}},
      {{"step", "1.0"}},
      {{"segment_block", "10"}},
      {{"bubble_min_intensity", "0"}},
      {{"roi_coverage", "2"}},
  };
  for (const auto& kv : bad) {
    PipelineConfig c;
    EXPECT_THROW(apply_pipeline_options(c, kv), ConfigError) << kv[0].first;
  }
}

TEST(SynthRequest, Parses)
{
  const auto r = parse_synth_request(parse_key_values("width = 800\n"
                                                      "height = 600\n"
                                                      "n_discrete = 7\n"
                                                      "clusters = 3, 4,5\n"
                                                      "void = corner_wedge\n"
                                                      "noise_sigma = 2.5\n"
                                                      "seed = 99\n"
                                                      "images = 4\n"
                                                      "name = run\n"));
  EXPECT_EQ(r.spec.width, 800);
  EXPECT_EQ(r.spec.n_discrete, 7);
  EXPECT_EQ(r.spec.clusters, (std::vector<int>{3, 4, 5}));
  EXPECT_EQ(r.spec.void_kind, VoidKind::corner_wedge);
  EXPECT_DOUBLE_EQ(r.spec.noise_sigma, 2.5);
  EXPECT_EQ(r.spec.seed, 99u);
  EXPECT_EQ(r.images, 4);
  EXPECT_EQ(r.name, "run");
  EXPECT_EQ(synth_name(r, 2), "run_002");
}

TEST(SynthRequest, Rejections)
{
  for (const char* text : {"void = moat", "images = 0", "clusters = 3,x", "clusters = 1",
                           "radius_min = -1", "colour = red"})
    EXPECT_THROW(parse_synth_request(parse_key_values(text)), ConfigError) << text;
}

TEST(Methods, ParseList)
{
  EXPECT_EQ(parse_methods("li_otsu, otsu,yen"),
            (std::vector<ThresholdMethod>{ThresholdMethod::li_otsu, ThresholdMethod::otsu,
                                          ThresholdMethod::yen}));
  EXPECT_THROW(parse_methods("li_otsu,triangle"), ConfigError);
}

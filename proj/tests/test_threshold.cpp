#include "support.hpp"

#include <wbcq/threshold.hpp>

#include <gtest/gtest.h>

using namespace wbcq;
namespace fx = wbcq::fixtures;
using fx::Rng;

namespace {

Histogram256 two_level(int a, int na, int b, int nb)
{
  Histogram256 h;
  h.add(static_cast<std::uint8_t>(a), na);
  h.add(static_cast<std::uint8_t>(b), nb);
  return h;
}

}  // namespace

TEST(Otsu, Examples)
{
  Histogram256 single;
  single.add(100, 500);
  EXPECT_EQ(otsu_threshold(single), 100);
  EXPECT_EQ(otsu_threshold(two_level(50, 1000, 200, 1000)), 50);
  EXPECT_THROW(otsu_threshold(Histogram256{}), InvalidInput);
}

TEST(MaxEntropy, Examples)
{
  Histogram256 single;
  single.add(37, 10);
  EXPECT_EQ(max_entropy_threshold(single), 37);
  EXPECT_EQ(max_entropy_threshold(two_level(50, 1000, 200, 1000)), 50);
  EXPECT_THROW(max_entropy_threshold(Histogram256{}), InvalidInput);
}

TEST(Yen, Examples)
{
  Histogram256 single;
  single.add(222, 3);
  EXPECT_EQ(yen_threshold(single), 222);
  const int t = yen_threshold(two_level(50, 700, 200, 300));
  EXPECT_GE(t, 50);
  EXPECT_LT(t, 200);
  EXPECT_THROW(yen_threshold(Histogram256{}), InvalidInput);
}

TEST(GlobalThresholds, MatchExhaustiveOracles)
{
  Rng rng{41};
  for (int i = 0; i < 300; ++i) {
    const auto c = fx::random_histogram(rng);
    const auto h = Histogram256::from_counts(c);
    ASSERT_EQ(otsu_threshold(h), fx::oracle_otsu(c)) << "case " << i;
    ASSERT_EQ(max_entropy_threshold(h), fx::oracle_max_entropy(c)) << "case " << i;
    ASSERT_EQ(yen_threshold(h), fx::oracle_yen(c)) << "case " << i;
  }
}

TEST(GlobalThresholds, InvariantToCountScaling)
{
  Rng rng{42};
  for (int i = 0; i < 100; ++i) {
    auto c = fx::random_histogram(rng);
    const auto h = Histogram256::from_counts(c);
    const auto k = static_cast<std::uint64_t>(fx::uniform_int(rng, 2, 7));
    for (auto& v : c)
      v *= k;
    const auto hk = Histogram256::from_counts(c);
    EXPECT_EQ(otsu_threshold(h), otsu_threshold(hk));
    EXPECT_EQ(max_entropy_threshold(h), max_entropy_threshold(hk));
    EXPECT_EQ(yen_threshold(h), yen_threshold(hk));
  }
}

TEST(LiOtsuConfig, Validation)
{
  EXPECT_NO_THROW(LiOtsuConfig{}.validate());
  LiOtsuConfig c;
  c.foreground_ratio = 1.0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.step = 0.8;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.max_objects = 0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.t_floor = 256;
  EXPECT_THROW(c.validate(), InvalidInput);
}

TEST(LiOtsu, SparseDisksConvergeImmediately)
{
  GrayImage block{400, 400, 200};
  // Three 400-pixel squares at 60: 1,200 dark pixels.
  fx::fill_rect(block, 50, 50, 20, 20, 60);
  fx::fill_rect(block, 200, 100, 20, 20, 60);
  fx::fill_rect(block, 300, 300, 20, 20, 60);
  LiOtsuConfig cfg;
  cfg.max_objects = 50;
  const auto o = li_otsu(block, cfg);
  EXPECT_TRUE(o.converged);
  EXPECT_EQ(o.iterations, 0);
  EXPECT_EQ(o.t, otsu_threshold(Histogram256::of(block)));
  EXPECT_EQ(o.t, fx::oracle_otsu(Histogram256::of(block).counts));
  EXPECT_DOUBLE_EQ(o.foreground_ratio, 1200.0 / 160000.0);
  EXPECT_EQ(o.object_count, 3u);
}

TEST(LiOtsu, UniformBlockIsEmptySpace)
{
  const GrayImage block{400, 400, 180};
  const auto o = li_otsu(block, LiOtsuConfig{});
  EXPECT_TRUE(o.converged);
  EXPECT_EQ(o.iterations, 1);
  EXPECT_EQ(o.t, 162);
  EXPECT_DOUBLE_EQ(o.foreground_ratio, 0.0);
  EXPECT_EQ(o.object_count, 0u);
}

TEST(LiOtsu, DenseNoiseStopsAtFloor)
{
  Rng rng{43};
  const auto block = fx::random_image(rng, 100, 100, 0, 255);
  LiOtsuConfig cfg;
  cfg.t_floor = 40;
  const auto o = li_otsu(block, cfg);
  EXPECT_FALSE(o.converged);
  EXPECT_EQ(o.t, 40);
  EXPECT_GE(o.foreground_ratio, cfg.foreground_ratio);
}

TEST(LiOtsu, ThresholdSequenceDecreasesAndTerminates)
{
  Rng rng{44};
  for (int i = 0; i < 40; ++i) {
    const auto block = fx::random_scene(rng, 64, 64);
    LiOtsuConfig cfg;
    cfg.foreground_ratio = 0.05 + 0.1 * (i % 5);
    cfg.max_iters = 1 + i % 30;
    const auto o = li_otsu(block, cfg);
    EXPECT_LE(o.iterations, cfg.max_iters);
    // Replay the recurrence: each step strictly lowers t until the floor.
    int t = otsu_threshold(Histogram256::of(block));
    for (int k = 0; k < o.iterations; ++k) {
      const int next = std::max(static_cast<int>(std::floor(cfg.step * t + 1e-9)), cfg.t_floor);
      EXPECT_LT(next, t);
      t = next;
    }
    EXPECT_EQ(t, o.t);
    if (o.converged) {
      EXPECT_LT(o.foreground_ratio, cfg.foreground_ratio);
      EXPECT_LT(o.object_count, cfg.max_objects);
    }
  }
}

TEST(LiOtsu, ObjectCountBoundForcesIteration)
{
  // 625 dark 2x2 specks: 6.25% of the block, under F but over N_max.
  GrayImage block{200, 200, 200};
  for (int y = 2; y < 200; y += 8)
    for (int x = 2; x < 200; x += 8)
      fx::fill_rect(block, x, y, 2, 2, 20);
  LiOtsuConfig cfg;
  cfg.max_objects = 100;
  const auto o = li_otsu(block, cfg);
  EXPECT_TRUE(o.converged);
  EXPECT_EQ(o.iterations, 1);
  EXPECT_EQ(o.t, 18);
  EXPECT_EQ(o.object_count, 0u);

  cfg.max_objects = 1000;
  const auto relaxed = li_otsu(block, cfg);
  EXPECT_EQ(relaxed.iterations, 0);
  EXPECT_EQ(relaxed.t, 20);
  EXPECT_EQ(relaxed.object_count, 625u);
}

TEST(Segment, UniformImageIsEmpty)
{
  const GrayImage img{1000, 700, 180};
  const auto seg = segment_image(img, LiOtsuConfig{});
  EXPECT_EQ(popcount(seg.mask), 0u);
  ASSERT_EQ(seg.blocks.size(), 6u);
  for (const auto& b : seg.blocks) {
    EXPECT_TRUE(b.outcome.converged);
    EXPECT_EQ(b.outcome.object_count, 0u);
  }
}

TEST(Segment, ForegroundConfinedToBlockWithDisks)
{
  GrayImage img{1600, 1200, 190};
  for (int i = 0; i < 5; ++i)
    fx::draw_disk(img, 450 + 60 * i, 500 + 30 * i, 12, 60);
  const auto seg = segment_image(img, LiOtsuConfig{});
  std::size_t inside = 0;
  for (int y = 0; y < 1200; ++y)
    for (int x = 0; x < 1600; ++x)
      if (seg.mask(x, y)) {
        EXPECT_TRUE(x >= 400 && x < 800 && y >= 400 && y < 800);
        ++inside;
      }
  EXPECT_GT(inside, 5u * 400);
  EXPECT_EQ(count_components(seg.mask, 4), 5u);
}

TEST(Segment, StitchedMaskIsUnionOfBlockMasks)
{
  Rng rng{45};
  const auto img = fx::random_scene(rng, 530, 410);
  const auto seg = segment_image(img, LiOtsuConfig{}, 128);
  std::size_t total = 0;
  for (const auto& b : seg.blocks) {
    const auto block = crop(img, b.region);
    const auto m = apply_threshold(block, li_otsu(block, LiOtsuConfig{}).t,
                                   Polarity::dark_is_foreground);
    EXPECT_EQ(crop(seg.mask, b.region), m);
    total += popcount(m);
  }
  EXPECT_EQ(total, popcount(seg.mask));
  EXPECT_THROW(segment_image(img, LiOtsuConfig{}, 32), InvalidInput);
  EXPECT_THROW(segment_image(GrayImage{}, LiOtsuConfig{}), InvalidInput);
}

TEST(Methods, NamesRoundTrip)
{
  for (auto m : {ThresholdMethod::li_otsu, ThresholdMethod::otsu, ThresholdMethod::max_entropy,
                 ThresholdMethod::yen})
    EXPECT_EQ(parse_method(method_name(m)), m);
  EXPECT_FALSE(parse_method("triangle").has_value());
}

TEST(Methods, GlobalOtsuSplitsNoisyUniformImage)
{
  Rng rng{46};
  GrayImage img{400, 400};
  std::normal_distribution<double> noise{170.0, 3.0};
  for (auto& v : img)
    v = to_intensity(noise(rng));
  EXPECT_GT(popcount(segment_with(img, ThresholdMethod::otsu)), 0u);
  EXPECT_EQ(popcount(segment_with(img, ThresholdMethod::li_otsu)), 0u);
}

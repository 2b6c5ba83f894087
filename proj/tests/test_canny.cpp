#include "support.hpp"

#include <wbcq/canny.hpp>

#include <gtest/gtest.h>

using namespace wbcq;
namespace fx = wbcq::fixtures;

TEST(Canny, ConstantImageHasNoEdges)
{
  for (std::uint8_t v : {0, 90, 255})
    EXPECT_EQ(popcount(canny(GrayImage{40, 30, v}, 100, 200)), 0u);
}

TEST(Canny, RejectsBadThresholds)
{
  const GrayImage img{10, 10, 0};
  EXPECT_THROW(canny(img, 200, 100), InvalidInput);
  EXPECT_THROW(canny(img, -1, 100), InvalidInput);
  EXPECT_THROW(canny(img, 100, 100), InvalidInput);
}

TEST(Canny, VerticalStepGivesThinLine)
{
  GrayImage img{60, 40, 0};
  fx::fill_rect(img, 30, 0, 30, 40, 255);
  const auto e = canny(img, 100, 200);
  for (int y = 3; y < 37; ++y) {
    int count = 0;
    for (int x = 0; x < 60; ++x)
      if (e(x, y)) {
        ++count;
        EXPECT_GE(x, 29);
        EXPECT_LE(x, 30);
      }
    EXPECT_EQ(count, 1) << "row " << y;
  }
}

TEST(Canny, RotationCommutes)
{
  // A smooth blob has no exact gradient-magnitude ties across its ridge.
  GrayImage img{50, 40, 30};
  for (int y = 0; y < 40; ++y)
    for (int x = 0; x < 50; ++x) {
      const double dx = (x - 23.3) / 9.0, dy = (y - 18.6) / 6.0;
      img(x, y) = to_intensity(30 + 200 * std::exp(-(dx * dx + dy * dy)));
    }
  const auto a = fx::rotate90(canny(img, 40, 80));
  const auto b = canny(fx::rotate90(img), 40, 80);
  ASSERT_EQ(a.width(), b.width());
  ASSERT_GT(popcount(b), 10u);
  for (int y = 2; y < b.height() - 2; ++y)
    for (int x = 2; x < b.width() - 2; ++x)
      EXPECT_EQ(a(x, y), b(x, y)) << x << "," << y;
}

TEST(Canny, WeakEdgeAloneIsDropped)
{
  // A 0|60 step has a Sobel magnitude of about 121 after smoothing.
  GrayImage img{40, 40, 0};
  fx::fill_rect(img, 20, 0, 20, 40, 60);
  EXPECT_EQ(popcount(canny(img, 100, 300)), 0u);
  EXPECT_EQ(popcount(canny(img, 100, 120)), 40u);
}

TEST(Canny, HysteresisFollowsWeakPixelsFromStrongOnes)
{
  // Step whose contrast peaks at 200 mid-height and falls to 60 elsewhere.
  GrayImage img{40, 60, 0};
  for (int y = 0; y < 60; ++y)
    for (int x = 20; x < 40; ++x)
      img(x, y) = to_intensity(60 + 140 * std::max(0.0, 1 - std::abs(y - 30) / 12.0));
  auto rows = [](const BinaryMask& e) {
    int n = 0;
    for (int y = 0; y < e.height(); ++y) {
      bool any = false;
      for (int x = 0; x < e.width(); ++x)
        any = any || e(x, y);
      n += any;
    }
    return n;
  };
  const auto strong = canny(img, 299, 300);
  const auto linked = canny(img, 100, 300);
  EXPECT_GT(rows(strong), 0);
  EXPECT_LT(rows(strong), 20);
  EXPECT_EQ(rows(linked), 60);
  for (std::size_t i = 0; i < strong.size(); ++i)
    EXPECT_TRUE(!strong.pixels()[i] || linked.pixels()[i]);
}

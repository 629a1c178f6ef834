#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "biasaudit/colorsig.hpp"
#include "biasaudit/errors.hpp"
#include "support/fixtures.hpp"

using namespace biasaudit;

namespace {

// Min-channel hexcone formulation, written independently of the library's
// max-channel branches.
std::array<int, 3> reference_hsv(int r, int g, int b) {
  const int mx = std::max({r, g, b});
  const int mn = std::min({r, g, b});
  const double delta = (mx - mn) / 255.0;
  double hue = 0;
  if (delta > 0) {
    const double R = r / 255.0, G = g / 255.0, B = b / 255.0;
    if (mn == b) hue = 60.0 * (G - R) / delta + 60.0;
    else if (mn == r) hue = 60.0 * (B - G) / delta + 180.0;
    else hue = 60.0 * (R - B) / delta + 300.0;
    if (hue >= 360.0) hue -= 360.0;
  }
  const int h = std::min(179, static_cast<int>(std::lround(hue / 2.0)));
  const int s = mx == 0 ? 0 : static_cast<int>(std::lround(255.0 * (mx - mn) / mx));
  return {h, s, mx};
}

ImageRecord two_color_image(std::array<std::uint8_t, 3> top, std::array<std::uint8_t, 3> bottom) {
  ImageRecord img;
  for (int y = 0; y < kImageSide; ++y)
    for (int x = 0; x < kImageSide; ++x)
      for (int c = 0; c < 3; ++c) img.at(c, y, x) = y < kImageSide / 2 ? top[c] : bottom[c];
  return img;
}

}  // namespace

TEST_SUITE("colorsig") {
  TEST_CASE("rgb_to_hsv on primaries and gray") {
    const auto red = rgb_to_hsv(fixtures::solid_image(255, 0, 0));
    CHECK(red.h[0] == 0);
    CHECK(red.s[0] == 255);
    CHECK(red.v[0] == 255);
    const auto green = rgb_to_hsv(fixtures::solid_image(0, 255, 0));
    CHECK(green.h[5] == 60);
    CHECK(green.s[5] == 255);
    const auto blue = rgb_to_hsv(fixtures::solid_image(0, 0, 255));
    CHECK(blue.h[5] == 120);
    const auto gray = rgb_to_hsv(fixtures::solid_image(128, 128, 128));
    CHECK(gray.h[9] == 0);
    CHECK(gray.s[9] == 0);
    CHECK(gray.v[9] == 128);
    const auto black = rgb_to_hsv(fixtures::solid_image(0, 0, 0));
    CHECK(black.s[0] == 0);
    CHECK(black.v[0] == 0);
  }

  TEST_CASE("rgb_to_hsv matches an independent formulation on 10k pixels") {
    SplitMix64 rng(2024);
    int worst = 0;
    for (int t = 0; t < 10000 / kPlaneSize + 1; ++t) {
      const ImageRecord img = fixtures::random_image(rng);
      const HsvImage hsv = rgb_to_hsv(img);
      for (int i = 0; i < kPlaneSize; ++i) {
        const auto ref = reference_hsv(img.pixels[i], img.pixels[kPlaneSize + i], img.pixels[2 * kPlaneSize + i]);
        const int dh = std::abs(hsv.h[i] - ref[0]);
        worst = std::max({worst, std::min(dh, 180 - dh), std::abs(hsv.s[i] - ref[1]), std::abs(hsv.v[i] - ref[2])});
        CHECK(hsv.h[i] < 180);
      }
    }
    CHECK(worst <= 1);
  }

  TEST_CASE("continuous HSV round trip") {
    SplitMix64 rng(3);
    for (int t = 0; t < 2000; ++t) {
      const double r = rng.uniform(), g = rng.uniform(), b = rng.uniform();
      const auto back = hsv_to_rgb_pixel(rgb_to_hsv_pixel(r, g, b));
      CHECK(back[0] == doctest::Approx(r).epsilon(1e-12));
      CHECK(back[1] == doctest::Approx(g).epsilon(1e-12));
      CHECK(back[2] == doctest::Approx(b).epsilon(1e-12));
    }
  }

  TEST_CASE("hue histogram") {
    const auto red = hue_histogram(rgb_to_hsv(fixtures::solid_image(255, 0, 0)));
    CHECK(red[0] == 1024);
    CHECK(red.sum() == 1024);

    const auto half = hue_histogram(rgb_to_hsv(two_color_image({255, 0, 0}, {0, 255, 0})));
    CHECK(half[0] == 512);
    CHECK(half[60] == 512);
    CHECK(half.sum() == 1024);

    SplitMix64 rng(9);
    for (int t = 0; t < 20; ++t) CHECK(hue_histogram(rgb_to_hsv(fixtures::random_image(rng))).sum() == 1024);
  }

  TEST_CASE("signatures") {
    HueHistogram h = HueHistogram::Zero();
    h[0] = 1024;
    auto sig = to_signature(h);
    REQUIRE(sig.size() == 1);
    CHECK(sig.weights[0] == 1.0);
    CHECK(sig.positions[0] == 0.0);

    h[0] = 512;
    h[60] = 512;
    sig = to_signature(h);
    REQUIRE(sig.size() == 2);
    CHECK(sig.weights[0] == 0.5);
    CHECK(sig.positions[1] == 60.0);

    CHECK_THROWS_AS(to_signature(HueHistogram::Zero()), Error);

    SplitMix64 rng(12);
    for (int t = 0; t < 50; ++t) {
      const auto s = image_signature(fixtures::random_image(rng));
      CHECK(std::abs(s.weights.sum() - 1.0) <= 1e-12);
      CHECK((s.weights.array() > 0).all());
      for (Eigen::Index k = 1; k < s.size(); ++k) CHECK(s.positions[k] > s.positions[k - 1]);
    }
  }
}

// Copyright 2026 The AgriSynth Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "agrisynth/augment.hpp"
#include "agrisynth/maskops.hpp"
#include "test_support.hpp"

namespace agrisynth {
namespace {

AnnotatedSample sample(std::uint32_t w = 9, std::uint32_t h = 6, std::uint64_t seed = 1) {
  Rng rng(seed);
  return AnnotatedSample(testing::random_image(w, h, rng), testing::random_labels(w, h, rng), "s");
}

AnnotatedSample apply(AnnotatedSample s, AugmentationKind kind, int times = 1, std::uint64_t seed = 0) {
  for (int i = 0; i < times; ++i) s = augment(s, {kind, seed});
  return s;
}

TEST(Augment, FlipsAreInvolutions) {
  const auto s = sample();
  EXPECT_EQ(apply(s, aug::FlipH{}, 2), s);
  EXPECT_EQ(apply(s, aug::FlipV{}, 2), s);
  EXPECT_NE(apply(s, aug::FlipH{}), s);
}

TEST(Augment, FourQuarterTurnsAreIdentity) {
  const auto s = sample();
  EXPECT_EQ(apply(s, aug::Rotate90{1}, 4), s);
  EXPECT_EQ(apply(s, aug::Rotate90{2}, 2), s);
  EXPECT_EQ(apply(apply(s, aug::Rotate90{1}), aug::Rotate90{3}), s);
}

TEST(Augment, RotateIsClockwise) {
  Plane8 p(2, 1);
  p(0, 0) = 1;
  p(1, 0) = 2;
  const AnnotatedSample s(MultiSpectralImage(p, p, p, p), LabelMask(2, 1), "r");
  const auto r = apply(s, aug::Rotate90{1});
  ASSERT_EQ(r.image.width(), 1u);
  ASSERT_EQ(r.image.height(), 2u);
  EXPECT_EQ(r.image.channel(Channel::kNir)(0, 0), 1);
  EXPECT_EQ(r.image.channel(Channel::kNir)(0, 1), 2);
}

TEST(Augment, GeometricMovesMaskWithImage) {
  // Tag each label with the red value so pixel/label pairs can be followed.
  Rng rng(2);
  LabelMask m = testing::random_labels(7, 5, rng);
  MultiSpectralImage img(7, 5);
  for (std::uint32_t y = 0; y < 5; ++y) {
    for (std::uint32_t x = 0; x < 7; ++x) img.channel(Channel::kRed)(x, y) = static_cast<std::uint8_t>(m.at(x, y));
  }
  const AnnotatedSample s(img, m, "g");
  for (AugmentationKind k : {AugmentationKind{aug::Rotate90{1}}, AugmentationKind{aug::FlipH{}},
                             AugmentationKind{aug::FlipV{}}, AugmentationKind{aug::Crop{1, 1, 4, 3}}}) {
    const auto out = apply(s, k);
    EXPECT_EQ(out.image.channel(Channel::kRed), out.mask.raw());
  }
}

TEST(Augment, ShiftFillsWithSoilAndZero) {
  const auto s = sample(6, 4);
  const auto out = apply(s, aug::Shift{2, -1});
  EXPECT_EQ(out.image.channel(Channel::kGreen)(2, 0), s.image.channel(Channel::kGreen)(0, 1));
  EXPECT_EQ(out.image.channel(Channel::kGreen)(0, 0), 0);
  EXPECT_EQ(out.mask.at(1, 3), Label::kSoil);
  EXPECT_EQ(out.mask.at(5, 2), s.mask.at(3, 3));
}

TEST(Augment, RandomShiftIsSeeded) {
  const auto s = sample(20, 20);
  const auto a = apply(s, aug::Shift{5, 5, true}, 1, 9);
  EXPECT_EQ(a, apply(s, aug::Shift{5, 5, true}, 1, 9));
}

TEST(Augment, ZoomResizesBothOutputs) {
  const auto s = sample(10, 8);
  const auto z = apply(s, aug::Zoom{1.5});
  EXPECT_EQ(z.image.width(), 15u);
  EXPECT_EQ(z.image.height(), 12u);
  EXPECT_EQ(z.mask.width(), 15u);
  EXPECT_EQ(apply(s, aug::Zoom{2.0}).mask.raw(), resize_nearest(s.mask.raw(), 20, 16));
  EXPECT_THROW(apply(s, aug::Zoom{0.01}), DataError);
}

TEST(Augment, CropBounds) {
  const auto s = sample(10, 8);
  const auto c = apply(s, aug::Crop{2, 3, 5, 4});
  EXPECT_EQ(c.image.width(), 5u);
  EXPECT_EQ(c.mask.at(0, 0), s.mask.at(2, 3));
  EXPECT_THROW(apply(s, aug::Crop{6, 0, 5, 4}), DataError);
}

TEST(Augment, GaussianBlurKeepsMaskChangesImage) {
  const auto s = sample(32, 32);
  const auto b = apply(s, aug::GaussianBlur{1.5});
  EXPECT_EQ(b.mask, s.mask);
  EXPECT_NE(b.image, s.image);
}

TEST(Augment, PhotometricKeepMask) {
  const auto s = sample(16, 16);
  for (AugmentationKind k : {AugmentationKind{aug::MedianBlur{1}}, AugmentationKind{aug::Noise{10}},
                             AugmentationKind{aug::Contrast{1.4}}, AugmentationKind{aug::Brightness{-30}}}) {
    EXPECT_EQ(apply(s, k).mask, s.mask);
  }
}

TEST(Augment, BlurOfConstantImageIsConstant) {
  MultiSpectralImage img(12, 9);
  for (const Channel c : kAllChannels) {
    for (auto& v : img.channel(c).pixels()) v = 90;
  }
  const AnnotatedSample s(img, LabelMask(12, 9), "c");
  EXPECT_EQ(apply(s, aug::GaussianBlur{2.0}).image, img);
  EXPECT_EQ(apply(s, aug::MedianBlur{2}).image, img);
}

TEST(Augment, MedianRemovesIsolatedSpike) {
  MultiSpectralImage img(5, 5);
  img.channel(Channel::kNir)(2, 2) = 255;
  const AnnotatedSample s(img, LabelMask(5, 5), "m");
  EXPECT_EQ(apply(s, aug::MedianBlur{1}).image.channel(Channel::kNir)(2, 2), 0);
}

TEST(Augment, NoiseIsBoundedAndSeeded) {
  const auto s = sample(16, 16);
  const auto a = apply(s, aug::Noise{5}, 1, 3);
  EXPECT_EQ(a, apply(s, aug::Noise{5}, 1, 3));
  EXPECT_NE(a, apply(s, aug::Noise{5}, 1, 4));
  for (const Channel c : kAllChannels) {
    for (std::size_t i = 0; i < a.image.channel(c).size(); ++i) {
      EXPECT_LE(std::abs(a.image.channel(c).pixels()[i] - s.image.channel(c).pixels()[i]), 5);
    }
  }
}

TEST(Augment, BrightnessAndContrastSaturate) {
  MultiSpectralImage img(2, 1);
  for (const Channel c : kAllChannels) {
    img.channel(c)(0, 0) = 10;
    img.channel(c)(1, 0) = 250;
  }
  const AnnotatedSample s(img, LabelMask(2, 1), "b");
  const auto b = apply(s, aug::Brightness{20});
  EXPECT_EQ(b.image.channel(Channel::kRed)(0, 0), 30);
  EXPECT_EQ(b.image.channel(Channel::kRed)(1, 0), 255);
  const auto c = apply(s, aug::Contrast{2.0});
  EXPECT_EQ(c.image.channel(Channel::kBlue)(0, 0), 0);
  EXPECT_EQ(c.image.channel(Channel::kBlue)(1, 0), 255);
}

TEST(Augment, ValidationRejectsBadParameters) {
  EXPECT_THROW(validate({aug::Rotate90{4}, 0}), DataError);
  EXPECT_THROW(validate({aug::Zoom{0.0}, 0}), DataError);
  EXPECT_THROW(validate({aug::GaussianBlur{-1.0}, 0}), DataError);
  EXPECT_THROW(validate({aug::MedianBlur{0}, 0}), DataError);
  EXPECT_THROW(validate({aug::Noise{-2}, 0}), DataError);
  EXPECT_THROW(validate({aug::Shift{-1, 0, true}, 0}), DataError);
  EXPECT_NO_THROW(validate({aug::Shift{-1, 0, false}, 0}));
}

TEST(Augment, JsonRoundTrip) {
  const std::vector<AugmentationSpec> specs = {
      {aug::Rotate90{3}, 1},          {aug::FlipH{}, 0},        {aug::FlipV{}, 0},
      {aug::Shift{3, 2, true}, 5},    {aug::Zoom{0.75}, 0},     {aug::Crop{1, 2, 3, 4}, 0},
      {aug::GaussianBlur{1.5}, 7},    {aug::MedianBlur{2}, 0},  {aug::Noise{8}, 11},
      {aug::Contrast{1.25}, 0},       {aug::Brightness{-12}, 0}};
  for (const auto& s : specs) {
    const auto back = augmentation_from_json(to_json(s));
    EXPECT_EQ(to_json(back), to_json(s));
    EXPECT_EQ(is_geometric(back), is_geometric(s));
  }
  const auto list = augmentation_list_from_json(R"([{"kind":"flip_h"},{"kind":"noise","amplitude":3,"seed":2}])");
  ASSERT_EQ(list.size(), 2u);
  EXPECT_TRUE(is_geometric(list[0]));
  EXPECT_FALSE(is_geometric(list[1]));
  EXPECT_EQ(list[1].seed, 2u);
  EXPECT_EQ(augmentation_list_from_json(R"({"kind":"flip_v"})").size(), 1u);
  EXPECT_THROW(augmentation_from_json(R"({"kind":"warp"})"), DataError);
  EXPECT_THROW(augmentation_from_json("{"), DataError);
}

}  // namespace
}  // namespace agrisynth

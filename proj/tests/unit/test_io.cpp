// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdint>
#include <fstream>
#include <functional>

#include "fixtures.hpp"
#include "hmrs/digits.hpp"
#include "hmrs/error.hpp"
#include "hmrs/idx.hpp"
#include "hmrs/model_io.hpp"

namespace hmrs {
namespace {

using testing::random_mlp;
using testing::scratch_dir;

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::Io;
}

// Two 2x3 images and their labels, byte for byte.
const std::vector<std::uint8_t> kImages = {0x00, 0x00, 0x08, 0x03, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 3,
                                           0,    255,  51,   102,  0, 0, 204, 1, 2, 3, 4, 5};
const std::vector<std::uint8_t> kLabels = {0x00, 0x00, 0x08, 0x01, 0, 0, 0, 2, 7, 3};

TEST(Idx, ParsesHandBuiltFixture) {
  const auto dir = scratch_dir("idx-fixture");
  write_bytes(dir / "img", kImages);
  write_bytes(dir / "lbl", kLabels);
  const Dataset d = load_idx(dir / "img", dir / "lbl");
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.images[0].height, 2u);
  EXPECT_EQ(d.images[0].width, 3u);
  EXPECT_EQ(d.images[0].data, (std::vector<double>{0.0, 1.0, 0.2, 0.4, 0.0, 0.0}));
  EXPECT_EQ(d.images[1].data,
            (std::vector<double>{204 / 255.0, 1 / 255.0, 2 / 255.0, 3 / 255.0, 4 / 255.0, 5 / 255.0}));
  EXPECT_EQ(d.labels, (std::vector<std::size_t>{7, 3}));
  EXPECT_EQ(d.num_classes, 8u);
}

TEST(Idx, TruncatedFileIsMalformed) {
  const auto dir = scratch_dir("idx-truncated");
  write_bytes(dir / "img", {kImages.begin(), kImages.end() - 1});
  write_bytes(dir / "short", {0x00, 0x00, 0x08});
  write_bytes(dir / "lbl", kLabels);
  EXPECT_EQ(code_of([&] { load_idx(dir / "img", dir / "lbl"); }), Errc::MalformedFile);
  EXPECT_EQ(code_of([&] { load_idx_labels(dir / "short"); }), Errc::MalformedFile);
  EXPECT_EQ(code_of([&] { load_idx_images(dir / "lbl"); }), Errc::MalformedFile);
}

TEST(Idx, CountMismatchBetweenFiles) {
  const auto dir = scratch_dir("idx-count");
  write_bytes(dir / "img", kImages);
  write_bytes(dir / "lbl", {0x00, 0x00, 0x08, 0x01, 0, 0, 0, 1, 7});
  EXPECT_EQ(code_of([&] { load_idx(dir / "img", dir / "lbl"); }), Errc::CountMismatch);
}

TEST(Idx, SaveLoadRoundTripsQuantisedData) {
  const auto dir = scratch_dir("idx-roundtrip");
  const Dataset d = synthetic_digits(20, 5);
  save_idx(d, dir / "i", dir / "l");
  const Dataset back = load_idx(dir / "i", dir / "l", d.num_classes);
  ASSERT_EQ(back.size(), d.size());
  EXPECT_EQ(back.labels, d.labels);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t p = 0; p < d.images[i].size(); ++p) {
      EXPECT_NEAR(back.images[i].data[p], d.images[i].data[p], 0.5 / 255.0 + 1e-12);
    }
  }
}

TEST(ModelIo, RoundTripIsBitExact) {
  const auto dir = scratch_dir("model-io");
  const Mlp m = random_mlp({64, 16, 8, 10}, 77, 0.25);
  save_model(m, dir / "m.json");
  const Mlp back = load_model(dir / "m.json");
  EXPECT_TRUE(back == m);
  EXPECT_EQ(serialize_model(back), serialize_model(m));
}

TEST(ModelIo, RejectsMalformedAndMisshapenFiles) {
  EXPECT_EQ(code_of([] { parse_model("not json"); }), Errc::MalformedFile);
  EXPECT_EQ(code_of([] { parse_model(R"({"version":9,"layers":[]})"); }), Errc::MalformedFile);
  EXPECT_EQ(code_of([] {
              parse_model(R"({"version":1,"layers":[{"w":[[1,2],[3]],"b":[0,0],"act":"softmax","dropout":0}]})");
            }),
            Errc::ShapeMismatch);
  EXPECT_EQ(code_of([] {
              parse_model(R"({"version":1,"input_dim":3,"layers":[{"w":[[1,2],[3,4]],"b":[0,0],"act":"softmax","dropout":0}]})");
            }),
            Errc::ShapeMismatch);
}

TEST(Digits, DeterministicAndBalanced) {
  const Dataset a = synthetic_digits(100, 9);
  const Dataset b = synthetic_digits(100, 9);
  EXPECT_EQ(a.images, b.images);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.num_classes, 10u);
  std::vector<int> counts(10, 0);
  for (std::size_t l : a.labels) ++counts[l];
  for (int c : counts) EXPECT_EQ(c, 10);
  for (const Image& img : a.images) EXPECT_NO_THROW(img.validate());
}

}  // namespace
}  // namespace hmrs

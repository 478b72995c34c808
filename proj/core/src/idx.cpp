// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#include "hmrs/idx.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>

#include "hmrs/error.hpp"

namespace hmrs {

namespace {

std::vector<std::uint8_t> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), Errc::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t be32(const std::vector<std::uint8_t>& bytes, std::size_t offset,
                   const std::filesystem::path& path) {
  require(bytes.size() >= offset + 4, Errc::MalformedFile, path.string() + ": truncated header");
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void put32(std::ofstream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                         static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(bytes, 4);
}

}  // namespace

std::vector<Image> load_idx_images(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  const auto magic = be32(bytes, 0, path);
  require(magic == kIdxImagesMagic, Errc::MalformedFile,
          path.string() + ": not an IDX uint8 image file");
  const std::size_t count = be32(bytes, 4, path);
  const std::size_t rows = be32(bytes, 8, path);
  const std::size_t cols = be32(bytes, 12, path);
  const std::size_t pixels = rows * cols;
  require(rows > 0 && cols > 0, Errc::MalformedFile, path.string() + ": zero image dimension");
  require(bytes.size() == 16 + count * pixels, Errc::MalformedFile,
          path.string() + ": payload size does not match header");
  std::vector<Image> images;
  images.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Image img(rows, cols, 1);
    const std::uint8_t* src = bytes.data() + 16 + i * pixels;
    for (std::size_t p = 0; p < pixels; ++p) img.data[p] = src[p] / 255.0;
    images.push_back(std::move(img));
  }
  return images;
}

std::vector<std::size_t> load_idx_labels(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  const auto magic = be32(bytes, 0, path);
  require(magic == kIdxLabelsMagic, Errc::MalformedFile,
          path.string() + ": not an IDX uint8 label file");
  const std::size_t count = be32(bytes, 4, path);
  require(bytes.size() == 8 + count, Errc::MalformedFile,
          path.string() + ": payload size does not match header");
  return {bytes.begin() + 8, bytes.end()};
}

Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                 std::size_t num_classes) {
  Dataset data;
  data.images = load_idx_images(images);
  data.labels = load_idx_labels(labels);
  require(data.images.size() == data.labels.size(), Errc::CountMismatch,
          images.string() + " holds " + std::to_string(data.images.size()) + " images but " +
              labels.string() + " holds " + std::to_string(data.labels.size()) + " labels");
  std::size_t top = 0;
  for (std::size_t l : data.labels) top = std::max(top, l + 1);
  data.num_classes = std::max(top, num_classes);
  return data;
}

void save_idx(const Dataset& data, const std::filesystem::path& images,
              const std::filesystem::path& labels) {
  data.validate();
  require(!data.empty(), Errc::EmptyDataset, "cannot write an empty IDX dataset");
  const Image& first = data.images.front();
  require(first.channels == 1, Errc::DimensionMismatch, "IDX writer supports one channel");
  for (const auto& p : {images, labels}) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  }

  std::ofstream img_out(images, std::ios::binary);
  require(static_cast<bool>(img_out), Errc::Io, "cannot write " + images.string());
  put32(img_out, kIdxImagesMagic);
  put32(img_out, static_cast<std::uint32_t>(data.size()));
  put32(img_out, static_cast<std::uint32_t>(first.height));
  put32(img_out, static_cast<std::uint32_t>(first.width));
  for (const Image& img : data.images) {
    for (double v : img.data) {
      img_out.put(static_cast<char>(static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0))));
    }
  }

  std::ofstream lbl_out(labels, std::ios::binary);
  require(static_cast<bool>(lbl_out), Errc::Io, "cannot write " + labels.string());
  put32(lbl_out, kIdxLabelsMagic);
  put32(lbl_out, static_cast<std::uint32_t>(data.size()));
  for (std::size_t l : data.labels) {
    require(l < 256, Errc::InvalidArgument, "IDX labels must fit in a byte");
    lbl_out.put(static_cast<char>(l));
  }
}

}  // namespace hmrs

// Copyright 2026 The HQRN Authors
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

#include "hqrn/mnist.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>

#include "hqrn/error.hpp"

namespace hqrn {
namespace {

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<unsigned char>& buf, std::size_t offset,
                        const std::filesystem::path& path) {
  if (offset + 4 > buf.size()) {
    throw DataError(path.string() + ": truncated header at offset " + std::to_string(offset));
  }
  return (std::uint32_t{buf[offset]} << 24) | (std::uint32_t{buf[offset + 1]} << 16) |
         (std::uint32_t{buf[offset + 2]} << 8) | std::uint32_t{buf[offset + 3]};
}

void expect_magic(const std::vector<unsigned char>& buf, std::uint32_t want,
                  const std::filesystem::path& path) {
  const std::uint32_t got = read_be32(buf, 0, path);
  if (got != want) {
    throw DataError(path.string() + ": bad magic 0x" + [got] {
      char s[9];
      std::snprintf(s, sizeof s, "%08x", got);
      return std::string(s);
    }() + " at offset 0");
  }
}

}  // namespace

std::vector<MnistRecord> ingest_mnist(const std::filesystem::path& images_path,
                                      const std::filesystem::path& labels_path) {
  const std::vector<unsigned char> images = read_all(images_path);
  const std::vector<unsigned char> labels = read_all(labels_path);
  expect_magic(images, kIdxImageMagic, images_path);
  expect_magic(labels, kIdxLabelMagic, labels_path);

  const std::uint32_t n_images = read_be32(images, 4, images_path);
  const std::uint32_t rows = read_be32(images, 8, images_path);
  const std::uint32_t cols = read_be32(images, 12, images_path);
  if (rows != kMnistSide || cols != kMnistSide) {
    throw DataError(images_path.string() + ": expected 28x28 images at offset 8, got " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  }
  const std::uint32_t n_labels = read_be32(labels, 4, labels_path);
  if (n_images != n_labels) {
    throw DataError("count mismatch: " + std::to_string(n_images) + " images (offset 4 of " +
                    images_path.string() + ") vs " + std::to_string(n_labels) +
                    " labels (offset 4 of " + labels_path.string() + ")");
  }

  constexpr std::size_t kImageHeader = 16;
  constexpr std::size_t kLabelHeader = 8;
  const std::size_t need_images = kImageHeader + std::size_t{n_images} * kMnistPixels;
  if (images.size() < need_images) {
    throw DataError(images_path.string() + ": truncated at offset " +
                    std::to_string(images.size()) + ", expected " + std::to_string(need_images) +
                    " bytes");
  }
  if (labels.size() < kLabelHeader + n_labels) {
    throw DataError(labels_path.string() + ": truncated at offset " +
                    std::to_string(labels.size()) + ", expected " +
                    std::to_string(kLabelHeader + n_labels) + " bytes");
  }

  std::vector<MnistRecord> out;
  out.reserve(n_images);
  for (std::uint32_t i = 0; i < n_images; ++i) {
    MnistRecord rec;
    rec.pixels.resize(kMnistPixels);
    const std::size_t base = kImageHeader + std::size_t{i} * kMnistPixels;
    for (int p = 0; p < kMnistPixels; ++p) rec.pixels[p] = images[base + p] / 255.0;
    const std::size_t label_offset = kLabelHeader + i;
    rec.digit = labels[label_offset];
    if (rec.digit > 9) {
      throw DataError(labels_path.string() + ": label " + std::to_string(rec.digit) +
                      " out of range at offset " + std::to_string(label_offset));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace hqrn

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

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "hqrn/linalg.hpp"

namespace hqrn {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;
inline constexpr int kMnistSide = 28;
inline constexpr int kMnistPixels = kMnistSide * kMnistSide;

struct MnistRecord {
  RealVector pixels;  // 784 values in [0, 1]
  int digit = 0;
};

/// Reads an IDX image/label pair. Throws DataError naming the file and byte
/// offset on bad magic, bad dimensions, truncation, or a count mismatch.
std::vector<MnistRecord> ingest_mnist(const std::filesystem::path& images_path,
                                      const std::filesystem::path& labels_path);

}  // namespace hqrn

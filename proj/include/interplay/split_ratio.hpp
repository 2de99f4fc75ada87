// Copyright 2026 The Interplay Authors
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

#include <string>
#include <string_view>
#include <vector>

#include "interplay/raster.hpp"

namespace interplay {

// Row/column partition of an image. Rows stack top to bottom with relative
// heights `weight`; each row splits left to right by `columns`.
//
// Text form: rows separated by ';'. A row is
//   weight                     one column
//   weight, (c1, c2, ...)      columns with relative widths c_k
//   weight, c1, c2, ...        same, without parentheses
//   (c1, c2, ...)              row weight 1
// So "1,(1,1); 2" is a top row split in two halves over a full-width bottom
// row twice as tall. Regions are numbered row-major from 0.
struct SplitRow {
  double weight = 1.0;
  std::vector<double> columns{1.0};
  bool operator==(const SplitRow&) const = default;
};

struct SplitRatio {
  std::vector<SplitRow> rows;

  std::size_t region_count() const;
  bool operator==(const SplitRatio&) const = default;
};

// Throws ParseError (column is 1-based) on malformed text or nonpositive weights.
SplitRatio parse_split_ratio(std::string_view text);

// Canonical text form, e.g. "1,(1,1); 2".
std::string to_string(const SplitRatio& split);

// Pixel rectangles of every region. Boundaries are rounded cumulative
// fractions, so regions tile the image exactly.
std::vector<Rect> split_regions(const SplitRatio& split, int width, int height);

}  // namespace interplay

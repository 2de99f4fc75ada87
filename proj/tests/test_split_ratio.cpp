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

#include <gtest/gtest.h>

#include <random>

#include "interplay/errors.hpp"
#include "interplay/split_ratio.hpp"

namespace interplay {
namespace {

TEST(ParseSplitRatio, TwoRowExample) {
  const SplitRatio s = parse_split_ratio("1,(1,1); 2");
  ASSERT_EQ(s.rows.size(), 2u);
  EXPECT_EQ(s.rows[0].weight, 1.0);
  EXPECT_EQ(s.rows[0].columns, (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(s.rows[1].weight, 2.0);
  EXPECT_EQ(s.rows[1].columns, (std::vector<double>{1.0}));
  EXPECT_EQ(s.region_count(), 3u);
  EXPECT_EQ(to_string(s), "1,(1,1); 2");
}

TEST(ParseSplitRatio, RowForms) {
  EXPECT_EQ(parse_split_ratio("1").region_count(), 1u);
  EXPECT_EQ(parse_split_ratio("(1,2,1)").rows[0].columns, (std::vector<double>{1, 2, 1}));
  EXPECT_EQ(parse_split_ratio("2,1,3"), parse_split_ratio("2,(1,3)"));
  EXPECT_EQ(parse_split_ratio(" 1 ; 1 ").region_count(), 2u);
  EXPECT_EQ(parse_split_ratio("0.5,(1.5,1)").rows[0].weight, 0.5);
}

TEST(ParseSplitRatio, CanonicalFormRoundTrips) {
  for (const char* text : {"1", "1; 1", "1,(1,1); 2", "3,(1,2,3); 1,(4,1)", "(1,1)"}) {
    const SplitRatio s = parse_split_ratio(text);
    EXPECT_EQ(parse_split_ratio(to_string(s)), s) << text;
  }
}

TEST(ParseSplitRatio, ErrorsCarryColumn) {
  for (const char* bad : {"", "1,(1,", "1;;2", "a", "1,(0,1)", "-1", "1,(1,1) x"}) {
    EXPECT_THROW(parse_split_ratio(bad), ParseError) << bad;
  }
  try {
    parse_split_ratio("1,(1,x)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 6u);
  }
}

TEST(SplitRegions, ExampleLayout) {
  const auto r = split_regions(parse_split_ratio("1,(1,1); 2"), 64, 48);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0], (Rect{0, 0, 32, 16}));
  EXPECT_EQ(r[1], (Rect{32, 0, 32, 16}));
  EXPECT_EQ(r[2], (Rect{0, 16, 64, 32}));
}

TEST(SplitRegions, TileImageExactly) {
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> w(1, 5);
  std::uniform_int_distribution<int> size(10, 97);
  for (int trial = 0; trial < 200; ++trial) {
    SplitRatio s;
    const int rows = w(rng);
    for (int i = 0; i < rows; ++i) {
      SplitRow row;
      row.weight = w(rng);
      row.columns.assign(static_cast<std::size_t>(w(rng)), 1.0);
      for (double& c : row.columns) c = w(rng);
      s.rows.push_back(row);
    }
    const int width = size(rng);
    const int height = size(rng);
    const auto regions = split_regions(s, width, height);
    ASSERT_EQ(regions.size(), s.region_count());
    std::vector<int> cover(static_cast<std::size_t>(width * height), 0);
    for (const Rect& r : regions)
      for (int y = r.y; y < r.y + r.height; ++y)
        for (int x = r.x; x < r.x + r.width; ++x) ++cover[static_cast<std::size_t>(y * width + x)];
    for (int c : cover) ASSERT_EQ(c, 1);
  }
}

}  // namespace
}  // namespace interplay

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

#include "interplay/split_ratio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "interplay/errors.hpp"

namespace interplay {

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }
  bool done() {
    skip_space();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  double number() {
    skip_space();
    const char* begin = text_.data() + pos_;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, text_.data() + text_.size(), value);
    if (ec != std::errc() || ptr == begin) fail("expected a number");
    if (!(value > 0.0) || !std::isfinite(value)) fail("weights must be positive");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError("split ratio", 1, pos_ + 1, message);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::vector<double> column_list(Cursor& in) {
  std::vector<double> cols{in.number()};
  while (in.accept(',')) cols.push_back(in.number());
  return cols;
}

SplitRow parse_row(Cursor& in) {
  SplitRow row;
  if (in.accept('(')) {
    row.columns = column_list(in);
    in.expect(')');
    return row;
  }
  row.weight = in.number();
  if (!in.accept(',')) return row;
  if (in.accept('(')) {
    row.columns = column_list(in);
    in.expect(')');
  } else {
    row.columns = column_list(in);
  }
  return row;
}

std::string format_weight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", w);
  return buf;
}

std::vector<int> cut(const std::vector<double>& weights, int total) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  std::vector<int> edges{0};
  double acc = 0.0;
  for (double w : weights) {
    acc += w;
    edges.push_back(static_cast<int>(std::lround(acc / sum * total)));
  }
  edges.back() = total;
  return edges;
}

}  // namespace

std::size_t SplitRatio::region_count() const {
  std::size_t n = 0;
  for (const SplitRow& r : rows) n += r.columns.size();
  return n;
}

SplitRatio parse_split_ratio(std::string_view text) {
  Cursor in(text);
  if (in.done()) in.fail("empty split ratio");
  SplitRatio split;
  split.rows.push_back(parse_row(in));
  while (in.accept(';')) split.rows.push_back(parse_row(in));
  if (!in.done()) in.fail("unexpected character");
  return split;
}

std::string to_string(const SplitRatio& split) {
  std::string out;
  for (std::size_t r = 0; r < split.rows.size(); ++r) {
    const SplitRow& row = split.rows[r];
    if (r > 0) out += "; ";
    out += format_weight(row.weight);
    if (row.columns.size() > 1) {
      out += ",(";
      for (std::size_t c = 0; c < row.columns.size(); ++c) {
        if (c > 0) out += ",";
        out += format_weight(row.columns[c]);
      }
      out += ")";
    }
  }
  return out;
}

std::vector<Rect> split_regions(const SplitRatio& split, int width, int height) {
  if (split.rows.empty()) throw ShapeError("split ratio has no rows");
  std::vector<double> row_weights;
  for (const SplitRow& r : split.rows) row_weights.push_back(r.weight);
  const std::vector<int> ys = cut(row_weights, height);
  std::vector<Rect> regions;
  for (std::size_t r = 0; r < split.rows.size(); ++r) {
    const std::vector<int> xs = cut(split.rows[r].columns, width);
    for (std::size_t c = 0; c + 1 < xs.size(); ++c) {
      regions.push_back(Rect{xs[c], ys[r], xs[c + 1] - xs[c], ys[r + 1] - ys[r]});
    }
  }
  return regions;
}

}  // namespace interplay

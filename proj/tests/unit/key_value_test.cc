// Copyright 2026 The foce Authors. All rights reserved.
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

#include "foce/errors.h"
#include "foce/key_value.h"

namespace foce {
namespace {

TEST(KeyValue, ParsesValuesAndComments) {
  const auto doc = KeyValueDocument::parse(
      "# header\nmode = regret\n  schedule.C = 0.5   # trailing\n\nschedule.T=10\n");
  EXPECT_EQ(doc.get("mode"), "regret");
  EXPECT_DOUBLE_EQ(doc.get_double("schedule.C"), 0.5);
  EXPECT_EQ(doc.get_int("schedule.T"), 10);
  EXPECT_FALSE(doc.has("seed"));
  EXPECT_EQ(doc.get_int("seed", 3), 3);
}

TEST(KeyValue, ListsAndRows) {
  const auto doc = KeyValueDocument::parse("v = 1, 2 3\nm = 1 2; 3 4\nl = a, b ,c\n");
  EXPECT_EQ(doc.get_doubles("v"), (std::vector<double>{1, 2, 3}));
  const auto rows = doc.get_rows("m");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1], (std::vector<double>{3, 4}));
  EXPECT_EQ(doc.get_list("l"), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(KeyValue, ErrorsNameTheKey) {
  const auto doc = KeyValueDocument::parse("x = abc\n");
  try {
    doc.get_double("x");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "x");
  }
  try {
    doc.get("missing");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "missing");
  }
}

TEST(KeyValue, RejectsMalformedLinesAndDuplicates) {
  EXPECT_THROW(KeyValueDocument::parse("no equals sign\n"), InputError);
  EXPECT_THROW(KeyValueDocument::parse("a = 1\na = 2\n"), InputError);
}

TEST(KeyValue, TracksUnusedKeys) {
  const auto doc = KeyValueDocument::parse("a = 1\nb = 2\n");
  doc.get("a");
  EXPECT_EQ(doc.unused_keys(), (std::vector<std::string>{"b"}));
}

TEST(KeyValue, BoolValues) {
  const auto doc = KeyValueDocument::parse("t = true\nf = 0\nbad = maybe\n");
  EXPECT_TRUE(doc.get_bool("t", false));
  EXPECT_FALSE(doc.get_bool("f", true));
  EXPECT_THROW(doc.get_bool("bad", true), ConfigError);
}

}  // namespace
}  // namespace foce

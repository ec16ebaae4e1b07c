#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "dccanet/format.hpp"

namespace {

using dccanet::csv_escape;
using dccanet::format_number;
using dccanet::split_csv_line;

TEST(Format, SixSignificantDigitsByDefault) {
  EXPECT_EQ(format_number(0.828012345), "0.828012");
  EXPECT_EQ(format_number(66.75), "66.75");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(-0.000123456789), "-0.000123457");
}

TEST(Format, FullPrecisionRoundTrips) {
  const double v = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_number(v, 17)), v);
}

TEST(Format, NonFiniteValues) {
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Csv, SplitsQuotedFieldsAndTrims) {
  const auto f = split_csv_line(" a ,\"b,c\",\"say \"\"hi\"\"\",\r");
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[0], "a");
  EXPECT_EQ(f[1], "b,c");
  EXPECT_EQ(f[2], "say \"hi\"");
  EXPECT_EQ(f[3], "");
}

TEST(Csv, EscapeRoundTrip) {
  for (std::string s : {"plain", "with,comma", "with \"quote\""}) {
    const auto f = split_csv_line(csv_escape(s));
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(f[0], s);
  }
}

}  // namespace

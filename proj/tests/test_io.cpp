#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <random>
#include <string>

#include "ptheta/io.hpp"

using namespace ptheta;
using namespace ptheta::io;

TEST(Numbers, RoundTripExactly) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> bits;
  int checked = 0;
  while (checked < 20000) {
    const std::uint64_t b = bits(rng);
    double v;
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    const std::string s = format_number(v);
    EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
    EXPECT_LE(s.size(), 24u);
    ++checked;
  }
}

TEST(Numbers, ShortForms) {
  EXPECT_EQ(format_number(0.8), "0.8");
  EXPECT_EQ(format_number(-6.0), "-6");
  EXPECT_EQ(format_number(1e-12), "1e-12");
  EXPECT_EQ(format_number(0.30924933860007747), "0.3092493386000775");
  EXPECT_EQ(format_number(0.1 + 0.2), "0.30000000000000004");
}

TEST(Numbers, NonFiniteBecomeSentinels) {
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "NaN");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "Infinity");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-Infinity");
  json j;
  j["a"] = number(std::numeric_limits<double>::quiet_NaN());
  j["b"] = number(-std::numeric_limits<double>::infinity());
  j["c"] = number(2.5);
  EXPECT_EQ(j.dump(), R"({"a":"NaN","b":"-Infinity","c":2.5})");
}

TEST(Csv, QuotesOnlyWhenNeeded) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
  EXPECT_EQ(csv_field(""), "");
}

TEST(Csv, TableUsesCrLfAndFixedWidth) {
  Table t;
  t.header = {"id", "notes"};
  t.add({"x", "a, b"});
  t.add({"y"});
  EXPECT_EQ(t.csv(), "id,notes\r\nx,\"a, b\"\r\ny,\r\n");
}

TEST(Text, ColumnsAreAligned) {
  Table t;
  t.header = {"k", "value"};
  t.add({"10", "1"});
  t.add({"2", "0.25"});
  EXPECT_EQ(t.text(), "k   value\n---------\n10  1\n2   0.25\n");
}

TEST(Json, ZeroRecordFields) {
  ZeroRecord z;
  z.q = 0.4;
  z.x = complex(-4.9, 3.0);
  z.kind = ZeroKind::complex_pair;
  const json j = to_json(z);
  EXPECT_EQ(j["kind"], "complex_pair");
  EXPECT_TRUE(j["index"].is_null());
  EXPECT_DOUBLE_EQ(j["im"].get<double>(), 3.0);
  z.index = 3;
  EXPECT_EQ(to_json(z)["index"], 3);
}

TEST(Json, ClaimReportOfASkippedClaim) {
  ClaimReport r;
  r.id = "x";
  r.status = ClaimStatus::skipped;
  const std::string s = to_json(r).dump();
  EXPECT_NE(s.find(R"("worst_q":"NaN")"), std::string::npos);
  EXPECT_NE(s.find(R"("worst_margin":"Infinity")"), std::string::npos);
  EXPECT_NE(s.find(R"("status":"skipped")"), std::string::npos);
}

TEST(Json, KeyOrderIsStable) {
  CertifiedValue v{complex(1.0, 0.0), 1e-16};
  EXPECT_EQ(to_json(v).dump(), R"({"re":1.0,"im":0.0,"err":1e-16})");
}

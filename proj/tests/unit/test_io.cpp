#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "shapecode/io.hpp"

using namespace shapecode;

TEST_CASE("byte ingestion is MSB-first") {
  const BitStream ff = BitStream::from_bytes({0xFF});
  for (size_t i = 0; i < 8; ++i) CHECK(ff[i] == 1);

  const BitStream a = BitStream::from_bytes({0x41});  // 'A'
  const std::vector<uint8_t> expected{0, 1, 0, 0, 0, 0, 0, 1};
  for (size_t i = 0; i < 8; ++i) CHECK(a[i] == expected[i]);

  CHECK(a.to_bytes() == std::vector<uint8_t>{0x41});
}

TEST_CASE("packing a ragged tail fills with ones") {
  BitStream s;
  s.push_back(0);
  s.push_back(1);
  s.push_back(0);
  CHECK(s.to_bytes() == std::vector<uint8_t>{0b01011111});
}

TEST_CASE("missing files raise") {
  CHECK_THROWS_AS(ingest_corpus("/nonexistent/corpus.txt"), std::runtime_error);
}

TEST_CASE("CSV rows are fixed-width with trailing newlines") {
  CsvWriter csv({"t", "fraction"});
  csv.add_row({format_value(uint64_t{12}), format_value(0.25)});
  CHECK(csv.str() == "t,fraction\n12,0.25\n");
  CHECK_THROWS_AS(csv.add_row({"1"}), std::invalid_argument);
}

TEST_CASE("value formatting keeps 12 significant digits") {
  CHECK(format_value(0.1234567890123456) == "0.123456789012");
  CHECK(format_value(1.0) == "1");
  CHECK(format_value(uint64_t{40346}) == "40346");
}

TEST_CASE("log-spaced checkpoints are increasing and end at the limit") {
  const auto pts = log_spaced_checkpoints(100, 100000);
  CHECK(pts.front() >= 100);
  CHECK(pts.back() == 100000);
  for (size_t i = 1; i < pts.size(); ++i) CHECK(pts[i] > pts[i - 1]);
}

#include <random>

#include "doctest.h"
#include "shapecode/slc.hpp"
#include "support/oracles.hpp"

using namespace shapecode;

namespace {

BitStream bits(const std::string& s) {
  BitStream out;
  for (char c : s)
    if (c == '0' || c == '1') out.push_back(static_cast<uint8_t>(c - '0'));
  return out;
}

std::string str(const BitStream& s) {
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) out += static_cast<char>('0' + s[i]);
  return out;
}

}  // namespace

TEST_CASE("Example 1 stream encodes to the hand-traced codeword sequence") {
  const BitStream data = bits("10.11.00.10.11.10.00");
  const BitStream code = slc_encode(data, 2);
  CHECK(str(code) == "01000101011001");
  CHECK(code.size() == data.size());  // rate 1
  CHECK(str(slc_decode(code, 2)) == str(data));
}

TEST_CASE("all-ones data stays all-ones once the word reaches the top rank") {
  // The fresh dictionary is lexicographic, so the word 1 starts at the last
  // rank and the very first output is the expensive codeword 0; from the
  // second word on, 1 holds rank 1 and maps to itself.
  BitStream ones;
  for (int i = 0; i < 64; ++i) ones.push_back(1);
  const BitStream code = slc_encode(ones, 1);
  CHECK(code[0] == 0);
  for (size_t i = 1; i < code.size(); ++i) CHECK(code[i] == 1);
}

TEST_CASE("empty stream round-trips") {
  CHECK(slc_encode(BitStream{}, 4).empty());
  CHECK(slc_decode(BitStream{}, 4).empty());
}

TEST_CASE("round trip identity on random streams") {
  std::mt19937_64 rng(11);
  for (int m : {1, 2, 4, 8}) {
    for (int rep = 0; rep < 20; ++rep) {
      const size_t words = 1 + rng() % 200;
      const BitStream data = testing::random_bitstream(words * static_cast<size_t>(m), rng);
      const BitStream code = slc_encode(data, m);
      CHECK(code.size() == data.size());
      CHECK(slc_decode(code, m) == data);
    }
  }
}

TEST_CASE("noisy code streams still decode to some stream of equal length") {
  std::mt19937_64 rng(13);
  const BitStream garbage = testing::random_bitstream(8 * 100, rng);
  const BitStream decoded = slc_decode(garbage, 4);
  CHECK(decoded.size() == garbage.size());
}

TEST_CASE("length that is not a multiple of m is rejected unless padded") {
  BitStream data = bits("101");
  CHECK_THROWS_AS(slc_encode(data, 2), std::invalid_argument);
  const BitStream padded = pad_with_ones(data, 2);
  CHECK(padded.size() == 4);
  CHECK(padded[3] == 1);
  CHECK_NOTHROW(slc_encode(padded, 2));
}

TEST_CASE("zero fraction profile counts prefix zeros") {
  const ZeroFractionProfile p = zero_fraction_profile(bits("0011"), {2, 4});
  CHECK(p.fractions == std::vector<double>{1.0, 0.5});
  CHECK_THROWS_AS(zero_fraction_profile(bits("0011"), {5}), std::out_of_range);
  CHECK_THROWS_AS(zero_fraction_profile(bits("0011"), {2, 2}), std::invalid_argument);
}

TEST_CASE("shaping shrinks the zero fraction of English-like text, monotonically in m") {
  const std::string text = testing::synthetic_english_text(96 * 1024);
  const BitStream data = BitStream::from_bytes({text.begin(), text.end()});
  const double uncoded =
      zero_fraction_profile(data, {data.size()}).fractions[0];
  double previous = uncoded;
  for (int m : {2, 4, 8}) {
    const BitStream code = slc_encode(data, m);
    const double f = zero_fraction_profile(code, {code.size()}).fractions[0];
    CHECK(f < previous);
    previous = f;
  }
  CHECK(uncoded > 0.45);  // ASCII text is zero-heavy
}

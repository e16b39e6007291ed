#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "shapecode/mlc.hpp"
#include "support/oracles.hpp"

using namespace shapecode;

namespace {

uint32_t wv(const char* s) { return BitWord::from_string(s).value(); }

const MlcCostModel kUnitModel{{0, 1, 1, 2}};
const MlcCostModel kEmpiricalModel{{0, 0.58, 0.87, 1.29}};

}  // namespace

TEST_CASE("gray mapping of bit pairs to levels") {
  CHECK(level_of(1, 1) == 0);
  CHECK(level_of(1, 0) == 1);
  CHECK(level_of(0, 0) == 2);
  CHECK(level_of(0, 1) == 3);
}

TEST_CASE("cost model validation") {
  CHECK_NOTHROW(kEmpiricalModel.validate());
  CHECK_THROWS_AS((MlcCostModel{{1, 0, 2, 3}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((MlcCostModel{{0, -1, 1, 2}}.validate()), std::invalid_argument);
}

TEST_CASE("cost polynomial of a lower-page suffix") {
  // Example 2: suffix 10 under [0,1,1,2] gives (1+x)(x+x^2) = x + 2x^2 + x^3.
  const CostPolynomial p = cost_polynomial(wv("10"), 2, kUnitModel);
  CHECK(p == CostPolynomial{{100, 1}, {200, 2}, {300, 1}});

  CHECK(cost_polynomial(0, 0, kUnitModel) == CostPolynomial{{0, 1}});

  const CostPolynomial full = cost_polynomial(wv("1110"), 4, kUnitModel);
  CHECK(full == CostPolynomial{{100, 1}, {200, 4}, {300, 6}, {400, 4}, {500, 1}});
}

TEST_CASE("cost polynomial coefficients match brute-force enumeration") {
  std::mt19937_64 rng(3);
  for (int m : {2, 3, 4}) {
    for (int rep = 0; rep < 4; ++rep) {
      const uint32_t v = static_cast<uint32_t>(rng()) & ((1u << m) - 1);
      const auto classes = testing::brute_force_cost_classes(v, m, kEmpiricalModel.level_costs);
      const CostPolynomial poly = cost_polynomial(v, m, kEmpiricalModel);
      REQUIRE(poly.size() == classes.size());
      for (const auto& [cost, members] : classes) CHECK(poly.at(cost) == members.size());
    }
  }
}

TEST_CASE("prefix-conditioned counts follow the suffix polynomial") {
  const EnumerativeIndexer idx(wv("1110"), 4, kUnitModel);
  CHECK(idx.count_with_prefix(2.0, {1, 1}) == 2);  // Example 2
  CHECK(idx.count_with_prefix(1.0, {}) == 1);
  CHECK(idx.count_with_prefix(0.5, {}) == 0);  // below the minimum cost
}

TEST_CASE("enumerative encode reproduces the ordered dictionary for v=1110") {
  const EnumerativeIndexer idx(wv("1110"), 4, kUnitModel);

  CHECK(idx.class_costs() == std::vector<double>{1, 2, 3, 4, 5});
  CHECK(idx.class_sizes() == std::vector<uint64_t>{1, 4, 6, 4, 1});
  CHECK(idx.class_cumulative() == std::vector<uint64_t>{1, 5, 11, 15, 16});

  CHECK(idx.encode(1) == wv("1110"));  // lowest-cost word, cell word 0002
  CHECK(idx.word_cost(wv("1110")) == doctest::Approx(1.0));
  CHECK(idx.encode(2) == wv("0110"));  // first cost-2 word in 0-first order

  // cell word of index 1 is 0002
  const uint32_t y1 = idx.encode(1);
  std::vector<int> levels;
  for (int i = 0; i < 4; ++i)
    levels.push_back(level_of((wv("1110") >> (3 - i)) & 1, (y1 >> (3 - i)) & 1));
  CHECK(levels == std::vector<int>{0, 0, 0, 2});
}

TEST_CASE("cost classes match the published ordered list for v=1110") {
  const EnumerativeIndexer idx(wv("1110"), 4, kUnitModel);
  const std::vector<std::set<uint32_t>> published = {
      {wv("1110")},
      {wv("1111"), wv("1100"), wv("1010"), wv("0110")},
      {wv("1101"), wv("1011"), wv("0111"), wv("1000"), wv("0100"), wv("0010")},
      {wv("1001"), wv("0101"), wv("0011"), wv("0000")},
      {wv("0001")}};
  uint64_t index = 1;
  for (size_t c = 0; c < published.size(); ++c) {
    std::set<uint32_t> got;
    for (uint64_t k = 0; k < idx.class_sizes()[c]; ++k) got.insert(idx.encode(index++));
    CHECK(got == published[c]);
  }
}

TEST_CASE("all-ones lower word makes the all-ones upper word cheapest") {
  for (int m : {2, 4}) {
    const uint32_t ones = (1u << m) - 1;
    const EnumerativeIndexer idx(ones, m, kUnitModel);
    CHECK(idx.encode(1) == ones);
  }
}

TEST_CASE("encode cost is non-decreasing in the index for every lower word") {
  for (uint32_t v = 0; v < 16; ++v) {
    const EnumerativeIndexer idx(v, 4, kUnitModel);
    double prev = -1.0;
    for (uint64_t i = 1; i <= 16; ++i) {
      const double c = idx.word_cost(idx.encode(i));
      CHECK(c >= prev);
      prev = c;
    }
  }
}

TEST_CASE("rank and encode are mutually inverse bijections") {
  for (int m : {2, 3, 4}) {
    const uint32_t n = 1u << m;
    for (uint32_t v = 0; v < n; ++v) {
      const EnumerativeIndexer idx(v, m, kEmpiricalModel);
      std::set<uint64_t> ranks;
      for (uint32_t y = 0; y < n; ++y) {
        const uint64_t i = idx.rank(y);
        CHECK(idx.encode(i) == y);
        ranks.insert(i);
      }
      CHECK(ranks.size() == n);
      CHECK(*ranks.begin() == 1);
      CHECK(*ranks.rbegin() == n);
      for (uint64_t i = 1; i <= n; ++i) CHECK(idx.rank(idx.encode(i)) == i);
    }
  }
  CHECK(EnumerativeIndexer(wv("1110"), 4, kUnitModel).rank(wv("1110")) == 1);
  CHECK(EnumerativeIndexer(wv("1110"), 4, kUnitModel).rank(wv("0110")) == 2);
}

TEST_CASE("enumerative index bounds are enforced") {
  const EnumerativeIndexer idx(wv("1110"), 4, kUnitModel);
  CHECK_THROWS_AS(idx.encode(0), std::out_of_range);
  CHECK_THROWS_AS(idx.encode(17), std::out_of_range);
}

TEST_CASE("MLC round trip on random streams") {
  std::mt19937_64 rng(17);
  for (int m : {2, 4}) {
    for (int rep = 0; rep < 10; ++rep) {
      const size_t words = 1 + rng() % 150;
      const BitStream lower = testing::random_bitstream(words * static_cast<size_t>(m), rng);
      const BitStream upper = testing::random_bitstream(words * static_cast<size_t>(m), rng);
      const auto [lc, uc] = mlc_encode(lower, upper, m, kEmpiricalModel);
      CHECK(lc.size() == lower.size());
      CHECK(uc.size() == upper.size());
      const auto [ld, ud] = mlc_decode(lc, uc, m, kEmpiricalModel);
      CHECK(ld == lower);
      CHECK(ud == upper);
    }
  }
}

TEST_CASE("stream length mismatch is rejected") {
  std::mt19937_64 rng(1);
  const BitStream a = testing::random_bitstream(8, rng);
  CHECK_THROWS_AS(mlc_encode(a, BitStream{}, 2, kUnitModel), std::invalid_argument);
}

TEST_CASE("all-ones lower page reduces upper coding to SLC with a remapped output list") {
  // With every lower bit 1, the upper page sees per-bit costs (c1 for 0, c0
  // for 1) and the enumerative order becomes a fixed output list.
  const int m = 4;
  const uint32_t n = 1u << m;
  const uint32_t ones = n - 1;
  const EnumerativeIndexer idx(ones, m, kUnitModel);
  std::vector<uint32_t> order(n);
  std::vector<double> costs(n);
  for (uint64_t i = 1; i <= n; ++i) {
    order[i - 1] = idx.encode(i);
    costs[i - 1] = idx.word_cost(order[i - 1]);
  }
  SlcEncoder remapped(output_list_from_order(m, order, costs));

  std::mt19937_64 rng(23);
  const size_t words = 300;
  BitStream lower;
  for (size_t i = 0; i < words * m; ++i) lower.push_back(1);
  const BitStream upper = testing::random_bitstream(words * m, rng);
  const auto [lc, uc] = mlc_encode(lower, upper, m, kUnitModel);

  // Word 1 finds the all-ones word at the last lexicographic rank, so its
  // lower codeword is 0000; every later word sees it at rank 1.
  CHECK(lc.word_value(0, m) == 0);
  for (size_t k = 1; k < words; ++k) CHECK(lc.word_value(k, m) == ones);

  // From word 2 on, the upper page runs the v=1111 dictionary, which matches
  // a fresh SLC encoder over the enumerative output order.
  for (size_t k = 1; k < words; ++k)
    CHECK(uc.word_value(k, m) == remapped.encode_word(upper.word_value(k, m)));
}

TEST_CASE("corrupting one upper codeword only disturbs that lower codeword's dictionary") {
  const int m = 2;
  std::mt19937_64 rng(29);
  const size_t words = 400;
  const BitStream lower = testing::random_bitstream(words * m, rng);
  const BitStream upper = testing::random_bitstream(words * m, rng);
  const auto [lc, uc] = mlc_encode(lower, upper, m, kUnitModel);

  BitStream corrupted = uc;
  const size_t target_word = 150;
  corrupted[target_word * m] ^= 1u;  // flip one upper-page bit
  const uint32_t affected_v = lc.word_value(target_word, m);

  MlcDecoder clean(m, kUnitModel), noisy(m, kUnitModel);
  for (size_t k = 0; k < words; ++k) {
    clean.decode_pair(lc.word_value(k, m), uc.word_value(k, m));
    noisy.decode_pair(lc.word_value(k, m), corrupted.word_value(k, m));
  }
  for (uint32_t v = 0; v < 4; ++v) {
    const auto* a = clean.upper_dictionary(v);
    const auto* b = noisy.upper_dictionary(v);
    if (v == affected_v) {
      REQUIRE(a != nullptr);
      REQUIRE(b != nullptr);
      CHECK_FALSE(*a == *b);
    } else if (a && b) {
      CHECK(*a == *b);
    }
  }
}

TEST_CASE("level fractions sum to one and reproduce the average cost") {
  std::mt19937_64 rng(31);
  const BitStream lower = testing::random_bitstream(4000, rng);
  const BitStream upper = testing::random_bitstream(4000, rng);
  const std::vector<uint8_t> levels = cell_levels(lower, upper);
  const LevelFractionProfile p = level_fraction_profile(levels, {1000, 4000}, kEmpiricalModel);
  for (size_t i = 0; i < p.checkpoints.size(); ++i) {
    double sum = 0.0;
    for (int level = 0; level < 4; ++level) sum += p.fractions[static_cast<size_t>(level)][i];
    CHECK(sum == doctest::Approx(1.0));
  }
  std::vector<uint8_t> prefix(levels.begin(), levels.begin() + 1000);
  CHECK(p.avg_costs[0] == doctest::Approx(average_cell_cost(prefix, kEmpiricalModel)));

  const std::vector<uint8_t> zeros(100, 0);
  const LevelFractionProfile z = level_fraction_profile(zeros, {100}, kEmpiricalModel);
  CHECK(z.fractions[0][0] == 1.0);
  CHECK(z.fractions[1][0] == 0.0);
  CHECK(z.avg_costs[0] == 0.0);
}

TEST_CASE("per-word cell cost falls with input frequency rank by construction") {
  // Feed a heavily skewed upper-page source and check the dominant word ends
  // up on the cheapest codewords once the dictionary has adapted.
  const int m = 2;
  MlcEncoder enc(m, kUnitModel);
  uint32_t dominant = wv("01");
  for (int k = 0; k < 50; ++k) enc.encode_pair(wv("11"), dominant);
  const EnumerativeIndexer idx(wv("11"), m, kUnitModel);
  const auto [lc, uc] = enc.encode_pair(wv("11"), dominant);
  CHECK(idx.word_cost(uc) == idx.class_costs().front());
}

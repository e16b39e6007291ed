#include <cmath>

#include "doctest.h"
#include "shapecode/channel.hpp"
#include "support/oracles.hpp"

using namespace shapecode;

namespace {

std::mt19937_64 test_rng(uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace

TEST_CASE("BSC with rho=0 is the identity") {
  auto rng = test_rng(1);
  const BitStream s = testing::random_bitstream(4096, rng);
  CHECK(bsc_transmit(s, {0.0, 42}) == s);
}

TEST_CASE("BSC is deterministic per seed and flips at the expected rate") {
  auto rng = test_rng(2);
  const BitStream s = testing::random_bitstream(200000, rng);
  const BitStream a = bsc_transmit(s, {0.4, 987});
  const BitStream b = bsc_transmit(s, {0.4, 987});
  CHECK(a == b);
  const BitStream c = bsc_transmit(s, {0.4, 988});
  CHECK_FALSE(a == c);

  size_t flips = 0;
  for (size_t i = 0; i < s.size(); ++i) flips += a[i] != s[i];
  const double rate = static_cast<double>(flips) / static_cast<double>(s.size());
  const double sigma = std::sqrt(0.4 * 0.6 / static_cast<double>(s.size()));
  CHECK(std::abs(rate - 0.4) < 4.0 * sigma);

  CHECK_THROWS_AS(bsc_transmit(s, {0.5, 1}), std::invalid_argument);
}

TEST_CASE("source sampling hits the requested distribution") {
  const std::vector<double> P{0.4, 0.3, 0.2, 0.1};
  const auto words = sample_source_words(P, 2, 100000, 5);
  // value-descending assignment: 11 gets 0.4, 00 gets 0.1
  std::array<size_t, 4> tally{};
  for (uint32_t w : words) ++tally[w];
  CHECK(std::abs(static_cast<double>(tally[3]) / 100000.0 - 0.4) < 0.01);
  CHECK(std::abs(static_cast<double>(tally[0]) / 100000.0 - 0.1) < 0.01);
  CHECK(sample_source_words(P, 2, 64, 5) == sample_source_words(P, 2, 64, 5));
}

TEST_CASE("a single-word source never recurs after the first word") {
  const std::vector<uint32_t> words(500, 3u);  // P = {1, 0, 0, 0} on word 11
  const EncodeTrace trace = trace_encode_recurrences(words, 2);
  CHECK(trace.events.empty());
  CHECK(trace.code_words.size() == 500);
}

TEST_CASE("Example 1's stream touches zero distances at the hand-traced steps") {
  std::vector<uint32_t> words;
  for (const char* w : {"10", "11", "00", "10", "11", "10", "00"})
    words.push_back(BitWord::from_string(w).value());

  const EncodeTrace trace = trace_encode_recurrences(words, 2);
  REQUIRE(trace.events.size() == 4);
  CHECK(trace.events[0].t == 2);
  CHECK(trace.events[0].pair == 1);
  CHECK(trace.events[1].t == 3);
  CHECK(trace.events[1].pair == 2);
  CHECK(trace.events[2].t == 5);
  CHECK(trace.events[2].pair == 1);
  CHECK(trace.events[3].t == 7);
  CHECK(trace.events[3].pair == 2);
  // the final recurrence is between words 00 and 11
  CHECK(trace.events[3].upper_word == BitWord::from_string("00").value());
  CHECK(trace.events[3].lower_word == BitWord::from_string("11").value());

  const EncodeTrace watched = trace_encode_recurrences(words, 2, /*watch_start=*/4);
  REQUIRE(watched.events.size() == 2);
  CHECK(watched.events[0].t == 5);

  const EncodeTrace stopped = trace_encode_recurrences(words, 2, 0, /*stop_at_first=*/true);
  REQUIRE(stopped.events.size() == 1);
  CHECK(stopped.events[0].t == 2);
  CHECK(stopped.code_words.size() == 2);
}

TEST_CASE("instability protocol: small conditioning times are almost surely unstable") {
  InstabilityConfig config;
  config.P = {0.4, 0.3, 0.2, 0.1};
  config.m = 2;
  config.rho = 0.05;
  config.t_grid = {3, 40};
  config.trials = 80;
  config.seed = 11;
  config.sequence_words = 800;
  const TrialBatch batch = estimate_instability(config);
  REQUIRE(batch.fractions.size() == 2);
  CHECK(batch.fractions[0] >= 0.95);         // t < 6: no strict ordering exists yet
  CHECK(batch.fractions[1] <= batch.fractions[0]);
  CHECK(batch.time_unit == "words");

  const TrialBatch again = estimate_instability(config);
  CHECK(again.fractions == batch.fractions);  // deterministic per (config, seed)
}

TEST_CASE("instability protocol validates inputs") {
  InstabilityConfig config;
  config.P = {0.6, 0.3, 0.2, 0.1};  // sums to 1.2
  config.t_grid = {10};
  CHECK_THROWS_AS(estimate_instability(config), std::invalid_argument);
  config.P = {0.4, 0.3, 0.2, 0.1};
  config.t_grid = {900};
  config.sequence_words = 800;
  CHECK_THROWS_AS(estimate_instability(config), std::invalid_argument);
}

TEST_CASE("corpus decode recurrence runs on synthetic text") {
  const std::string text = testing::synthetic_english_text(12000);
  const BitStream corpus = BitStream::from_bytes({text.begin(), text.end()});

  CorpusDecodeConfig config;
  config.m = 2;
  config.rho = 0.05;
  config.t_grid = {50, 2500};
  config.trials = 30;
  config.seed = 3;
  config.prefix_bytes = 10000;
  const TrialBatch batch = estimate_corpus_decode_recurrence(corpus, config);
  REQUIRE(batch.fractions.size() == 2);
  for (double f : batch.fractions) {
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
  }
  CHECK(batch.fractions[1] <= batch.fractions[0] + 0.2);

  config.trials = 0;
  const TrialBatch empty = estimate_corpus_decode_recurrence(corpus, config);
  CHECK(empty.fractions.empty());
  CHECK(empty.trials == 0);

  CorpusDecodeConfig tiny = config;
  tiny.prefix_bytes = 1u << 20;
  CHECK_THROWS_AS(estimate_corpus_decode_recurrence(corpus, tiny), std::invalid_argument);
}

TEST_CASE("noiseless trials with well-separated sources rarely recur at large t") {
  InstabilityConfig config;
  config.P = {0.4, 0.3, 0.2, 0.1};
  config.m = 2;
  config.rho = 0.0;
  config.t_grid = {500};
  config.trials = 60;
  config.seed = 21;
  config.sequence_words = 2000;
  const TrialBatch batch = estimate_instability(config);
  CHECK(batch.fractions[0] < 0.2);
}

TEST_CASE("heavier read noise slows the decoder's recurrence decay") {
  const std::string text = testing::synthetic_english_text(12000);
  const BitStream corpus = BitStream::from_bytes({text.begin(), text.end()});
  CorpusDecodeConfig config;
  config.m = 2;
  config.t_grid = {400};
  config.trials = 120;
  config.seed = 77;
  config.prefix_bytes = 10000;

  std::vector<double> fractions;
  for (double rho : {0.01, 0.05, 0.1}) {
    config.rho = rho;
    fractions.push_back(estimate_corpus_decode_recurrence(corpus, config).fractions[0]);
  }
  // same noise-uniform streams per trial, so flip sets grow with rho
  CHECK(fractions[0] <= fractions[1] + 0.05);
  CHECK(fractions[1] <= fractions[2] + 0.05);
}

TEST_CASE("seed derivation separates streams") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(7, 9) == derive_seed(7, 9));
}

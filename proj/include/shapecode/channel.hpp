#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shapecode/bitword.hpp"
#include "shapecode/propagation.hpp"

namespace shapecode {

// Binary symmetric channel with crossover probability rho < 0.5 and a fixed
// 64-bit seed.
struct ChannelSpec {
  double rho = 0.0;
  uint64_t seed = 0;
};

// Stable seed derivation for trial streams: identical (master, stream) pairs
// produce identical sub-seeds on every platform, so trials can run in any
// order or in parallel without changing results.
uint64_t derive_seed(uint64_t master, uint64_t stream);

// Flips each bit independently with probability rho; deterministic per spec.
BitStream bsc_transmit(const BitStream& bits, const ChannelSpec& spec);

// Draws i.i.d. words from the sorted distribution P. Bit patterns are
// assigned to probabilities in descending word value order unless an explicit
// assignment is given.
std::vector<uint32_t> sample_source_words(const std::vector<double>& P, int m, uint64_t count,
                                          uint64_t seed, std::vector<uint32_t> words = {});

struct RecurrenceEvent {
  enum class Side { encoder, decoder };
  uint64_t t = 0;       // word index (1-based) of the step that caused the event
  uint32_t pair = 0;    // 1-based adjacent pair index
  uint32_t upper_word = 0;  // entry at rank `pair` when the counts met
  uint32_t lower_word = 0;  // entry at rank `pair`+1
  Side side = Side::encoder;
};

struct EncodeTrace {
  std::vector<uint32_t> code_words;
  std::vector<RecurrenceEvent> events;
};

// Runs the shaping encoder over the word sequence and records a recurrence
// event whenever an adjacent count distance drops from nonzero to zero (the
// moment two counts become equal). Events are recorded only for steps
// strictly after watch_start.
EncodeTrace trace_encode_recurrences(const std::vector<uint32_t>& source_words, int m,
                                     uint64_t watch_start = 0, bool stop_at_first = false);

struct TrialBatch {
  std::vector<uint64_t> t_grid;
  std::vector<double> fractions;
  std::vector<double> std_errors;
  uint64_t trials = 0;
  std::string time_unit = "words";  // t values count data words, not bits
};

struct InstabilityConfig {
  std::vector<double> P;
  int m = 2;
  double rho = 0.05;
  std::vector<uint64_t> t_grid;
  uint64_t trials = 2000;
  uint64_t seed = 1;
  uint64_t sequence_words = 20000;
  std::vector<uint32_t> word_assignment;  // optional explicit pattern order
};

// The five-step protocol: draw an i.i.d. source sequence, encode it watching
// for encoder recurrences after t, transmit through BSC(rho), decode with the
// first t words forced noise-free, and watch for decoder recurrences after t.
// Returns the fraction of trials that declared a recurrence for each t. The
// same trial seeds serve every t value (common random numbers).
TrialBatch estimate_instability(const InstabilityConfig& config);

struct CorpusDecodeConfig {
  int m = 2;
  double rho = 0.05;
  std::vector<uint64_t> t_grid;
  uint64_t trials = 2000;
  uint64_t seed = 1;
  uint64_t prefix_bytes = 10000;
};

// Decoder-side recurrence probability P_d(t) of a real data prefix: encode the
// corpus prefix once, then per trial corrupt it through BSC(rho) and decode
// with the first t words clean, watching for decoder recurrences after t.
TrialBatch estimate_corpus_decode_recurrence(const BitStream& corpus,
                                             const CorpusDecodeConfig& config);

// Direct Monte Carlo estimate of the pair-walk recurrence probability: the
// chance that either coordinate of the (ne, nd) walk reaches 0. Trials stop
// as non-recurrent once both coordinates exceed escape_distance, where the
// residual hitting probability is negligible.
double mc_pair_walk_recurrence(const PairWalkModel& model, int ne0, int nd0, uint64_t trials,
                               uint64_t seed, int escape_distance = 80);

}  // namespace shapecode

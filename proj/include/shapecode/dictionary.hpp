#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "shapecode/bitword.hpp"

namespace shapecode {

// Fixed list of all 2^m codewords ordered by non-decreasing total cost.
struct OutputList {
  int m = 0;
  std::vector<uint32_t> words;    // rank -> word value
  std::vector<double> costs;      // rank -> total cost, non-decreasing
  std::vector<uint32_t> rank_of;  // word value -> rank

  bool empty() const { return words.empty(); }
};

// All 2^m words sorted by total per-symbol cost ascending; ties broken by
// descending word value. The defaults give the SLC model where a 0 symbol
// costs 1 and a 1 symbol costs 0, so for m=2 the list is {11,10,01,00}.
OutputList canonical_output_list(int m, double zero_cost = 1.0, double one_cost = 0.0);

// Wraps an explicit rank->word order (must be a permutation of all 2^m words
// with non-decreasing costs).
OutputList output_list_from_order(int m, std::vector<uint32_t> words, std::vector<double> costs);

// The adaptive encoding dictionary: a frequency-ordered list of all 2^m input
// words with counts (non-increasing), optionally paired with an output list.
// Lookup and update follow the frequency-ranked update rule: after a word's
// count is incremented, its entry moves above every entry whose count is less
// than or equal to the new count (so it jumps above equal-count peers).
class AdaptiveDictionary {
 public:
  // Rank-only dictionary: entries in ascending lexicographic order, counts 0.
  explicit AdaptiveDictionary(int m);
  // Dictionary with a codeword list attached (output.m must equal m).
  AdaptiveDictionary(int m, OutputList output);

  int m() const { return m_; }
  uint32_t size() const { return static_cast<uint32_t>(word_at_rank_.size()); }
  bool has_output() const { return !output_.empty(); }
  const OutputList& output() const { return output_; }

  uint32_t word_at(uint32_t rank) const { return word_at_rank_[rank]; }
  uint64_t count_at(uint32_t rank) const { return count_at_rank_[rank]; }
  uint32_t rank_of(uint32_t word) const { return rank_of_word_[word]; }
  uint64_t words_processed() const { return processed_; }

  // Increments the word's count and reorders. Returns {new_rank, old_rank};
  // the entries previously at ranks [new_rank, old_rank) shift down by one.
  std::pair<uint32_t, uint32_t> promote(uint32_t word);

  // Maps the input word to the codeword at its current rank, then updates.
  uint32_t encode_step(uint32_t word);
  // Maps the codeword to the input word at the codeword's rank, then updates.
  uint32_t decode_step(uint32_t codeword);

  // Adjacent count distances N_i = n_i - n_{i+1}, i = 1..2^m-1.
  std::vector<uint64_t> distances() const;
  uint64_t distance(uint32_t i) const {  // 0-based adjacent index
    return count_at_rank_[i] - count_at_rank_[i + 1];
  }
  bool has_zero_adjacent_distance() const;

  // Same entry order and counts (output lists are not compared).
  friend bool operator==(const AdaptiveDictionary& a, const AdaptiveDictionary& b) {
    return a.word_at_rank_ == b.word_at_rank_ && a.count_at_rank_ == b.count_at_rank_;
  }

 private:
  int m_ = 1;
  uint64_t processed_ = 0;
  std::vector<uint32_t> word_at_rank_;
  std::vector<uint64_t> count_at_rank_;
  std::vector<uint32_t> rank_of_word_;
  OutputList output_;
};

}  // namespace shapecode

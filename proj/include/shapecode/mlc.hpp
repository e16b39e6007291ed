#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shapecode/bitword.hpp"
#include "shapecode/dictionary.hpp"
#include "shapecode/slc.hpp"

namespace shapecode {

// Maps a (lower bit, upper bit) pair to the programmed cell level via the
// Gray code 11->0, 10->1, 00->2, 01->3.
inline int level_of(int lower_bit, int upper_bit) {
  return lower_bit ? (upper_bit ? 0 : 1) : (upper_bit ? 3 : 2);
}

// Per-level wear costs [c0..c3]. Cost keys used by the enumerative coder are
// quantized to multiples of 0.01 so cost classes stay exact for models such
// as [0, 0.58, 0.87, 1.29].
struct MlcCostModel {
  std::array<double, 4> level_costs{0.0, 0.0, 0.0, 0.0};

  void validate() const;
  int64_t centi(int level) const;
  int64_t pair_centi(int lower_bit, int upper_bit) const { return centi(level_of(lower_bit, upper_bit)); }
  double cost(int level) const { return level_costs[static_cast<size_t>(level)]; }
};

// Coefficients of the completion-cost polynomial: quantized cost -> number of
// upper-bit completions with that total cell cost.
using CostPolynomial = std::map<int64_t, uint64_t>;

// Polynomial for the lower-page suffix bits [v_1..v_len] (one factor per bit:
// (x^c0 + x^c1) when the lower bit is 1, (x^c2 + x^c3) when it is 0).
CostPolynomial cost_polynomial(uint32_t v_suffix, int suffix_len, const MlcCostModel& model);

// Enumerative (rank <-> word) coder for the upper page under a fixed lower
// page codeword. Ranks are 1-based and enumerate upper words in non-decreasing
// cell cost order; within a cost class, words with a 0 in the first differing
// position come first.
class EnumerativeIndexer {
 public:
  EnumerativeIndexer(uint32_t lower_word, int m, const MlcCostModel& model);

  // n(v, C, y_1..y_k): number of upper words with total cost C whose first k
  // bits equal the prefix. C is quantized to the model's 0.01 grid.
  uint64_t count_with_prefix(double total_cost, const std::vector<int>& prefix) const;

  uint32_t encode(uint64_t index) const;   // rank in [1, 2^m] -> upper word
  uint64_t rank(uint32_t upper_word) const;  // inverse of encode

  double word_cost(uint32_t upper_word) const;

  const std::vector<double>& class_costs() const { return class_costs_; }
  const std::vector<uint64_t>& class_sizes() const { return class_sizes_; }
  // n(v, C_j): number of upper words with cost <= C_j; final entry is 2^m.
  const std::vector<uint64_t>& class_cumulative() const { return class_cumulative_; }

  uint32_t lower_word() const { return lower_word_; }
  int m() const { return m_; }

 private:
  int64_t prefix_centi(uint32_t bits_used, const std::vector<int>& prefix) const;
  uint64_t suffix_coefficient(int k, int64_t degree) const;

  uint32_t lower_word_;
  int m_;
  MlcCostModel model_;
  std::vector<CostPolynomial> suffix_polys_;  // index k: polynomial over bits k+1..m
  std::vector<int64_t> class_centi_;
  std::vector<double> class_costs_;
  std::vector<uint64_t> class_sizes_;
  std::vector<uint64_t> class_cumulative_;
};

// MLC shaping codec: plain SLC shaping on the lower page, lower-page-dependent
// adaptive dictionaries with enumerative output on the upper page.
class MlcEncoder {
 public:
  MlcEncoder(int m, MlcCostModel model);

  // Returns (lower codeword, upper codeword) for one word pair.
  std::pair<uint32_t, uint32_t> encode_pair(uint32_t lower_word, uint32_t upper_word);

  const AdaptiveDictionary* upper_dictionary(uint32_t lower_code) const;
  int m() const { return m_; }

 private:
  int m_;
  MlcCostModel model_;
  SlcEncoder lower_;
  std::unordered_map<uint32_t, AdaptiveDictionary> upper_dicts_;
  std::unordered_map<uint32_t, EnumerativeIndexer> indexers_;

  friend class MlcDecoder;
};

class MlcDecoder {
 public:
  MlcDecoder(int m, MlcCostModel model);

  // Decodes one (lower, upper) codeword pair. The upper dictionary is keyed
  // by the received lower codeword, mirroring the encoder's page dependency.
  std::pair<uint32_t, uint32_t> decode_pair(uint32_t lower_code, uint32_t upper_code);

  const AdaptiveDictionary* upper_dictionary(uint32_t lower_code) const;
  std::vector<uint32_t> upper_dictionary_keys() const;
  int m() const { return m_; }

 private:
  int m_;
  MlcCostModel model_;
  SlcDecoder lower_;
  std::unordered_map<uint32_t, AdaptiveDictionary> upper_dicts_;
  std::unordered_map<uint32_t, EnumerativeIndexer> indexers_;
};

// Whole-stream MLC encode/decode. Streams must hold the same number of m-bit
// words.
std::pair<BitStream, BitStream> mlc_encode(const BitStream& lower_data, const BitStream& upper_data,
                                           int m, const MlcCostModel& model);
std::pair<BitStream, BitStream> mlc_decode(const BitStream& lower_code, const BitStream& upper_code,
                                           int m, const MlcCostModel& model);

// Per-cell levels of a programmed (lower, upper) page pair.
std::vector<uint8_t> cell_levels(const BitStream& lower, const BitStream& upper);

double average_cell_cost(const std::vector<uint8_t>& levels, const MlcCostModel& model);

struct LevelFractionProfile {
  std::vector<uint64_t> checkpoints;               // prefix lengths in cells
  std::array<std::vector<double>, 4> fractions;    // one series per level
  std::vector<double> avg_costs;
};

LevelFractionProfile level_fraction_profile(const std::vector<uint8_t>& levels,
                                            std::vector<uint64_t> checkpoints,
                                            const MlcCostModel& model);

}  // namespace shapecode

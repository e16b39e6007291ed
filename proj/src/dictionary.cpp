#include "shapecode/dictionary.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace shapecode {

OutputList canonical_output_list(int m, double zero_cost, double one_cost) {
  check_word_length(m);
  if (!std::isfinite(zero_cost) || !std::isfinite(one_cost) || zero_cost < 0.0 || one_cost < 0.0)
    throw std::invalid_argument("symbol costs must be finite and non-negative");

  const uint32_t n = 1u << m;
  std::vector<uint32_t> words(n);
  std::iota(words.begin(), words.end(), 0u);

  std::vector<double> word_cost(n);
  for (uint32_t w = 0; w < n; ++w) {
    const int ones = std::popcount(w);
    word_cost[w] = one_cost * ones + zero_cost * (m - ones);
  }

  std::sort(words.begin(), words.end(), [&](uint32_t a, uint32_t b) {
    if (word_cost[a] != word_cost[b]) return word_cost[a] < word_cost[b];
    return a > b;
  });

  std::vector<double> costs(n);
  for (uint32_t r = 0; r < n; ++r) costs[r] = word_cost[words[r]];
  return output_list_from_order(m, std::move(words), std::move(costs));
}

OutputList output_list_from_order(int m, std::vector<uint32_t> words, std::vector<double> costs) {
  check_word_length(m);
  const uint32_t n = 1u << m;
  if (words.size() != n || costs.size() != n)
    throw std::invalid_argument("output list must contain all 2^m words with costs");
  OutputList out;
  out.m = m;
  out.rank_of.assign(n, n);
  for (uint32_t r = 0; r < n; ++r) {
    if (words[r] >= n || out.rank_of[words[r]] != n)
      throw std::invalid_argument("output list words must be a permutation of all 2^m words");
    if (r > 0 && costs[r] < costs[r - 1])
      throw std::invalid_argument("output list costs must be non-decreasing");
    out.rank_of[words[r]] = r;
  }
  out.words = std::move(words);
  out.costs = std::move(costs);
  return out;
}

AdaptiveDictionary::AdaptiveDictionary(int m) : m_(m) {
  check_word_length(m);
  const uint32_t n = 1u << m;
  word_at_rank_.resize(n);
  std::iota(word_at_rank_.begin(), word_at_rank_.end(), 0u);
  count_at_rank_.assign(n, 0);
  rank_of_word_.resize(n);
  std::iota(rank_of_word_.begin(), rank_of_word_.end(), 0u);
}

AdaptiveDictionary::AdaptiveDictionary(int m, OutputList output) : AdaptiveDictionary(m) {
  if (output.m != m || output.words.size() != word_at_rank_.size())
    throw std::invalid_argument("output list size does not match word length m");
  output_ = std::move(output);
}

std::pair<uint32_t, uint32_t> AdaptiveDictionary::promote(uint32_t word) {
  const uint32_t from = rank_of_word_[word];
  const uint64_t bumped = count_at_rank_[from] + 1;

  // First rank whose count is <= the new count; counts are non-increasing so
  // the predicate is monotone and binary searchable within [0, from].
  uint32_t lo = 0, hi = from;
  while (lo < hi) {
    const uint32_t mid = lo + (hi - lo) / 2;
    if (count_at_rank_[mid] <= bumped)
      hi = mid;
    else
      lo = mid + 1;
  }
  const uint32_t to = lo;

  for (uint32_t r = from; r > to; --r) {
    word_at_rank_[r] = word_at_rank_[r - 1];
    count_at_rank_[r] = count_at_rank_[r - 1];
    rank_of_word_[word_at_rank_[r]] = r;
  }
  word_at_rank_[to] = word;
  count_at_rank_[to] = bumped;
  rank_of_word_[word] = to;
  ++processed_;
  return {to, from};
}

uint32_t AdaptiveDictionary::encode_step(uint32_t word) {
  if (!has_output()) throw std::logic_error("dictionary has no output list attached");
  const uint32_t code = output_.words[rank_of_word_[word]];
  promote(word);
  return code;
}

uint32_t AdaptiveDictionary::decode_step(uint32_t codeword) {
  if (!has_output()) throw std::logic_error("dictionary has no output list attached");
  const uint32_t word = word_at_rank_[output_.rank_of[codeword]];
  promote(word);
  return word;
}

std::vector<uint64_t> AdaptiveDictionary::distances() const {
  std::vector<uint64_t> d(count_at_rank_.size() - 1);
  for (size_t i = 0; i + 1 < count_at_rank_.size(); ++i)
    d[i] = count_at_rank_[i] - count_at_rank_[i + 1];
  return d;
}

bool AdaptiveDictionary::has_zero_adjacent_distance() const {
  for (size_t i = 0; i + 1 < count_at_rank_.size(); ++i)
    if (count_at_rank_[i] == count_at_rank_[i + 1]) return true;
  return false;
}

}  // namespace shapecode

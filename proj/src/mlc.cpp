#include "shapecode/mlc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shapecode {

void MlcCostModel::validate() const {
  for (double c : level_costs)
    if (!std::isfinite(c) || c < 0.0)
      throw std::invalid_argument("level costs must be finite and non-negative");
  for (int i = 0; i + 1 < 4; ++i)
    if (level_costs[static_cast<size_t>(i)] > level_costs[static_cast<size_t>(i + 1)])
      throw std::invalid_argument("level costs must satisfy c0 <= c1 <= c2 <= c3");
}

int64_t MlcCostModel::centi(int level) const {
  return std::llround(level_costs[static_cast<size_t>(level)] * 100.0);
}

CostPolynomial cost_polynomial(uint32_t v_suffix, int suffix_len, const MlcCostModel& model) {
  if (suffix_len < 0 || suffix_len > kMaxWordLength)
    throw std::invalid_argument("suffix length out of range");
  model.validate();
  CostPolynomial poly{{0, 1}};
  for (int i = 0; i < suffix_len; ++i) {
    const int lower_bit = (v_suffix >> (suffix_len - 1 - i)) & 1u;
    const int64_t c_up1 = model.pair_centi(lower_bit, 1);
    const int64_t c_up0 = model.pair_centi(lower_bit, 0);
    CostPolynomial next;
    for (const auto& [deg, coeff] : poly) {
      next[deg + c_up0] += coeff;
      next[deg + c_up1] += coeff;
    }
    poly = std::move(next);
  }
  return poly;
}

EnumerativeIndexer::EnumerativeIndexer(uint32_t lower_word, int m, const MlcCostModel& model)
    : lower_word_(lower_word), m_(m), model_(model) {
  check_word_length(m);
  model.validate();
  if (lower_word >= (1u << m)) throw std::invalid_argument("lower word out of range");

  suffix_polys_.resize(static_cast<size_t>(m) + 1);
  suffix_polys_[static_cast<size_t>(m)] = CostPolynomial{{0, 1}};
  for (int k = m - 1; k >= 0; --k) {
    const int lower_bit = (lower_word >> (m - 1 - k)) & 1u;  // bit k+1 of v (1-based)
    const int64_t c_up1 = model_.pair_centi(lower_bit, 1);
    const int64_t c_up0 = model_.pair_centi(lower_bit, 0);
    CostPolynomial next;
    for (const auto& [deg, coeff] : suffix_polys_[static_cast<size_t>(k) + 1]) {
      next[deg + c_up0] += coeff;
      next[deg + c_up1] += coeff;
    }
    suffix_polys_[static_cast<size_t>(k)] = std::move(next);
  }

  uint64_t cumulative = 0;
  for (const auto& [deg, coeff] : suffix_polys_[0]) {
    cumulative += coeff;
    class_centi_.push_back(deg);
    class_costs_.push_back(static_cast<double>(deg) / 100.0);
    class_sizes_.push_back(coeff);
    class_cumulative_.push_back(cumulative);
  }
}

int64_t EnumerativeIndexer::prefix_centi(uint32_t bits_used, const std::vector<int>& prefix) const {
  int64_t total = 0;
  for (uint32_t i = 0; i < bits_used; ++i) {
    const int lower_bit = (lower_word_ >> (m_ - 1 - static_cast<int>(i))) & 1u;
    total += model_.pair_centi(lower_bit, prefix[i] & 1);
  }
  return total;
}

uint64_t EnumerativeIndexer::suffix_coefficient(int k, int64_t degree) const {
  const auto& poly = suffix_polys_[static_cast<size_t>(k)];
  const auto it = poly.find(degree);
  return it == poly.end() ? 0 : it->second;
}

uint64_t EnumerativeIndexer::count_with_prefix(double total_cost,
                                               const std::vector<int>& prefix) const {
  if (prefix.size() > static_cast<size_t>(m_))
    throw std::invalid_argument("prefix longer than word length");
  const int64_t target = std::llround(total_cost * 100.0);
  return suffix_coefficient(static_cast<int>(prefix.size()),
                            target - prefix_centi(static_cast<uint32_t>(prefix.size()), prefix));
}

uint32_t EnumerativeIndexer::encode(uint64_t index) const {
  const uint64_t total = class_cumulative_.back();
  if (index < 1 || index > total)
    throw std::out_of_range("enumerative index must be in [1, 2^m]");

  size_t j = 0;
  while (class_cumulative_[j] < index) ++j;
  const int64_t class_cost = class_centi_[j];
  uint64_t rank_in_class = index - (j == 0 ? 0 : class_cumulative_[j - 1]);

  uint32_t word = 0;
  int64_t used_cost = 0;
  for (int i = 0; i < m_; ++i) {
    const int lower_bit = (lower_word_ >> (m_ - 1 - i)) & 1u;
    const int64_t zero_cost = used_cost + model_.pair_centi(lower_bit, 0);
    const uint64_t zero_count = suffix_coefficient(i + 1, class_cost - zero_cost);
    if (rank_in_class > zero_count) {
      word = (word << 1) | 1u;
      rank_in_class -= zero_count;
      used_cost += model_.pair_centi(lower_bit, 1);
    } else {
      word <<= 1;
      used_cost = zero_cost;
    }
  }
  return word;
}

uint64_t EnumerativeIndexer::rank(uint32_t upper_word) const {
  if (upper_word >= (1u << m_)) throw std::invalid_argument("upper word out of range");

  int64_t total_cost = 0;
  for (int i = 0; i < m_; ++i) {
    const int lower_bit = (lower_word_ >> (m_ - 1 - i)) & 1u;
    const int upper_bit = (upper_word >> (m_ - 1 - i)) & 1u;
    total_cost += model_.pair_centi(lower_bit, upper_bit);
  }
  const auto it = std::lower_bound(class_centi_.begin(), class_centi_.end(), total_cost);
  const size_t j = static_cast<size_t>(it - class_centi_.begin());

  uint64_t index = (j == 0 ? 0 : class_cumulative_[j - 1]) + 1;
  int64_t used_cost = 0;
  for (int i = 0; i < m_; ++i) {
    const int lower_bit = (lower_word_ >> (m_ - 1 - i)) & 1u;
    const int upper_bit = (upper_word >> (m_ - 1 - i)) & 1u;
    if (upper_bit == 1) {
      const int64_t zero_cost = used_cost + model_.pair_centi(lower_bit, 0);
      index += suffix_coefficient(i + 1, total_cost - zero_cost);
      used_cost += model_.pair_centi(lower_bit, 1);
    } else {
      used_cost += model_.pair_centi(lower_bit, 0);
    }
  }
  return index;
}

double EnumerativeIndexer::word_cost(uint32_t upper_word) const {
  double total = 0.0;
  for (int i = 0; i < m_; ++i) {
    const int lower_bit = (lower_word_ >> (m_ - 1 - i)) & 1u;
    const int upper_bit = (upper_word >> (m_ - 1 - i)) & 1u;
    total += model_.cost(level_of(lower_bit, upper_bit));
  }
  return total;
}

MlcEncoder::MlcEncoder(int m, MlcCostModel model) : m_(m), model_(model), lower_(m) {
  model_.validate();
}

std::pair<uint32_t, uint32_t> MlcEncoder::encode_pair(uint32_t lower_word, uint32_t upper_word) {
  const uint32_t lower_code = lower_.encode_word(lower_word);

  auto dict_it = upper_dicts_.find(lower_code);
  if (dict_it == upper_dicts_.end())
    dict_it = upper_dicts_.emplace(lower_code, AdaptiveDictionary(m_)).first;
  auto idx_it = indexers_.find(lower_code);
  if (idx_it == indexers_.end())
    idx_it = indexers_.emplace(lower_code, EnumerativeIndexer(lower_code, m_, model_)).first;

  const uint64_t rank = dict_it->second.rank_of(upper_word) + 1;
  const uint32_t upper_code = idx_it->second.encode(rank);
  dict_it->second.promote(upper_word);
  return {lower_code, upper_code};
}

const AdaptiveDictionary* MlcEncoder::upper_dictionary(uint32_t lower_code) const {
  const auto it = upper_dicts_.find(lower_code);
  return it == upper_dicts_.end() ? nullptr : &it->second;
}

MlcDecoder::MlcDecoder(int m, MlcCostModel model) : m_(m), model_(model), lower_(m) {
  model_.validate();
}

std::pair<uint32_t, uint32_t> MlcDecoder::decode_pair(uint32_t lower_code, uint32_t upper_code) {
  const uint32_t lower_word = lower_.decode_word(lower_code);

  auto dict_it = upper_dicts_.find(lower_code);
  if (dict_it == upper_dicts_.end())
    dict_it = upper_dicts_.emplace(lower_code, AdaptiveDictionary(m_)).first;
  auto idx_it = indexers_.find(lower_code);
  if (idx_it == indexers_.end())
    idx_it = indexers_.emplace(lower_code, EnumerativeIndexer(lower_code, m_, model_)).first;

  const uint64_t rank = idx_it->second.rank(upper_code);
  const uint32_t upper_word = dict_it->second.word_at(static_cast<uint32_t>(rank - 1));
  dict_it->second.promote(upper_word);
  return {lower_word, upper_word};
}

const AdaptiveDictionary* MlcDecoder::upper_dictionary(uint32_t lower_code) const {
  const auto it = upper_dicts_.find(lower_code);
  return it == upper_dicts_.end() ? nullptr : &it->second;
}

std::vector<uint32_t> MlcDecoder::upper_dictionary_keys() const {
  std::vector<uint32_t> keys;
  keys.reserve(upper_dicts_.size());
  for (const auto& [key, value] : upper_dicts_) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  return keys;
}

namespace {

void check_paired_streams(const BitStream& lower, const BitStream& upper, int m) {
  check_word_length(m);
  if (lower.size() != upper.size() || lower.size() % static_cast<size_t>(m) != 0)
    throw std::invalid_argument("lower/upper streams must hold the same number of m-bit words");
}

}  // namespace

std::pair<BitStream, BitStream> mlc_encode(const BitStream& lower_data, const BitStream& upper_data,
                                           int m, const MlcCostModel& model) {
  check_paired_streams(lower_data, upper_data, m);
  MlcEncoder enc(m, model);
  BitStream lower_code, upper_code;
  const size_t words = lower_data.word_count(m);
  for (size_t k = 0; k < words; ++k) {
    const auto [lc, uc] = enc.encode_pair(lower_data.word_value(k, m), upper_data.word_value(k, m));
    lower_code.push_word(lc, m);
    upper_code.push_word(uc, m);
  }
  return {std::move(lower_code), std::move(upper_code)};
}

std::pair<BitStream, BitStream> mlc_decode(const BitStream& lower_code, const BitStream& upper_code,
                                           int m, const MlcCostModel& model) {
  check_paired_streams(lower_code, upper_code, m);
  MlcDecoder dec(m, model);
  BitStream lower_data, upper_data;
  const size_t words = lower_code.word_count(m);
  for (size_t k = 0; k < words; ++k) {
    const auto [lw, uw] = dec.decode_pair(lower_code.word_value(k, m), upper_code.word_value(k, m));
    lower_data.push_word(lw, m);
    upper_data.push_word(uw, m);
  }
  return {std::move(lower_data), std::move(upper_data)};
}

std::vector<uint8_t> cell_levels(const BitStream& lower, const BitStream& upper) {
  if (lower.size() != upper.size())
    throw std::invalid_argument("page streams must have equal length");
  std::vector<uint8_t> levels(lower.size());
  for (size_t i = 0; i < lower.size(); ++i)
    levels[i] = static_cast<uint8_t>(level_of(lower[i], upper[i]));
  return levels;
}

double average_cell_cost(const std::vector<uint8_t>& levels, const MlcCostModel& model) {
  model.validate();
  if (levels.empty()) return 0.0;
  double total = 0.0;
  for (uint8_t level : levels) total += model.cost(level);
  return total / static_cast<double>(levels.size());
}

LevelFractionProfile level_fraction_profile(const std::vector<uint8_t>& levels,
                                            std::vector<uint64_t> checkpoints,
                                            const MlcCostModel& model) {
  model.validate();
  LevelFractionProfile profile;
  std::array<uint64_t, 4> tallies{0, 0, 0, 0};
  uint64_t pos = 0;
  for (size_t i = 0; i < checkpoints.size(); ++i) {
    const uint64_t gamma = checkpoints[i];
    if (i > 0 && gamma <= checkpoints[i - 1])
      throw std::invalid_argument("checkpoints must be strictly increasing");
    if (gamma > levels.size()) throw std::out_of_range("checkpoint exceeds level sequence length");
    for (; pos < gamma; ++pos) ++tallies[levels[pos]];
    double avg = 0.0;
    for (int level = 0; level < 4; ++level) {
      const double frac =
          gamma == 0 ? 0.0 : static_cast<double>(tallies[static_cast<size_t>(level)]) / static_cast<double>(gamma);
      profile.fractions[static_cast<size_t>(level)].push_back(frac);
      avg += frac * model.cost(level);
    }
    profile.avg_costs.push_back(avg);
  }
  profile.checkpoints = std::move(checkpoints);
  return profile;
}

}  // namespace shapecode

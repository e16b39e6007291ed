#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace shapecode {

inline constexpr int kMaxWordLength = 16;

inline void check_word_length(int m) {
  if (m < 1 || m > kMaxWordLength)
    throw std::invalid_argument("word length m must be in [1," +
                                std::to_string(kMaxWordLength) + "], got " + std::to_string(m));
}

// Fixed-length binary word. Bits are MSB-first: bit(0) is the first symbol,
// so lexicographic order over bit strings equals numeric order of value().
class BitWord {
 public:
  BitWord() = default;
  BitWord(uint32_t value, int length) : value_(value), length_(length) {
    check_word_length(length);
    if (value >= (1u << length))
      throw std::invalid_argument("word value out of range for length " + std::to_string(length));
  }

  uint32_t value() const { return value_; }
  int length() const { return length_; }
  int bit(int i) const { return (value_ >> (length_ - 1 - i)) & 1u; }

  std::string to_string() const {
    std::string s(static_cast<size_t>(length_), '0');
    for (int i = 0; i < length_; ++i) s[static_cast<size_t>(i)] += static_cast<char>(bit(i));
    return s;
  }

  static BitWord from_string(const std::string& s) {
    uint32_t v = 0;
    for (char c : s) {
      if (c != '0' && c != '1') throw std::invalid_argument("not a binary string: " + s);
      v = (v << 1) | static_cast<uint32_t>(c - '0');
    }
    return BitWord(v, static_cast<int>(s.size()));
  }

  friend bool operator==(const BitWord& a, const BitWord& b) {
    return a.value_ == b.value_ && a.length_ == b.length_;
  }

 private:
  uint32_t value_ = 0;
  int length_ = 1;
};

// Finite binary sequence. Bytes are ingested MSB-first.
class BitStream {
 public:
  BitStream() = default;
  explicit BitStream(std::vector<uint8_t> bits) : bits_(std::move(bits)) {
    for (uint8_t b : bits_)
      if (b > 1) throw std::invalid_argument("BitStream symbols must be 0 or 1");
  }

  static BitStream from_bytes(const std::vector<uint8_t>& bytes) {
    BitStream s;
    s.bits_.reserve(bytes.size() * 8);
    for (uint8_t byte : bytes)
      for (int i = 7; i >= 0; --i) s.bits_.push_back((byte >> i) & 1u);
    return s;
  }

  // Packs to bytes, MSB-first; a partial final byte is filled with 1 bits
  // (the zero-cost symbol under the SLC cost model).
  std::vector<uint8_t> to_bytes() const {
    std::vector<uint8_t> out((bits_.size() + 7) / 8, 0);
    for (size_t i = 0; i < bits_.size(); ++i)
      out[i / 8] = static_cast<uint8_t>(out[i / 8] | (bits_[i] << (7 - i % 8)));
    for (size_t i = bits_.size(); i < out.size() * 8; ++i)
      out[i / 8] = static_cast<uint8_t>(out[i / 8] | (1u << (7 - i % 8)));
    return out;
  }

  size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  uint8_t operator[](size_t i) const { return bits_[i]; }
  uint8_t& operator[](size_t i) { return bits_[i]; }
  void push_back(uint8_t bit) { bits_.push_back(bit & 1u); }

  size_t word_count(int m) const { return bits_.size() / static_cast<size_t>(m); }

  uint32_t word_value(size_t k, int m) const {
    uint32_t v = 0;
    const size_t base = k * static_cast<size_t>(m);
    for (int i = 0; i < m; ++i) v = (v << 1) | bits_[base + static_cast<size_t>(i)];
    return v;
  }

  void push_word(uint32_t value, int m) {
    for (int i = m - 1; i >= 0; --i) bits_.push_back((value >> i) & 1u);
  }

  std::vector<uint32_t> to_words(int m) const {
    check_word_length(m);
    if (bits_.size() % static_cast<size_t>(m) != 0)
      throw std::invalid_argument("stream length is not a multiple of m");
    std::vector<uint32_t> out(word_count(m));
    for (size_t k = 0; k < out.size(); ++k) out[k] = word_value(k, m);
    return out;
  }

  static BitStream from_words(const std::vector<uint32_t>& words, int m) {
    check_word_length(m);
    BitStream s;
    s.bits_.reserve(words.size() * static_cast<size_t>(m));
    for (uint32_t w : words) s.push_word(w, m);
    return s;
  }

  uint64_t count_zeros(size_t prefix_bits) const {
    if (prefix_bits > bits_.size()) throw std::out_of_range("prefix exceeds stream length");
    uint64_t zeros = 0;
    for (size_t i = 0; i < prefix_bits; ++i) zeros += bits_[i] == 0;
    return zeros;
  }

  friend bool operator==(const BitStream& a, const BitStream& b) { return a.bits_ == b.bits_; }

 private:
  std::vector<uint8_t> bits_;
};

}  // namespace shapecode

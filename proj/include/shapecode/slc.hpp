#pragma once

#include <cstdint>
#include <vector>

#include "shapecode/bitword.hpp"
#include "shapecode/dictionary.hpp"

namespace shapecode {

// Fraction of 0 symbols in each prefix of a stream.
struct ZeroFractionProfile {
  std::vector<uint64_t> checkpoints;  // prefix lengths in bits, strictly increasing
  std::vector<double> fractions;
};

// Rate-1 word-at-a-time shaping encoder over a fresh adaptive dictionary.
class SlcEncoder {
 public:
  explicit SlcEncoder(int m) : dict_(m, canonical_output_list(m)) {}
  explicit SlcEncoder(OutputList output) : dict_(output.m, std::move(output)) {}

  uint32_t encode_word(uint32_t word) { return dict_.encode_step(word); }
  const AdaptiveDictionary& dictionary() const { return dict_; }
  AdaptiveDictionary& dictionary() { return dict_; }
  int m() const { return dict_.m(); }

 private:
  AdaptiveDictionary dict_;
};

class SlcDecoder {
 public:
  explicit SlcDecoder(int m) : dict_(m, canonical_output_list(m)) {}
  explicit SlcDecoder(OutputList output) : dict_(output.m, std::move(output)) {}

  uint32_t decode_word(uint32_t codeword) { return dict_.decode_step(codeword); }
  const AdaptiveDictionary& dictionary() const { return dict_; }
  int m() const { return dict_.m(); }

 private:
  AdaptiveDictionary dict_;
};

// Whole-stream encode/decode. The stream length must be a multiple of m
// (apply pad_with_ones first if it is not).
BitStream slc_encode(const BitStream& data, int m);
BitStream slc_decode(const BitStream& code, int m);

// Right-pads with 1 bits (the zero-cost symbol) to a multiple of m. The
// original bit length travels out of band.
BitStream pad_with_ones(BitStream data, int m);

ZeroFractionProfile zero_fraction_profile(const BitStream& stream,
                                          std::vector<uint64_t> checkpoints);

}  // namespace shapecode

#include "shapecode/slc.hpp"

#include <stdexcept>

namespace shapecode {

BitStream slc_encode(const BitStream& data, int m) {
  check_word_length(m);
  if (data.size() % static_cast<size_t>(m) != 0)
    throw std::invalid_argument("data length is not a multiple of m and padding is not applied");
  SlcEncoder enc(m);
  BitStream out;
  const size_t words = data.word_count(m);
  for (size_t k = 0; k < words; ++k) out.push_word(enc.encode_word(data.word_value(k, m)), m);
  return out;
}

BitStream slc_decode(const BitStream& code, int m) {
  check_word_length(m);
  if (code.size() % static_cast<size_t>(m) != 0)
    throw std::invalid_argument("code length is not a multiple of m");
  SlcDecoder dec(m);
  BitStream out;
  const size_t words = code.word_count(m);
  for (size_t k = 0; k < words; ++k) out.push_word(dec.decode_word(code.word_value(k, m)), m);
  return out;
}

BitStream pad_with_ones(BitStream data, int m) {
  check_word_length(m);
  while (data.size() % static_cast<size_t>(m) != 0) data.push_back(1);
  return data;
}

ZeroFractionProfile zero_fraction_profile(const BitStream& stream,
                                          std::vector<uint64_t> checkpoints) {
  ZeroFractionProfile profile;
  uint64_t zeros = 0;
  uint64_t pos = 0;
  for (size_t i = 0; i < checkpoints.size(); ++i) {
    const uint64_t gamma = checkpoints[i];
    if (i > 0 && gamma <= checkpoints[i - 1])
      throw std::invalid_argument("checkpoints must be strictly increasing");
    if (gamma > stream.size()) throw std::out_of_range("checkpoint exceeds stream length");
    for (; pos < gamma; ++pos) zeros += stream[pos] == 0;
    profile.fractions.push_back(gamma == 0 ? 0.0
                                           : static_cast<double>(zeros) / static_cast<double>(gamma));
  }
  profile.checkpoints = std::move(checkpoints);
  return profile;
}

}  // namespace shapecode

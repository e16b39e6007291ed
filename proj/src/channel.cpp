#include "shapecode/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "shapecode/slc.hpp"

namespace shapecode {

namespace {

uint64_t split_mix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// 53-bit uniform in [0, 1); mt19937_64 output is fully specified by the
// standard, so streams reproduce across platforms.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void check_channel(const ChannelSpec& spec) {
  if (!(spec.rho >= 0.0) || !(spec.rho < 0.5))
    throw std::invalid_argument("crossover probability must satisfy 0 <= rho < 0.5");
}

// Tracks adjacent count distances and reports every transition from a
// positive distance to zero (the moment two adjacent counts become equal).
class RecurrenceWatcher {
 public:
  explicit RecurrenceWatcher(const AdaptiveDictionary& dict) : dist_(dict.distances()) {}

  template <typename OnEvent>
  void after_promote(const AdaptiveDictionary& dict, uint32_t new_rank, uint32_t old_rank,
                     OnEvent&& on_event) {
    if (dist_.empty()) return;
    const uint32_t lo = new_rank > 0 ? new_rank - 1 : 0;
    const uint32_t hi = std::min<uint32_t>(old_rank, static_cast<uint32_t>(dist_.size()) - 1);
    for (uint32_t i = lo; i <= hi; ++i) {
      const uint64_t now = dict.distance(i);
      if (dist_[i] > 0 && now == 0) on_event(i);
      dist_[i] = now;
    }
  }

 private:
  std::vector<uint64_t> dist_;
};

std::vector<double> cumulative(const std::vector<double>& P) {
  std::vector<double> cdf(P.size());
  double acc = 0.0;
  for (size_t i = 0; i < P.size(); ++i) {
    acc += P[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;
  return cdf;
}

void check_source(const std::vector<double>& P, int m) {
  check_word_length(m);
  if (P.size() != (1u << m)) throw std::invalid_argument("distribution must cover all 2^m words");
  double sum = 0.0;
  for (double p : P) {
    if (!std::isfinite(p) || p < 0.0) throw std::invalid_argument("probabilities must be in [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("probabilities must sum to 1");
}

}  // namespace

uint64_t derive_seed(uint64_t master, uint64_t stream) {
  uint64_t state = master ^ (0xA0761D6478BD642Full * (stream + 1));
  uint64_t out = split_mix64(state);
  out ^= split_mix64(state);
  return out;
}

BitStream bsc_transmit(const BitStream& bits, const ChannelSpec& spec) {
  check_channel(spec);
  std::mt19937_64 rng(spec.seed);
  BitStream out = bits;
  if (spec.rho == 0.0) return out;
  for (size_t i = 0; i < out.size(); ++i)
    if (uniform01(rng) < spec.rho) out[i] ^= 1u;
  return out;
}

std::vector<uint32_t> sample_source_words(const std::vector<double>& P, int m, uint64_t count,
                                          uint64_t seed, std::vector<uint32_t> words) {
  check_source(P, m);
  std::vector<uint32_t> patterns = words.empty() ? value_descending_words(m) : std::move(words);
  if (patterns.size() != P.size())
    throw std::invalid_argument("word assignment must cover all 2^m words");
  const std::vector<double> cdf = cumulative(P);
  std::mt19937_64 rng(seed);
  std::vector<uint32_t> out(count);
  for (uint64_t k = 0; k < count; ++k) {
    const double u = uniform01(rng);
    const size_t idx = static_cast<size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), u, [](double c, double v) { return c <= v; }) -
        cdf.begin());
    out[k] = patterns[std::min(idx, cdf.size() - 1)];
  }
  return out;
}

EncodeTrace trace_encode_recurrences(const std::vector<uint32_t>& source_words, int m,
                                     uint64_t watch_start, bool stop_at_first) {
  check_word_length(m);
  SlcEncoder enc(m);
  RecurrenceWatcher watcher(enc.dictionary());
  EncodeTrace trace;
  trace.code_words.reserve(source_words.size());
  uint64_t t = 0;
  for (uint32_t w : source_words) {
    ++t;
    const uint32_t rank_before = enc.dictionary().rank_of(w);
    const uint32_t code = enc.dictionary().output().words[rank_before];
    const auto [new_rank, old_rank] = enc.dictionary().promote(w);
    trace.code_words.push_back(code);
    bool fired = false;
    watcher.after_promote(enc.dictionary(), new_rank, old_rank, [&](uint32_t pair) {
      if (t <= watch_start) return;
      trace.events.push_back({t, pair + 1, enc.dictionary().word_at(pair),
                              enc.dictionary().word_at(pair + 1), RecurrenceEvent::Side::encoder});
      fired = true;
    });
    if (fired && stop_at_first) break;
  }
  return trace;
}

namespace {

// Continues decoding from `state` with codewords noisy[from..], watching for
// the first adjacent-distance transition to zero.
bool decode_recurs(AdaptiveDictionary state, const std::vector<uint32_t>& noisy, size_t from) {
  RecurrenceWatcher watcher(state);
  for (size_t k = from; k < noisy.size(); ++k) {
    const uint32_t word = state.word_at(state.output().rank_of[noisy[k]]);
    const auto [new_rank, old_rank] = state.promote(word);
    bool fired = false;
    watcher.after_promote(state, new_rank, old_rank, [&](uint32_t) { fired = true; });
    if (fired) return true;
  }
  return false;
}

TrialBatch run_decode_trials(const std::vector<uint32_t>& code_words, int m, double rho,
                             const std::vector<uint64_t>& t_grid, uint64_t trials, uint64_t seed,
                             uint64_t last_encoder_event /*0 when unwatched*/) {
  TrialBatch batch;
  batch.t_grid = t_grid;
  batch.trials = trials;
  if (trials == 0) return batch;

  std::vector<uint64_t> hits(t_grid.size(), 0);
  const BitStream clean = BitStream::from_words(code_words, m);

  for (uint64_t r = 0; r < trials; ++r) {
    const BitStream corrupted = bsc_transmit(clean, {rho, derive_seed(seed, r)});
    const std::vector<uint32_t> noisy = corrupted.to_words(m);

    SlcDecoder clean_decoder(m);
    uint64_t advanced = 0;
    for (size_t gi = 0; gi < t_grid.size(); ++gi) {
      const uint64_t t = t_grid[gi];
      if (last_encoder_event > t) {  // trial already stopped during encoding
        ++hits[gi];
        continue;
      }
      for (; advanced < t; ++advanced)
        clean_decoder.decode_word(code_words[advanced]);
      if (decode_recurs(clean_decoder.dictionary(), noisy, t)) ++hits[gi];
    }
  }

  batch.fractions.resize(t_grid.size());
  batch.std_errors.resize(t_grid.size());
  for (size_t gi = 0; gi < t_grid.size(); ++gi) {
    const double p = static_cast<double>(hits[gi]) / static_cast<double>(trials);
    batch.fractions[gi] = p;
    batch.std_errors[gi] = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  }
  return batch;
}

void check_t_grid(const std::vector<uint64_t>& t_grid, uint64_t total_words) {
  if (t_grid.empty()) throw std::invalid_argument("t grid must not be empty");
  for (size_t i = 0; i < t_grid.size(); ++i) {
    if (i > 0 && t_grid[i] <= t_grid[i - 1])
      throw std::invalid_argument("t grid must be strictly increasing");
    if (t_grid[i] >= total_words)
      throw std::invalid_argument("t grid values must stay below the sequence word count");
  }
}

}  // namespace

TrialBatch estimate_instability(const InstabilityConfig& config) {
  check_source(config.P, config.m);
  if (!(config.rho >= 0.0) || !(config.rho < 0.5))
    throw std::invalid_argument("crossover probability must satisfy 0 <= rho < 0.5");
  check_t_grid(config.t_grid, config.sequence_words);

  TrialBatch batch;
  batch.t_grid = config.t_grid;
  batch.trials = config.trials;
  if (config.trials == 0) return batch;

  std::vector<uint64_t> hits(config.t_grid.size(), 0);
  for (uint64_t r = 0; r < config.trials; ++r) {
    const uint64_t src_seed = derive_seed(config.seed, 2 * r);
    const uint64_t noise_seed = derive_seed(config.seed, 2 * r + 1);

    const std::vector<uint32_t> source = sample_source_words(
        config.P, config.m, config.sequence_words, src_seed, config.word_assignment);
    const EncodeTrace trace = trace_encode_recurrences(source, config.m);
    const uint64_t last_enc = trace.events.empty() ? 0 : trace.events.back().t;

    const BitStream clean = BitStream::from_words(trace.code_words, config.m);
    const BitStream corrupted = bsc_transmit(clean, {config.rho, noise_seed});
    const std::vector<uint32_t> noisy = corrupted.to_words(config.m);

    SlcDecoder clean_decoder(config.m);
    uint64_t advanced = 0;
    for (size_t gi = 0; gi < config.t_grid.size(); ++gi) {
      const uint64_t t = config.t_grid[gi];
      if (last_enc > t) {  // recurrence declared while encoding
        ++hits[gi];
        continue;
      }
      for (; advanced < t; ++advanced)
        clean_decoder.decode_word(trace.code_words[advanced]);
      if (decode_recurs(clean_decoder.dictionary(), noisy, t)) ++hits[gi];
    }
  }

  batch.fractions.resize(config.t_grid.size());
  batch.std_errors.resize(config.t_grid.size());
  for (size_t gi = 0; gi < config.t_grid.size(); ++gi) {
    const double p = static_cast<double>(hits[gi]) / static_cast<double>(config.trials);
    batch.fractions[gi] = p;
    batch.std_errors[gi] = std::sqrt(p * (1.0 - p) / static_cast<double>(config.trials));
  }
  return batch;
}

TrialBatch estimate_corpus_decode_recurrence(const BitStream& corpus,
                                             const CorpusDecodeConfig& config) {
  check_word_length(config.m);
  if (!(config.rho >= 0.0) || !(config.rho < 0.5))
    throw std::invalid_argument("crossover probability must satisfy 0 <= rho < 0.5");
  if (corpus.size() < config.prefix_bytes * 8)
    throw std::invalid_argument("corpus shorter than the requested prefix");

  const uint64_t prefix_bits = config.prefix_bytes * 8;
  const uint64_t words = prefix_bits / static_cast<uint64_t>(config.m);
  std::vector<uint32_t> source(words);
  BitStream prefix;
  for (uint64_t i = 0; i < words * static_cast<uint64_t>(config.m); ++i) prefix.push_back(corpus[i]);
  for (uint64_t k = 0; k < words; ++k) source[k] = prefix.word_value(k, config.m);
  check_t_grid(config.t_grid, words);

  const EncodeTrace trace = trace_encode_recurrences(source, config.m);
  return run_decode_trials(trace.code_words, config.m, config.rho, config.t_grid, config.trials,
                           config.seed, /*last_encoder_event=*/0);
}

double mc_pair_walk_recurrence(const PairWalkModel& model, int ne0, int nd0, uint64_t trials,
                               uint64_t seed, int escape_distance) {
  model.validate();
  if (ne0 <= 0 || nd0 <= 0) return 1.0;
  if (escape_distance <= std::max(ne0, nd0))
    throw std::invalid_argument("escape distance must exceed the start coordinates");

  // Self-loops do not affect hitting probabilities; sample the eight moving
  // directions conditioned on movement.
  std::array<double, 8> cdf{};
  std::array<std::pair<int, int>, 8> moves{};
  {
    const double norm = 1.0 - model.self();
    if (norm <= 0.0) throw std::invalid_argument("walk never moves");
    size_t idx = 0;
    double acc = 0.0;
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy) {
        if (dx == 0 && dy == 0) continue;
        acc += model.at(dx, dy) / norm;
        cdf[idx] = acc;
        moves[idx] = {dx, dy};
        ++idx;
      }
    cdf[7] = 1.0;
  }

  uint64_t hits = 0;
  for (uint64_t r = 0; r < trials; ++r) {
    std::mt19937_64 rng(derive_seed(seed, r));
    int ne = ne0, nd = nd0;
    while (true) {
      const double u = uniform01(rng);
      size_t idx = 0;
      while (cdf[idx] <= u && idx < 7) ++idx;
      ne += moves[idx].first;
      nd += moves[idx].second;
      if (ne <= 0 || nd <= 0) {
        ++hits;
        break;
      }
      if (ne > escape_distance && nd > escape_distance) break;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace shapecode

#include "shapecode/propagation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "shapecode/bitword.hpp"

namespace shapecode {

namespace {

constexpr double kProbTol = 1e-9;

void check_distribution(const std::vector<double>& P) {
  if (P.empty()) throw std::invalid_argument("empty distribution");
  double sum = 0.0;
  for (double p : P) {
    if (!std::isfinite(p) || p < 0.0) throw std::invalid_argument("probabilities must be in [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbTol) throw std::invalid_argument("probabilities must sum to 1");
  for (size_t i = 0; i + 1 < P.size(); ++i)
    if (P[i] < P[i + 1] - kProbTol)
      throw std::invalid_argument("probabilities must be sorted in non-increasing order");
}

void check_rho(double rho) {
  if (!(rho >= 0.0) || !(rho < 0.5))
    throw std::invalid_argument("crossover probability must satisfy 0 <= rho < 0.5");
}

void check_positive_distribution(const std::vector<double>& P) {
  check_distribution(P);
  for (double p : P)
    if (p <= 0.0) throw std::invalid_argument("probabilities must be strictly positive here");
}

std::vector<uint32_t> resolve_words(int m, std::vector<uint32_t> words) {
  const uint32_t n = 1u << m;
  if (words.empty()) return value_descending_words(m);
  if (words.size() != n) throw std::invalid_argument("word assignment must cover all 2^m words");
  std::vector<bool> seen(n, false);
  for (uint32_t w : words) {
    if (w >= n || seen[w]) throw std::invalid_argument("word assignment must be a permutation");
    seen[w] = true;
  }
  return words;
}

int ham(uint32_t a, uint32_t b) { return std::popcount(a ^ b); }

// rho^h (1-rho)^(m-h)
double flip_prob(double rho, int m, int h) {
  return std::pow(rho, h) * std::pow(1.0 - rho, m - h);
}

}  // namespace

void PairWalkModel::validate() const {
  double sum = 0.0;
  for (const auto& row : probs)
    for (double p : row) {
      if (!std::isfinite(p) || p < -kProbTol || p > 1.0 + kProbTol)
        throw std::invalid_argument("walk probabilities must lie in [0,1]");
      sum += p;
    }
  if (std::abs(sum - 1.0) > kProbTol)
    throw std::invalid_argument("walk probabilities must sum to 1");
}

bool PairWalkModel::is_four_direction(double tol) const {
  return std::abs(at(1, 0)) <= tol && std::abs(at(-1, 0)) <= tol && std::abs(at(0, 1)) <= tol &&
         std::abs(at(0, -1)) <= tol && std::abs(at(0, 0)) <= tol;
}

std::vector<uint32_t> value_descending_words(int m) {
  check_word_length(m);
  const uint32_t n = 1u << m;
  std::vector<uint32_t> words(n);
  for (uint32_t i = 0; i < n; ++i) words[i] = n - 1 - i;
  return words;
}

double pair_recurrence_prob(double p1, double p2, long long n) {
  check_distribution({p1, p2});
  if (n <= 0) return 1.0;
  return std::pow(p2 / p1, static_cast<double>(n));
}

BoundValue pair_recurrence_upper(double p1, double p2, double rho, long long ne, long long nd) {
  check_distribution({p1, p2});
  check_rho(rho);
  if (ne <= 0 || nd <= 0)
    throw std::domain_error("bound requires a stable pair (ne, nd > 0); recurrence is certain otherwise");
  const double decoder_ratio = (rho * p1 + (1.0 - rho) * p2) / ((1.0 - rho) * p1 + rho * p2);
  const double raw = std::pow(p2 / p1, static_cast<double>(ne)) +
                     std::pow(decoder_ratio, static_cast<double>(nd));
  return {raw, std::min(raw, 1.0)};
}

DecodeMarginals decode_marginals(const std::vector<double>& P, double rho, int m,
                                 std::vector<uint32_t> words) {
  check_word_length(m);
  check_rho(rho);
  check_distribution(P);
  const uint32_t n = 1u << m;
  if (P.size() != n) throw std::invalid_argument("distribution must cover all 2^m words");
  const std::vector<uint32_t> w = resolve_words(m, std::move(words));

  DecodeMarginals out;
  out.probs.assign(n, 0.0);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j < n; ++j)
      out.probs[i] += flip_prob(rho, m, ham(w[i], w[j])) * P[j];

  for (uint32_t i = 0; i + 1 < n; ++i)
    if (out.probs[i] < out.probs[i + 1] - 1e-15)
      throw std::domain_error("decode marginals are not sorted: rho is too large for this source "
                              "(P^d_" + std::to_string(i + 1) + " < P^d_" + std::to_string(i + 2) + ")");
  return out;
}

PairWalkModel two_word_walk_model(double p1, double p2, double rho) {
  check_distribution({p1, p2});
  check_rho(rho);
  PairWalkModel model;
  model.at(1, 1) = (1.0 - rho) * p1;
  model.at(1, -1) = rho * p1;
  model.at(-1, -1) = (1.0 - rho) * p2;
  model.at(-1, 1) = rho * p2;
  model.validate();
  return model;
}

PairWalkModel pair_transition_model(const std::vector<double>& P, double rho, int m, int pair_index,
                                    std::vector<uint32_t> words) {
  check_word_length(m);
  check_rho(rho);
  check_distribution(P);
  const uint32_t n = 1u << m;
  if (P.size() != n) throw std::invalid_argument("distribution must cover all 2^m words");
  if (pair_index < 1 || static_cast<uint32_t>(pair_index) > n - 1)
    throw std::invalid_argument("pair index must be in [1, 2^m - 1]");
  const std::vector<uint32_t> w = resolve_words(m, std::move(words));

  const uint32_t i = static_cast<uint32_t>(pair_index - 1);  // 0-based
  PairWalkModel model;
  model.at(1, 1) = flip_prob(rho, m, 0) * P[i];
  model.at(-1, -1) = flip_prob(rho, m, 0) * P[i + 1];
  model.at(1, -1) = flip_prob(rho, m, ham(w[i], w[i + 1])) * P[i];
  model.at(-1, 1) = flip_prob(rho, m, ham(w[i + 1], w[i])) * P[i + 1];
  for (uint32_t j = 0; j < n; ++j) {
    if (j == i || j == i + 1) continue;
    model.at(1, 0) += flip_prob(rho, m, ham(w[i], w[j])) * P[i];
    model.at(-1, 0) += flip_prob(rho, m, ham(w[i + 1], w[j])) * P[i + 1];
    model.at(0, 1) += flip_prob(rho, m, ham(w[i], w[j])) * P[j];
    model.at(0, -1) += flip_prob(rho, m, ham(w[i + 1], w[j])) * P[j];
  }
  double moving = 0.0;
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -1; dy <= 1; ++dy)
      if (dx != 0 || dy != 0) moving += model.at(dx, dy);
  model.at(0, 0) = std::max(0.0, 1.0 - moving);
  model.validate();
  return model;
}

namespace {

struct GridShape {
  int L;
  size_t stride;
  size_t cell(int ne, int nd) const {
    return static_cast<size_t>(ne) * stride + static_cast<size_t>(nd);
  }
};

void apply_boundaries(std::vector<double>& q, const GridShape& g) {
  for (int k = 0; k <= g.L; ++k) {
    q[g.cell(0, k)] = 1.0;  // axis ne = 0
    q[g.cell(k, 0)] = 1.0;  // axis nd = 0
  }
  for (int k = 1; k <= g.L; ++k) {
    q[g.cell(g.L, k)] = 0.0;  // far edge ne = L, nd > 0
    q[g.cell(k, g.L)] = 0.0;  // far edge nd = L, ne > 0
  }
}

void check_grid_args(const PairWalkModel& model, int L, GridStart start) {
  model.validate();
  if (L < 2) throw std::invalid_argument("grid size L must be at least 2");
  if (start.ne <= 0 || start.nd <= 0 || start.ne >= L || start.nd >= L)
    throw std::invalid_argument("start must lie strictly inside the grid (0 < ne, nd < L)");
  if (model.self() >= 1.0 - 1e-15)
    throw std::invalid_argument("walk never moves: the (0,0) probability is 1");
}

GridSolution solve_grid(const PairWalkModel& model, int L, GridStart start, double tol,
                        long long max_iterations, bool parity_only) {
  check_grid_args(model, L, start);
  if (parity_only && !model.is_four_direction())
    throw std::invalid_argument("parity solver requires a four-direction walk model");

  const GridShape g{L, static_cast<size_t>(L) + 1};
  GridSolution sol;
  sol.L = L;
  sol.start = start;
  sol.values.assign(g.stride * g.stride, 0.0);
  apply_boundaries(sol.values, g);

  const int parity = (start.ne + start.nd) & 1;
  const double norm = 1.0 - model.self();
  std::vector<double> next = sol.values;

  for (long long iter = 1; iter <= max_iterations; ++iter) {
    double delta = 0.0;
    for (int ne = 1; ne < L; ++ne) {
      for (int nd = 1; nd < L; ++nd) {
        if (parity_only && ((ne + nd) & 1) != parity) continue;
        double acc = 0.0;
        for (int dx = -1; dx <= 1; ++dx)
          for (int dy = -1; dy <= 1; ++dy) {
            if (dx == 0 && dy == 0) continue;
            const double p = model.at(dx, dy);
            if (p != 0.0) acc += p * sol.values[g.cell(ne + dx, nd + dy)];
          }
        const double value = acc / norm;
        next[g.cell(ne, nd)] = value;
        delta = std::max(delta, std::abs(value - sol.values[g.cell(ne, nd)]));
      }
    }
    sol.values.swap(next);
    sol.iterations = iter;
    sol.final_delta = delta;
    if (delta < tol) {
      sol.converged = true;
      break;
    }
  }
  return sol;
}

}  // namespace

GridSolution grid_lower_bound(const PairWalkModel& model, int L, GridStart start, double tol,
                              long long max_iterations) {
  return solve_grid(model, L, start, tol, max_iterations, /*parity_only=*/false);
}

GridSolution grid_lower_bound_parity(const PairWalkModel& model, int L, GridStart start, double tol,
                                     long long max_iterations) {
  return solve_grid(model, L, start, tol, max_iterations, /*parity_only=*/true);
}

BoundValue dictionary_pair_upper(const std::vector<double>& P, const DecodeMarginals& decode,
                                 int pair_index, long long ne, long long nd) {
  check_distribution(P);
  if (decode.probs.size() != P.size())
    throw std::invalid_argument("decode marginals must match the source distribution size");
  if (pair_index < 1 || static_cast<size_t>(pair_index) >= P.size())
    throw std::invalid_argument("pair index must be in [1, 2^m - 1]");
  if (ne <= 0 || nd <= 0) throw std::domain_error("bound requires a stable pair (ne, nd > 0)");
  const size_t i = static_cast<size_t>(pair_index - 1);
  const double raw = std::pow(P[i + 1] / P[i], static_cast<double>(ne)) +
                     std::pow(decode.probs[i + 1] / decode.probs[i], static_cast<double>(nd));
  return {raw, std::min(raw, 1.0)};
}

namespace {

// Product over adjacent pairs (start, start+2, ...) of 1 - (q_{i+1}/q_i)^{N_i}.
double pair_product(const std::vector<double>& q, const std::vector<uint64_t>& distances,
                    size_t first_pair) {
  double prod = 1.0;
  for (size_t i = first_pair; i < distances.size(); i += 2)
    prod *= 1.0 - std::pow(q[i + 1] / q[i], static_cast<double>(distances[i]));
  return prod;
}

}  // namespace

BoundValue stability_upper_bound(const std::vector<uint64_t>& counts, const std::vector<double>& P,
                                 const DecodeMarginals& decode) {
  check_positive_distribution(P);
  if (counts.size() != P.size() || decode.probs.size() != P.size())
    throw std::invalid_argument("counts, P and decode marginals must have equal size");
  std::vector<uint64_t> distances(counts.size() - 1);
  for (size_t i = 0; i + 1 < counts.size(); ++i) {
    if (counts[i] < counts[i + 1])
      throw std::invalid_argument("counts must be non-increasing (dictionary order)");
    distances[i] = counts[i] - counts[i + 1];
  }
  const double raw = 4.0 - pair_product(P, distances, 0) - pair_product(P, distances, 1) -
                     pair_product(decode.probs, distances, 0) - pair_product(decode.probs, distances, 1);
  return {raw, std::clamp(raw, 0.0, 1.0)};
}

InstabilityBound instability_bound(const std::vector<double>& P, int m, double rho, long long t,
                                   std::vector<uint32_t> words) {
  if (m != 2)
    throw std::domain_error("composition enumeration is only feasible for m = 2");
  if (t < 0 || t > 500)
    throw std::domain_error("instability bound capped at t <= 500 (enumeration grows as t^3)");
  check_rho(rho);
  check_positive_distribution(P);
  if (P.size() != 4) throw std::invalid_argument("m = 2 requires a 4-word distribution");
  const DecodeMarginals decode = decode_marginals(P, rho, m, std::move(words));

  // log factorials and per-word log probabilities
  std::vector<double> logfact(static_cast<size_t>(t) + 1, 0.0);
  for (long long k = 1; k <= t; ++k)
    logfact[static_cast<size_t>(k)] = logfact[static_cast<size_t>(k - 1)] + std::log(static_cast<double>(k));
  std::array<double, 4> logp{};
  for (size_t i = 0; i < 4; ++i) logp[i] = std::log(P[i]);

  // geometric terms (ratio^N) for every distance that can occur
  std::array<double, 3> enc_ratio{P[1] / P[0], P[2] / P[1], P[3] / P[2]};
  std::array<double, 3> dec_ratio{decode.probs[1] / decode.probs[0], decode.probs[2] / decode.probs[1],
                                  decode.probs[3] / decode.probs[2]};
  std::array<std::vector<double>, 3> enc_pow, dec_pow;
  for (size_t i = 0; i < 3; ++i) {
    enc_pow[i].resize(static_cast<size_t>(t) + 1);
    dec_pow[i].resize(static_cast<size_t>(t) + 1);
    enc_pow[i][0] = dec_pow[i][0] = 1.0;
    for (long long k = 1; k <= t; ++k) {
      enc_pow[i][static_cast<size_t>(k)] = enc_pow[i][static_cast<size_t>(k - 1)] * enc_ratio[i];
      dec_pow[i][static_cast<size_t>(k)] = dec_pow[i][static_cast<size_t>(k - 1)] * dec_ratio[i];
    }
  }

  InstabilityBound out;
  double stable_clamped = 0.0, stable_raw = 0.0, unstable_mass = 0.0, total_mass = 0.0;
  for (long long k1 = 0; k1 <= t; ++k1) {
    for (long long k2 = 0; k2 <= t - k1; ++k2) {
      for (long long k3 = 0; k3 <= t - k1 - k2; ++k3) {
        const long long k4 = t - k1 - k2 - k3;
        const double logpn = logfact[static_cast<size_t>(t)] - logfact[static_cast<size_t>(k1)] -
                             logfact[static_cast<size_t>(k2)] - logfact[static_cast<size_t>(k3)] -
                             logfact[static_cast<size_t>(k4)] + static_cast<double>(k1) * logp[0] +
                             static_cast<double>(k2) * logp[1] + static_cast<double>(k3) * logp[2] +
                             static_cast<double>(k4) * logp[3];
        const double pn = std::exp(logpn);
        total_mass += pn;
        if (k1 > k2 && k2 > k3 && k3 > k4) {
          const size_t n1 = static_cast<size_t>(k1 - k2);
          const size_t n2 = static_cast<size_t>(k2 - k3);
          const size_t n3 = static_cast<size_t>(k3 - k4);
          const double a = 4.0 - (1.0 - enc_pow[0][n1]) * (1.0 - enc_pow[2][n3]) -
                           (1.0 - enc_pow[1][n2]) - (1.0 - dec_pow[0][n1]) * (1.0 - dec_pow[2][n3]) -
                           (1.0 - dec_pow[1][n2]);
          stable_raw += a * pn;
          stable_clamped += std::clamp(a, 0.0, 1.0) * pn;
        } else {
          unstable_mass += pn;
        }
      }
    }
  }
  out.bound = std::min(stable_clamped + unstable_mass, 1.0);
  out.raw = stable_raw + unstable_mass;
  out.probability_mass = total_mass;
  return out;
}

double interior_spectral_radius(const PairWalkModel& model, int L, int iterations) {
  model.validate();
  if (L < 2) throw std::invalid_argument("grid size L must be at least 2");
  const GridShape g{L, static_cast<size_t>(L) + 1};
  std::vector<double> x(g.stride * g.stride, 0.0), y(x.size(), 0.0);
  for (int ne = 1; ne < L; ++ne)
    for (int nd = 1; nd < L; ++nd) x[g.cell(ne, nd)] = 1.0;

  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    double norm = 0.0;
    for (int ne = 1; ne < L; ++ne)
      for (int nd = 1; nd < L; ++nd) {
        double acc = model.self() * x[g.cell(ne, nd)];
        for (int dx = -1; dx <= 1; ++dx)
          for (int dy = -1; dy <= 1; ++dy) {
            if (dx == 0 && dy == 0) continue;
            const int te = ne + dx, td = nd + dy;
            if (te >= 1 && te < L && td >= 1 && td < L)
              acc += model.at(dx, dy) * x[g.cell(te, td)];
          }
        y[g.cell(ne, nd)] = acc;
        norm = std::max(norm, std::abs(acc));
      }
    if (norm == 0.0) return 0.0;
    lambda = norm;
    for (int ne = 1; ne < L; ++ne)
      for (int nd = 1; nd < L; ++nd) x[g.cell(ne, nd)] = y[g.cell(ne, nd)] / norm;
  }
  return lambda;
}

}  // namespace shapecode

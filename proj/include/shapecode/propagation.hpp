#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace shapecode {

// Nine-direction transition law of the (N^e, N^d) random walk of one adjacent
// dictionary word pair. p(dx, dy) with dx, dy in {-1, 0, 1}; the (0,0) entry
// absorbs the remainder so the law sums to 1.
struct PairWalkModel {
  std::array<std::array<double, 3>, 3> probs{};

  double at(int dx, int dy) const { return probs[static_cast<size_t>(dx + 1)][static_cast<size_t>(dy + 1)]; }
  double& at(int dx, int dy) { return probs[static_cast<size_t>(dx + 1)][static_cast<size_t>(dy + 1)]; }
  double self() const { return at(0, 0); }

  void validate() const;
  // True when only the four diagonal directions carry probability (the
  // two-word dictionary case, where N^e + N^d keeps its parity).
  bool is_four_direction(double tol = 1e-12) const;
};

// A bound with its raw value and the value clamped to [0, 1].
struct BoundValue {
  double raw = 0.0;
  double clamped = 0.0;
};

// Word-read marginals P_i^d of a stable dictionary over a noisy read channel.
struct DecodeMarginals {
  std::vector<double> probs;
};

// Default assignment of sorted probabilities to word bit patterns: descending
// word value, e.g. {11, 10, 01, 00} for m = 2.
std::vector<uint32_t> value_descending_words(int m);

// Probability that two word counts at distance n will ever meet again:
// (p2/p1)^n for n > 0, and 1 otherwise. Requires p1 + p2 = 1, p1 >= p2.
double pair_recurrence_prob(double p1, double p2, long long n);

// Two-word recurrence upper bound over a crossover-rho read channel:
// (p2/p1)^ne + [(rho*p1 + (1-rho)*p2) / ((1-rho)*p1 + rho*p2)]^nd.
// Requires a stable start (ne, nd > 0); otherwise the recurrence is certain
// and the bound does not apply.
BoundValue pair_recurrence_upper(double p1, double p2, double rho, long long ne, long long nd);

// P_i^d = sum_j rho^ham(i,j) (1-rho)^(m-ham(i,j)) P_j, with ham taken between
// the bit patterns assigned to the sorted probabilities. Throws if the
// marginals come out unsorted (rho too large for this source), since the
// adjacent-pair bounds assume the sorted order.
DecodeMarginals decode_marginals(const std::vector<double>& P, double rho, int m,
                                 std::vector<uint32_t> words = {});

// Four-direction walk law of the two-word dictionary.
PairWalkModel two_word_walk_model(double p1, double p2, double rho);

// Nine-direction walk law for adjacent pair i (1-based) of a general stable
// dictionary.
PairWalkModel pair_transition_model(const std::vector<double>& P, double rho, int m, int pair_index,
                                    std::vector<uint32_t> words = {});

struct GridStart {
  int ne = 1;
  int nd = 1;
};

// First-passage probabilities on the (L+1) x (L+1) box: the probability of
// hitting either axis before the far edges, from each interior point. Axis
// cells are fixed at 1 and far-edge cells (excluding the axis corners) at 0.
struct GridSolution {
  int L = 0;
  GridStart start;
  std::vector<double> values;  // row-major, index = ne * (L+1) + nd
  long long iterations = 0;
  double final_delta = 0.0;
  bool converged = false;

  double at(int ne, int nd) const {
    return values[static_cast<size_t>(ne) * static_cast<size_t>(L + 1) + static_cast<size_t>(nd)];
  }
  double value_at_start() const { return at(start.ne, start.nd); }
};

// Jacobi fixed-point iteration of the normalized balance equation
// Q(x) = sum_{d != 0} p_d Q(x + d) / (1 - p_0). Stops when the sweep delta
// drops below tol or after max_iterations sweeps, whichever comes first.
GridSolution grid_lower_bound(const PairWalkModel& model, int L, GridStart start, double tol = 1e-12,
                              long long max_iterations = 1000000);

// Same solver restricted to the parity class of the start point; valid only
// for four-direction models, whose walk never changes the parity of ne + nd.
// Cells of the opposite parity class are left untouched (zero).
GridSolution grid_lower_bound_parity(const PairWalkModel& model, int L, GridStart start,
                                     double tol = 1e-12, long long max_iterations = 1000000);

// Adjacent-pair recurrence upper bound in a general dictionary:
// (P_{i+1}/P_i)^ne + (P^d_{i+1}/P^d_i)^nd, pair_index 1-based.
BoundValue dictionary_pair_upper(const std::vector<double>& P, const DecodeMarginals& decode,
                                 int pair_index, long long ne, long long nd);

// Whole-dictionary recurrence upper bound A(n) for count vector `counts`
// (non-increasing; the same distances are used for the encoder and decoder
// terms, matching the correctly-decoded-prefix assumption): 4 minus the four
// products over odd/even adjacent pairs. A zero distance makes a product
// vanish, so the raw bound is then >= 1.
BoundValue stability_upper_bound(const std::vector<uint64_t>& counts, const std::vector<double>& P,
                                 const DecodeMarginals& decode);

struct InstabilityBound {
  double bound = 1.0;             // per-term clamped form, always in [0, 1]
  double raw = 1.0;               // unclamped sum
  double probability_mass = 0.0;  // sum of count-vector probabilities (sanity: ~1)
};

// Upper bound on the probability that the dictionary becomes unstable after t
// correctly decoded words: the stable count vectors contribute A(n) P(n) and
// the rest contribute P(n). Enumerates all compositions of t, so it is capped
// at m = 2 and t <= 500.
InstabilityBound instability_bound(const std::vector<double>& P, int m, double rho, long long t,
                                   std::vector<uint32_t> words = {});

// Power-iteration estimate of the spectral radius of the interior transition
// operator (sub-stochastic, so the result should stay below 1).
double interior_spectral_radius(const PairWalkModel& model, int L, int iterations = 400);

}  // namespace shapecode

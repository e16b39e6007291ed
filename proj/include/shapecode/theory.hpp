#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "shapecode/mlc.hpp"

namespace shapecode {

// An i.i.d. word source with probabilities sorted in non-increasing order.
struct SourceModel {
  std::vector<double> probs;
  double entropy = 0.0;  // bits per word
};

// Builds a SourceModel from (possibly unsorted) probabilities.
SourceModel make_source_model(std::vector<double> probs);

// Per-codeword totals of an output list, sorted ascending.
struct CostProfile {
  std::vector<double> costs;
};

CostProfile make_cost_profile(std::vector<double> costs);

struct AsymptoticCost {
  double per_word = 0.0;  // sum of P_(i) c_(i), probabilities descending paired with costs ascending
  double per_bit = 0.0;   // per_word / m
};

// Long-run expected cost of the shaping code: the stable dictionary pairs the
// i-th most probable word with the i-th cheapest codeword.
AsymptoticCost asymptotic_cost(const SourceModel& source, const CostProfile& profile, int m);

struct Rate1Optimum {
  std::vector<double> probs;  // p_i proportional to 2^(-mu c_i), indexed like the cost profile
  double mu = 0.0;            // +infinity in the degenerate minimum-entropy case
};

// Minimum-cost rate-1 output distribution at entropy H: the exponential
// family over costs, with mu found by bisection on the (monotone) entropy.
Rate1Optimum optimal_rate1_distribution(double entropy_bits, const CostProfile& profile,
                                        double tol = 1e-10);

struct OptimalityGap {
  double cost_dsc = 0.0;  // shaping-code asymptotic cost per word
  double cost_min = 0.0;  // rate-1 minimum at the source entropy
  double gap = 0.0;       // cost_dsc - cost_min, zero iff the source is exponential over costs
};

OptimalityGap optimality_gap(const SourceModel& source, const CostProfile& profile);

// Measured cell-error-rate curve of one programmed level.
struct CerCurve {
  int level = 0;
  std::vector<double> cycles;       // increasing P/E cycle counts
  std::vector<double> error_rates;  // observed cell error rate per sample
};

struct CostModelResult {
  MlcCostModel model;
  std::array<double, 4> t_max{};  // first crossing cycles; +infinity when never crossed
  std::vector<std::string> warnings;
};

// Derives level costs c_i = T0 / T^i_max from the first crossing of cer_max on
// each curve (linear interpolation between samples). A curve that never
// crosses within its range gets cost 0.
CostModelResult cost_model_from_cer(const std::array<CerCurve, 4>& curves, double design_lifetime,
                                    double cer_max);

}  // namespace shapecode

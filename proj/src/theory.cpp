#include "shapecode/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace shapecode {

namespace {

double entropy_bits(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

void check_probs(const std::vector<double>& probs) {
  if (probs.empty()) throw std::invalid_argument("empty distribution");
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) throw std::invalid_argument("probabilities must be in [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("probabilities must sum to 1");
}

}  // namespace

SourceModel make_source_model(std::vector<double> probs) {
  check_probs(probs);
  std::sort(probs.begin(), probs.end(), std::greater<>());
  SourceModel model;
  model.entropy = entropy_bits(probs);
  model.probs = std::move(probs);
  return model;
}

CostProfile make_cost_profile(std::vector<double> costs) {
  if (costs.empty()) throw std::invalid_argument("empty cost profile");
  for (double c : costs)
    if (!std::isfinite(c) || c < 0.0) throw std::invalid_argument("costs must be finite and non-negative");
  std::sort(costs.begin(), costs.end());
  return {std::move(costs)};
}

AsymptoticCost asymptotic_cost(const SourceModel& source, const CostProfile& profile, int m) {
  check_word_length(m);
  if (source.probs.size() != profile.costs.size())
    throw std::invalid_argument("source and cost profile sizes differ");
  double per_word = 0.0;
  for (size_t i = 0; i < source.probs.size(); ++i) per_word += source.probs[i] * profile.costs[i];
  return {per_word, per_word / static_cast<double>(m)};
}

namespace {

// Exponential-family distribution over distinct costs with multiplicities,
// evaluated in log space. Returns per-word probabilities expanded back to the
// full profile, plus the entropy in bits.
struct GibbsEval {
  std::vector<double> probs;
  double entropy;
};

GibbsEval gibbs_at(double mu, const std::vector<double>& costs) {
  const double min_cost = *std::min_element(costs.begin(), costs.end());
  std::vector<double> weights(costs.size());
  double z = 0.0;
  for (size_t i = 0; i < costs.size(); ++i) {
    weights[i] = std::exp2(-mu * (costs[i] - min_cost));
    z += weights[i];
  }
  GibbsEval eval;
  eval.probs.resize(costs.size());
  for (size_t i = 0; i < costs.size(); ++i) eval.probs[i] = weights[i] / z;
  eval.entropy = entropy_bits(eval.probs);
  return eval;
}

}  // namespace

Rate1Optimum optimal_rate1_distribution(double entropy_target, const CostProfile& profile,
                                        double tol) {
  const auto& costs = profile.costs;
  if (costs.empty()) throw std::invalid_argument("empty cost profile");
  const double h_max = std::log2(static_cast<double>(costs.size()));
  if (entropy_target > h_max + 1e-12)
    throw std::invalid_argument("entropy exceeds log2(2^m), not achievable");
  if (entropy_target < -1e-12) throw std::invalid_argument("entropy must be non-negative");

  // Minimum reachable entropy (mu -> infinity): the uniform distribution over
  // the cheapest-cost words.
  const double min_cost = costs.front();
  size_t min_count = 0;
  for (double c : costs) min_count += c <= min_cost + 1e-15;
  const double h_min = std::log2(static_cast<double>(min_count));

  if (entropy_target < h_min - 1e-9) {
    if (min_count == costs.size())
      throw std::invalid_argument("all costs are equal: only the uniform distribution exists");
    throw std::invalid_argument("entropy below the minimum-entropy limit of the cost profile");
  }

  // The minimum entropy is reached only in the mu -> infinity limit.
  if (std::abs(entropy_target - h_min) <= 1e-12 && min_count < costs.size()) {
    Rate1Optimum out;
    out.probs.assign(costs.size(), 0.0);
    for (size_t i = 0; i < costs.size(); ++i)
      if (costs[i] <= min_cost + 1e-15) out.probs[i] = 1.0 / static_cast<double>(min_count);
    out.mu = std::numeric_limits<double>::infinity();
    return out;
  }

  if (gibbs_at(0.0, costs).entropy <= entropy_target + tol) {
    Rate1Optimum out;
    out.probs = gibbs_at(0.0, costs).probs;
    out.mu = 0.0;
    return out;
  }

  // Bracket: entropy(mu) is non-increasing; double mu until it drops below
  // the target or the limit case is reached.
  double lo = 0.0, hi = 1.0;
  while (gibbs_at(hi, costs).entropy > entropy_target) {
    hi *= 2.0;
    if (hi > 1e9) throw std::runtime_error("bisection bracket for mu did not close");
  }

  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double h = gibbs_at(mid, costs).entropy;
    if (std::abs(h - entropy_target) <= tol) {
      lo = hi = mid;
      break;
    }
    if (h > entropy_target)
      lo = mid;
    else
      hi = mid;
  }
  const double mu = 0.5 * (lo + hi);
  Rate1Optimum out;
  out.probs = gibbs_at(mu, costs).probs;
  out.mu = mu;
  return out;
}

OptimalityGap optimality_gap(const SourceModel& source, const CostProfile& profile) {
  if (source.probs.size() != profile.costs.size())
    throw std::invalid_argument("source and cost profile sizes differ");
  OptimalityGap out;
  for (size_t i = 0; i < source.probs.size(); ++i)
    out.cost_dsc += source.probs[i] * profile.costs[i];
  const Rate1Optimum opt = optimal_rate1_distribution(source.entropy, profile);
  for (size_t i = 0; i < opt.probs.size(); ++i) out.cost_min += opt.probs[i] * profile.costs[i];
  out.gap = out.cost_dsc - out.cost_min;
  return out;
}

CostModelResult cost_model_from_cer(const std::array<CerCurve, 4>& curves, double design_lifetime,
                                    double cer_max) {
  if (!(design_lifetime > 0.0)) throw std::invalid_argument("design lifetime must be positive");
  if (!(cer_max > 0.0)) throw std::invalid_argument("maximum tolerable cell error rate must be positive");

  CostModelResult result;
  for (int level = 0; level < 4; ++level) {
    const CerCurve& curve = curves[static_cast<size_t>(level)];
    if (curve.cycles.empty() || curve.cycles.size() != curve.error_rates.size())
      throw std::invalid_argument("CER curve for level " + std::to_string(level) +
                                  " is empty or ill-formed");
    for (size_t i = 0; i < curve.cycles.size(); ++i) {
      if (!(curve.cycles[i] > 0.0)) throw std::invalid_argument("cycle counts must be positive");
      if (i > 0 && curve.cycles[i] <= curve.cycles[i - 1])
        throw std::invalid_argument("cycle counts must be increasing");
      if (curve.error_rates[i] < 0.0 || curve.error_rates[i] > 1.0)
        throw std::invalid_argument("error rates must lie in [0,1]");
    }

    double t_cross = std::numeric_limits<double>::infinity();
    bool crossed = false;
    bool ambiguous = false;
    for (size_t i = 0; i < curve.cycles.size(); ++i) {
      const bool above = curve.error_rates[i] >= cer_max;
      if (above && !crossed) {
        if (i == 0) {
          t_cross = curve.cycles[0];
        } else {
          const double f0 = curve.error_rates[i - 1], f1 = curve.error_rates[i];
          const double frac = (cer_max - f0) / (f1 - f0);
          t_cross = curve.cycles[i - 1] + frac * (curve.cycles[i] - curve.cycles[i - 1]);
        }
        crossed = true;
      } else if (!above && crossed) {
        ambiguous = true;  // curve dipped back below after crossing
      }
    }
    if (ambiguous)
      result.warnings.push_back("level " + std::to_string(level) +
                                ": non-monotone curve, first crossing used");
    result.t_max[static_cast<size_t>(level)] = t_cross;
    result.model.level_costs[static_cast<size_t>(level)] =
        crossed ? design_lifetime / t_cross : 0.0;
  }
  result.model.validate();
  return result;
}

}  // namespace shapecode

#include <bit>
#include <cmath>
#include <random>

#include "doctest.h"
#include "shapecode/slc.hpp"
#include "shapecode/channel.hpp"
#include "shapecode/theory.hpp"

using namespace shapecode;

namespace {

double entropy_of(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0) h -= x * std::log2(x);
  return h;
}

}  // namespace

TEST_CASE("asymptotic cost pairs descending probabilities with ascending costs") {
  const SourceModel source = make_source_model({0.4, 0.3, 0.2, 0.1});
  const CostProfile profile = make_cost_profile({0, 1, 1, 2});
  const AsymptoticCost c = asymptotic_cost(source, profile, 2);
  CHECK(c.per_word == doctest::Approx(0.7));
  CHECK(c.per_bit == doctest::Approx(0.35));

  const SourceModel uniform = make_source_model({0.25, 0.25, 0.25, 0.25});
  CHECK(asymptotic_cost(uniform, profile, 2).per_word == doctest::Approx(1.0));

  const SourceModel degenerate = make_source_model({1.0, 0.0, 0.0, 0.0});
  CHECK(asymptotic_cost(degenerate, profile, 2).per_word == doctest::Approx(0.0));

  CHECK_THROWS_AS(asymptotic_cost(source, make_cost_profile({0, 1}), 2), std::invalid_argument);
}

TEST_CASE("asymptotic cost is invariant under swapping tied probabilities") {
  const CostProfile profile = make_cost_profile({0, 1, 1, 2});
  const SourceModel a = make_source_model({0.4, 0.25, 0.25, 0.1});
  const SourceModel b = make_source_model({0.25, 0.4, 0.1, 0.25});
  CHECK(asymptotic_cost(a, profile, 2).per_word ==
        doctest::Approx(asymptotic_cost(b, profile, 2).per_word));
}

TEST_CASE("asymptotic cost matches the long-run encoder simulation") {
  const std::vector<double> P{0.4, 0.3, 0.2, 0.1};
  const SourceModel source = make_source_model(P);
  const CostProfile profile = make_cost_profile({0, 1, 1, 2});
  const double expect = asymptotic_cost(source, profile, 2).per_word;

  const auto words = sample_source_words(P, 2, 1000000, 97);
  SlcEncoder enc(2);
  uint64_t zeros = 0;
  for (uint32_t w : words) {
    const uint32_t y = enc.encode_word(w);
    zeros += static_cast<uint64_t>(2 - std::popcount(y));
  }
  const double empirical = static_cast<double>(zeros) / 1000000.0;
  CHECK(std::abs(empirical - expect) < 0.01);
}

TEST_CASE("maximum-entropy output distribution by bisection") {
  const CostProfile profile = make_cost_profile({0, 1, 1, 2});

  const Rate1Optimum uniform = optimal_rate1_distribution(2.0, profile);
  CHECK(uniform.mu == doctest::Approx(0.0));
  for (double p : uniform.probs) CHECK(p == doctest::Approx(0.25));

  const double H = 1.8465;
  const Rate1Optimum opt = optimal_rate1_distribution(H, profile);
  CHECK(entropy_of(opt.probs) == doctest::Approx(H).epsilon(1e-9));
  // proportionality check: p_i = 2^(-mu c_i) / Z
  double z = 0.0;
  for (size_t i = 0; i < profile.costs.size(); ++i) z += std::exp2(-opt.mu * profile.costs[i]);
  for (size_t i = 0; i < profile.costs.size(); ++i)
    CHECK(opt.probs[i] == doctest::Approx(std::exp2(-opt.mu * profile.costs[i]) / z).epsilon(1e-8));

  CHECK_THROWS_AS(optimal_rate1_distribution(2.1, profile), std::invalid_argument);
  CHECK_THROWS_AS(optimal_rate1_distribution(1.5, make_cost_profile({1, 1, 1, 1})),
                  std::invalid_argument);
}

TEST_CASE("degenerate entropy targets collapse onto the cheapest words") {
  const CostProfile profile = make_cost_profile({0, 1, 1, 2});
  const Rate1Optimum point = optimal_rate1_distribution(0.0, profile);
  CHECK(point.probs[0] == doctest::Approx(1.0));
  CHECK(std::isinf(point.mu));

  // two cheapest words: minimum entropy is 1 bit
  const CostProfile two_min = make_cost_profile({0, 0, 1, 2});
  const Rate1Optimum pair = optimal_rate1_distribution(1.0, two_min);
  CHECK(pair.probs[0] == doctest::Approx(0.5));
  CHECK(pair.probs[1] == doctest::Approx(0.5));
  CHECK_THROWS_AS(optimal_rate1_distribution(0.5, two_min), std::invalid_argument);
}

TEST_CASE("optimality gap is zero exactly for exponential-over-cost sources") {
  const CostProfile profile = make_cost_profile({0, 1, 1, 2});

  const Rate1Optimum gibbs = optimal_rate1_distribution(1.9, profile);
  const OptimalityGap zero = optimality_gap(make_source_model(gibbs.probs), profile);
  CHECK(std::abs(zero.gap) < 1e-9);

  const OptimalityGap positive = optimality_gap(make_source_model({0.4, 0.3, 0.2, 0.1}), profile);
  CHECK(positive.cost_dsc == doctest::Approx(0.7));
  CHECK(positive.gap > 0.01);

  const OptimalityGap degenerate = optimality_gap(make_source_model({1.0, 0.0, 0.0, 0.0}), profile);
  CHECK(degenerate.gap == doctest::Approx(0.0));
}

TEST_CASE("cost model from synthetic error-rate curves") {
  auto rising = [](double t_cross, double scale) {
    CerCurve c;
    for (double t = 500; t <= 9000; t += 250) {
      c.cycles.push_back(t);
      c.error_rates.push_back(scale * t / t_cross);
    }
    return c;
  };
  // cer_max = scale at t = t_cross; linear curves cross exactly there.
  const double cer_max = 0.004;
  std::array<CerCurve, 4> curves;
  curves[0].cycles = {500, 4000, 9000};
  curves[0].error_rates = {0.0001, 0.0001, 0.0001};  // flat, never crosses
  curves[1] = rising(6900, cer_max);
  curves[2] = rising(4600, cer_max);
  curves[3] = rising(3100, cer_max);

  const CostModelResult result = cost_model_from_cer(curves, 4000, cer_max);
  CHECK(result.model.level_costs[0] == doctest::Approx(0.0));
  CHECK(result.model.level_costs[1] == doctest::Approx(0.58).epsilon(0.005));
  CHECK(result.model.level_costs[2] == doctest::Approx(0.87).epsilon(0.005));
  CHECK(result.model.level_costs[3] == doctest::Approx(1.29).epsilon(0.005));
  CHECK(std::isinf(result.t_max[0]));
  CHECK(result.warnings.empty());
}

TEST_CASE("non-monotone crossings take the first one and warn") {
  std::array<CerCurve, 4> curves;
  curves[0].cycles = {100, 200};
  curves[0].error_rates = {0.0, 0.0};
  curves[1].cycles = {100, 200, 300, 400};
  curves[1].error_rates = {0.0, 0.01, 0.001, 0.02};  // dips back after crossing
  curves[2].cycles = {100, 200};
  curves[2].error_rates = {0.0, 0.02};
  curves[3].cycles = {100, 200};
  curves[3].error_rates = {0.0, 0.03};

  const CostModelResult result = cost_model_from_cer(curves, 1000, 0.005);
  CHECK(result.warnings.size() == 1);
  CHECK(result.t_max[1] == doctest::Approx(150.0));

  std::array<CerCurve, 4> empty = curves;
  empty[2].cycles.clear();
  empty[2].error_rates.clear();
  CHECK_THROWS_AS(cost_model_from_cer(empty, 1000, 0.005), std::invalid_argument);
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "shapecode/channel.hpp"
#include "shapecode/mlc.hpp"
#include "shapecode/propagation.hpp"
#include "shapecode/slc.hpp"
#include "shapecode/theory.hpp"

namespace py = pybind11;
using namespace shapecode;

namespace {

BitStream stream_from_bytes(const py::bytes& data) {
  const std::string buf = data;
  return BitStream::from_bytes(std::vector<uint8_t>(buf.begin(), buf.end()));
}

py::bytes stream_to_bytes(const BitStream& s) {
  const std::vector<uint8_t> bytes = s.to_bytes();
  return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

MlcCostModel model_from(const std::vector<double>& level_costs) {
  if (level_costs.size() != 4) throw std::invalid_argument("level_costs must have 4 entries");
  MlcCostModel model;
  std::copy(level_costs.begin(), level_costs.end(), model.level_costs.begin());
  model.validate();
  return model;
}

}  // namespace

PYBIND11_MODULE(_shapecode, m) {
  m.doc() = "Shaping codecs for SLC/MLC flash and their error-propagation analysis";

  // ---- SLC codec
  m.def(
      "slc_encode",
      [](const py::bytes& data, int word_length) {
        return stream_to_bytes(slc_encode(pad_with_ones(stream_from_bytes(data), word_length),
                                          word_length));
      },
      py::arg("data"), py::arg("m"),
      "Rate-1 shaping encode of a byte string (bits taken MSB-first, right-padded with 1s).");
  m.def(
      "slc_decode",
      [](const py::bytes& code, int word_length) {
        BitStream raw = stream_from_bytes(code);
        BitStream payload;
        const size_t keep = raw.size() - raw.size() % static_cast<size_t>(word_length);
        for (size_t i = 0; i < keep; ++i) payload.push_back(raw[i]);
        return stream_to_bytes(slc_decode(payload, word_length));
      },
      py::arg("code"), py::arg("m"));
  m.def(
      "slc_encode_words",
      [](const std::vector<uint32_t>& words, int word_length) {
        SlcEncoder enc(word_length);
        std::vector<uint32_t> out;
        out.reserve(words.size());
        for (uint32_t w : words) out.push_back(enc.encode_word(w));
        return out;
      },
      py::arg("words"), py::arg("m"));
  m.def(
      "zero_fractions",
      [](const py::bytes& data, const std::vector<uint64_t>& checkpoints) {
        return zero_fraction_profile(stream_from_bytes(data), checkpoints).fractions;
      },
      py::arg("data"), py::arg("checkpoints"),
      "Fraction of 0 bits in each prefix (checkpoint lengths in bits).");

  // ---- MLC codec
  m.def("level_of", &level_of, py::arg("lower_bit"), py::arg("upper_bit"));
  m.def(
      "mlc_encode",
      [](const py::bytes& lower, const py::bytes& upper, int word_length,
         const std::vector<double>& level_costs) {
        const auto [lc, uc] =
            mlc_encode(pad_with_ones(stream_from_bytes(lower), word_length),
                       pad_with_ones(stream_from_bytes(upper), word_length), word_length,
                       model_from(level_costs));
        return py::make_tuple(stream_to_bytes(lc), stream_to_bytes(uc));
      },
      py::arg("lower"), py::arg("upper"), py::arg("m"), py::arg("level_costs"));
  m.def(
      "mlc_decode",
      [](const py::bytes& lower_code, const py::bytes& upper_code, int word_length,
         const std::vector<double>& level_costs) {
        const auto [ld, ud] = mlc_decode(stream_from_bytes(lower_code),
                                         stream_from_bytes(upper_code), word_length,
                                         model_from(level_costs));
        return py::make_tuple(stream_to_bytes(ld), stream_to_bytes(ud));
      },
      py::arg("lower_code"), py::arg("upper_code"), py::arg("m"), py::arg("level_costs"));
  m.def(
      "average_cell_cost",
      [](const py::bytes& lower, const py::bytes& upper, const std::vector<double>& level_costs) {
        return average_cell_cost(cell_levels(stream_from_bytes(lower), stream_from_bytes(upper)),
                                 model_from(level_costs));
      },
      py::arg("lower"), py::arg("upper"), py::arg("level_costs"));

  py::class_<EnumerativeIndexer>(m, "EnumerativeIndexer",
                                 "Rank <-> upper-page word coder under a fixed lower codeword")
      .def(py::init([](uint32_t lower_word, int word_length, const std::vector<double>& costs) {
             return EnumerativeIndexer(lower_word, word_length, model_from(costs));
           }),
           py::arg("lower_word"), py::arg("m"), py::arg("level_costs"))
      .def("encode", &EnumerativeIndexer::encode, py::arg("index"))
      .def("rank", &EnumerativeIndexer::rank, py::arg("upper_word"))
      .def("word_cost", &EnumerativeIndexer::word_cost, py::arg("upper_word"))
      .def("count_with_prefix", &EnumerativeIndexer::count_with_prefix, py::arg("total_cost"),
           py::arg("prefix"))
      .def_property_readonly("class_costs", &EnumerativeIndexer::class_costs)
      .def_property_readonly("class_sizes", &EnumerativeIndexer::class_sizes);

  // ---- channel simulation
  m.def(
      "bsc_transmit",
      [](const py::bytes& data, double rho, uint64_t seed) {
        return stream_to_bytes(bsc_transmit(stream_from_bytes(data), {rho, seed}));
      },
      py::arg("data"), py::arg("rho"), py::arg("seed"));
  m.def(
      "estimate_instability",
      [](const std::vector<double>& P, int word_length, double rho,
         const std::vector<uint64_t>& t_grid, uint64_t trials, uint64_t seed,
         uint64_t sequence_words) {
        InstabilityConfig config;
        config.P = P;
        config.m = word_length;
        config.rho = rho;
        config.t_grid = t_grid;
        config.trials = trials;
        config.seed = seed;
        config.sequence_words = sequence_words;
        const TrialBatch batch = estimate_instability(config);
        py::dict out;
        out["t"] = batch.t_grid;
        out["fraction"] = batch.fractions;
        out["stderr"] = batch.std_errors;
        out["time_unit"] = batch.time_unit;
        return out;
      },
      py::arg("P"), py::arg("m"), py::arg("rho"), py::arg("t_grid"), py::arg("trials") = 2000,
      py::arg("seed") = 1, py::arg("sequence_words") = 20000);
  m.def(
      "mc_pair_walk_recurrence",
      [](const std::vector<double>& P, double rho, int ne, int nd, uint64_t trials, uint64_t seed) {
        return mc_pair_walk_recurrence(two_word_walk_model(P.at(0), P.at(1), rho), ne, nd, trials,
                                       seed);
      },
      py::arg("P"), py::arg("rho"), py::arg("ne"), py::arg("nd"), py::arg("trials") = 100000,
      py::arg("seed") = 1);

  // ---- propagation analysis
  m.def("pair_recurrence_prob", &pair_recurrence_prob, py::arg("p1"), py::arg("p2"), py::arg("n"));
  m.def(
      "pair_recurrence_upper",
      [](double p1, double p2, double rho, long long ne, long long nd) {
        const BoundValue b = pair_recurrence_upper(p1, p2, rho, ne, nd);
        return py::make_tuple(b.raw, b.clamped);
      },
      py::arg("p1"), py::arg("p2"), py::arg("rho"), py::arg("ne"), py::arg("nd"));
  m.def(
      "decode_marginals",
      [](const std::vector<double>& P, double rho, int word_length) {
        return decode_marginals(P, rho, word_length).probs;
      },
      py::arg("P"), py::arg("rho"), py::arg("m"));
  m.def(
      "pair_transition_model",
      [](const std::vector<double>& P, double rho, int word_length, int pair_index) {
        const PairWalkModel model = pair_transition_model(P, rho, word_length, pair_index);
        py::dict out;
        for (int dx = -1; dx <= 1; ++dx)
          for (int dy = -1; dy <= 1; ++dy)
            out[py::make_tuple(dx, dy)] = model.at(dx, dy);
        return out;
      },
      py::arg("P"), py::arg("rho"), py::arg("m"), py::arg("pair_index"));
  m.def(
      "grid_lower_bound",
      [](const std::vector<double>& P, double rho, int L, int ne, int nd, int pair_index,
         double tol, long long max_iterations) {
        const PairWalkModel model = P.size() == 2
                                        ? two_word_walk_model(P[0], P[1], rho)
                                        : pair_transition_model(P, rho,
                                                                static_cast<int>(std::log2(P.size())),
                                                                pair_index);
        const GridSolution sol =
            model.is_four_direction()
                ? grid_lower_bound_parity(model, L, {ne, nd}, tol, max_iterations)
                : grid_lower_bound(model, L, {ne, nd}, tol, max_iterations);
        py::dict out;
        out["value"] = sol.value_at_start();
        out["iterations"] = sol.iterations;
        out["converged"] = sol.converged;
        out["final_delta"] = sol.final_delta;
        return out;
      },
      py::arg("P"), py::arg("rho"), py::arg("L"), py::arg("ne"), py::arg("nd"),
      py::arg("pair_index") = 1, py::arg("tol") = 1e-12, py::arg("max_iterations") = 1000000);
  m.def(
      "stability_upper_bound",
      [](const std::vector<uint64_t>& counts, const std::vector<double>& P, double rho,
         int word_length) {
        const BoundValue b = stability_upper_bound(counts, P, decode_marginals(P, rho, word_length));
        return py::make_tuple(b.raw, b.clamped);
      },
      py::arg("counts"), py::arg("P"), py::arg("rho"), py::arg("m"));
  m.def(
      "instability_bound",
      [](const std::vector<double>& P, int word_length, double rho, long long t) {
        const InstabilityBound b = instability_bound(P, word_length, rho, t);
        py::dict out;
        out["bound"] = b.bound;
        out["raw"] = b.raw;
        out["probability_mass"] = b.probability_mass;
        return out;
      },
      py::arg("P"), py::arg("m"), py::arg("rho"), py::arg("t"));

  // ---- asymptotic cost theory
  m.def(
      "asymptotic_cost",
      [](const std::vector<double>& P, const std::vector<double>& costs, int word_length) {
        const AsymptoticCost c =
            asymptotic_cost(make_source_model(P), make_cost_profile(costs), word_length);
        return py::make_tuple(c.per_word, c.per_bit);
      },
      py::arg("P"), py::arg("costs"), py::arg("m"));
  m.def(
      "optimal_rate1_distribution",
      [](double entropy_bits, const std::vector<double>& costs) {
        const Rate1Optimum opt = optimal_rate1_distribution(entropy_bits, make_cost_profile(costs));
        return py::make_tuple(opt.probs, opt.mu);
      },
      py::arg("entropy_bits"), py::arg("costs"));
  m.def(
      "optimality_gap",
      [](const std::vector<double>& P, const std::vector<double>& costs) {
        const OptimalityGap g = optimality_gap(make_source_model(P), make_cost_profile(costs));
        py::dict out;
        out["cost_dsc"] = g.cost_dsc;
        out["cost_min"] = g.cost_min;
        out["gap"] = g.gap;
        return out;
      },
      py::arg("P"), py::arg("costs"));
  m.def(
      "cost_model_from_cer",
      [](const std::vector<std::pair<std::vector<double>, std::vector<double>>>& curves, double t0,
         double cer_max) {
        if (curves.size() != 4) throw std::invalid_argument("need four (cycles, rates) curves");
        std::array<CerCurve, 4> parsed;
        for (int level = 0; level < 4; ++level) {
          parsed[static_cast<size_t>(level)].level = level;
          parsed[static_cast<size_t>(level)].cycles = curves[static_cast<size_t>(level)].first;
          parsed[static_cast<size_t>(level)].error_rates = curves[static_cast<size_t>(level)].second;
        }
        const CostModelResult r = cost_model_from_cer(parsed, t0, cer_max);
        return std::vector<double>(r.model.level_costs.begin(), r.model.level_costs.end());
      },
      py::arg("curves"), py::arg("t0"), py::arg("cer_max"));

  m.attr("__version__") = "0.1.0";
}

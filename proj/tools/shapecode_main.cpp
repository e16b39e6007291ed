// shapecode: wear-reducing shaping codecs for SLC/MLC flash plus the
// error-propagation analysis toolkit. One binary, subcommands via --cmd.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "shapecode/channel.hpp"
#include "shapecode/io.hpp"
#include "shapecode/mlc.hpp"
#include "shapecode/propagation.hpp"
#include "shapecode/slc.hpp"
#include "shapecode/theory.hpp"

using json = nlohmann::json;
using namespace shapecode;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
  std::string cmd;
  std::string input;
  std::string lower;
  std::string upper;
  std::string out;
  std::string cost_model;
  std::string config;
  std::string costs;
  std::string probs;
  std::string t_grid;
  std::string start;
  std::string ne;
  std::string nd;
  std::string shaping = "mlc";
  std::string cer_csv;
  int m = 2;
  double rho = 0.05;
  uint64_t trials = 2000;
  uint64_t seed = 1;
  uint64_t sequence_words = 20000;
  uint64_t prefix_bytes = 10000;
  uint64_t payload_bits = 0;
  uint64_t data_bits = 0;
  int grid_l = 60;
  int pair_index = 1;
  double tol = 1e-12;
  long long max_iterations = 1000000;
  double t0 = 4000.0;
  double cer_max = 0.0;
  // which flags were explicitly set (for config-file overrides)
  CLI::App* app = nullptr;
  bool set(const std::string& flag) const { return app->count(flag) > 0; }
};

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::invalid_argument("empty numeric list: '" + s + "'");
  return out;
}

std::vector<uint64_t> parse_u64_list(const std::string& s) {
  std::vector<uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoull(item));
  }
  if (out.empty()) throw std::invalid_argument("empty integer list: '" + s + "'");
  return out;
}

// "3" -> {3};  "1:12" -> {1..12};  "1,2,5" -> {1,2,5}
std::vector<int> parse_int_set(const std::string& s) {
  std::vector<int> out;
  if (s.find(':') != std::string::npos) {
    const auto sep = s.find(':');
    const int a = std::stoi(s.substr(0, sep));
    const int b = std::stoi(s.substr(sep + 1));
    if (b < a) throw std::invalid_argument("bad range: '" + s + "'");
    for (int v = a; v <= b; ++v) out.push_back(v);
    return out;
  }
  for (uint64_t v : parse_u64_list(s)) out.push_back(static_cast<int>(v));
  return out;
}

MlcCostModel parse_cost_model(const std::string& arg) {
  json doc;
  if (!arg.empty() && arg.front() == '{') {
    doc = json::parse(arg);
  } else {
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument("cannot open cost model file: " + arg);
    in >> doc;
  }
  if (!doc.contains("level_costs") || !doc["level_costs"].is_array() ||
      doc["level_costs"].size() != 4)
    throw std::invalid_argument("cost model JSON must contain \"level_costs\": [c0,c1,c2,c3]");
  MlcCostModel model;
  for (size_t i = 0; i < 4; ++i) model.level_costs[i] = doc["level_costs"][i].get<double>();
  model.validate();
  return model;
}

void apply_config_file(Options& opt) {
  if (opt.config.empty()) return;
  std::ifstream in(opt.config);
  if (!in) throw std::invalid_argument("cannot open config file: " + opt.config);
  json doc;
  in >> doc;
  auto set_if_unset = [&](const char* key, auto& field, const char* flag) {
    if (doc.contains(key) && !opt.set(flag)) field = doc[key].get<std::decay_t<decltype(field)>>();
  };
  if (doc.contains("P") && !opt.set("--P")) {
    std::string joined;
    for (const auto& v : doc["P"]) {
      if (!joined.empty()) joined += ',';
      joined += format_value(v.get<double>());
    }
    opt.probs = joined;
  }
  if (doc.contains("t_grid") && !opt.set("--t-grid")) {
    std::string joined;
    for (const auto& v : doc["t_grid"]) {
      if (!joined.empty()) joined += ',';
      joined += std::to_string(v.get<uint64_t>());
    }
    opt.t_grid = joined;
  }
  set_if_unset("m", opt.m, "--m");
  set_if_unset("rho", opt.rho, "--rho");
  set_if_unset("trials", opt.trials, "--trials");
  set_if_unset("seed", opt.seed, "--seed");
  set_if_unset("sequence_words", opt.sequence_words, "--sequence-words");
  set_if_unset("prefix_bytes", opt.prefix_bytes, "--prefix-bytes");
}

json base_manifest(const Options& opt, double wall_ms) {
  json m;
  m["command"] = opt.cmd;
  m["seed"] = opt.seed;
  m["version"] = {{"shapecode", kVersion}};
  m["wall_time_ms"] = wall_ms;
  return m;
}

void write_manifest(const Options& opt, json manifest) {
  if (opt.out.empty()) return;
  std::ofstream out(opt.out + ".manifest.json", std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write manifest next to " + opt.out);
  out << manifest.dump(2) << "\n";
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

uint64_t floor_multiple(uint64_t value, uint64_t quantum) { return value - value % quantum; }

// ---------------------------------------------------------------- commands

json cmd_slc_encode(const Options& opt) {
  require(!opt.input.empty(), "--input is required (key: input)");
  require(!opt.out.empty(), "--out is required (key: out)");
  const BitStream data = ingest_corpus(opt.input);
  const uint64_t data_bits = data.size();
  const BitStream padded = pad_with_ones(data, opt.m);
  const BitStream code = slc_encode(padded, opt.m);
  write_file_bytes(opt.out, code.to_bytes());
  json extra;
  extra["m"] = opt.m;
  extra["data_bits"] = data_bits;
  extra["payload_bits"] = padded.size();
  extra["outputs"] = {opt.out};
  return extra;
}

json cmd_slc_decode(const Options& opt) {
  require(!opt.input.empty(), "--input is required (key: input)");
  require(!opt.out.empty(), "--out is required (key: out)");
  const BitStream raw = ingest_corpus(opt.input);
  const uint64_t payload =
      opt.payload_bits ? opt.payload_bits : floor_multiple(raw.size(), static_cast<uint64_t>(opt.m));
  require(payload <= raw.size(), "--payload-bits exceeds the input size (key: payload-bits)");
  require(payload % static_cast<uint64_t>(opt.m) == 0,
          "--payload-bits must be a multiple of m (key: payload-bits)");
  BitStream code;
  for (uint64_t i = 0; i < payload; ++i) code.push_back(raw[i]);
  BitStream data = slc_decode(code, opt.m);
  const uint64_t keep = opt.data_bits ? opt.data_bits : data.size();
  require(keep <= data.size(), "--data-bits exceeds the decoded size (key: data-bits)");
  BitStream trimmed;
  for (uint64_t i = 0; i < keep; ++i) trimmed.push_back(data[i]);
  write_file_bytes(opt.out, trimmed.to_bytes());
  json extra;
  extra["m"] = opt.m;
  extra["payload_bits"] = payload;
  extra["data_bits"] = keep;
  extra["outputs"] = {opt.out};
  return extra;
}

std::pair<BitStream, BitStream> split_pages(const Options& opt, uint64_t* data_bits_per_page) {
  BitStream lower, upper;
  if (!opt.lower.empty() || !opt.upper.empty()) {
    require(!opt.lower.empty() && !opt.upper.empty(),
            "--lower and --upper must be given together (key: lower/upper)");
    lower = ingest_corpus(opt.lower);
    upper = ingest_corpus(opt.upper);
    require(lower.size() == upper.size(), "lower/upper files must have equal size");
  } else {
    require(!opt.input.empty(), "--input (split in half) or --lower/--upper required (key: input)");
    const BitStream all = ingest_corpus(opt.input);
    const uint64_t half = floor_multiple(all.size() / 2, 8);
    for (uint64_t i = 0; i < half; ++i) lower.push_back(all[i]);
    for (uint64_t i = half; i < 2 * half; ++i) upper.push_back(all[i]);
  }
  if (data_bits_per_page) *data_bits_per_page = lower.size();
  return {pad_with_ones(std::move(lower), opt.m), pad_with_ones(std::move(upper), opt.m)};
}

json cmd_mlc_encode(const Options& opt) {
  require(!opt.out.empty(), "--out is required (key: out)");
  require(!opt.cost_model.empty(), "--cost-model is required (key: cost-model)");
  const MlcCostModel model = parse_cost_model(opt.cost_model);
  uint64_t data_bits = 0;
  const auto [lower, upper] = split_pages(opt, &data_bits);
  const auto [lc, uc] = mlc_encode(lower, upper, opt.m, model);
  write_file_bytes(opt.out + ".lower", lc.to_bytes());
  write_file_bytes(opt.out + ".upper", uc.to_bytes());
  json extra;
  extra["m"] = opt.m;
  extra["level_costs"] = model.level_costs;
  extra["data_bits_per_page"] = data_bits;
  extra["payload_bits_per_page"] = lower.size();
  extra["avg_cost_shaped"] = average_cell_cost(cell_levels(lc, uc), model);
  extra["avg_cost_uncoded"] = average_cell_cost(cell_levels(lower, upper), model);
  extra["outputs"] = {opt.out + ".lower", opt.out + ".upper"};
  return extra;
}

json cmd_mlc_decode(const Options& opt) {
  require(!opt.lower.empty() && !opt.upper.empty(),
          "--lower and --upper code files are required (key: lower/upper)");
  require(!opt.out.empty(), "--out is required (key: out)");
  require(!opt.cost_model.empty(), "--cost-model is required (key: cost-model)");
  const MlcCostModel model = parse_cost_model(opt.cost_model);
  const BitStream lc_raw = ingest_corpus(opt.lower);
  const BitStream uc_raw = ingest_corpus(opt.upper);
  const uint64_t payload = opt.payload_bits
                               ? opt.payload_bits
                               : floor_multiple(std::min(lc_raw.size(), uc_raw.size()),
                                                static_cast<uint64_t>(opt.m));
  require(payload % static_cast<uint64_t>(opt.m) == 0 && payload <= lc_raw.size() &&
              payload <= uc_raw.size(),
          "--payload-bits must be a multiple of m within both files (key: payload-bits)");
  BitStream lc, uc;
  for (uint64_t i = 0; i < payload; ++i) lc.push_back(lc_raw[i]);
  for (uint64_t i = 0; i < payload; ++i) uc.push_back(uc_raw[i]);
  const auto [ld, ud] = mlc_decode(lc, uc, opt.m, model);
  const uint64_t keep = opt.data_bits ? opt.data_bits : ld.size();
  require(keep <= ld.size(), "--data-bits exceeds the decoded page size (key: data-bits)");
  BitStream ltrim, utrim;
  for (uint64_t i = 0; i < keep; ++i) ltrim.push_back(ld[i]);
  for (uint64_t i = 0; i < keep; ++i) utrim.push_back(ud[i]);
  write_file_bytes(opt.out + ".lower", ltrim.to_bytes());
  write_file_bytes(opt.out + ".upper", utrim.to_bytes());
  json extra;
  extra["m"] = opt.m;
  extra["payload_bits_per_page"] = payload;
  extra["data_bits_per_page"] = keep;
  extra["outputs"] = {opt.out + ".lower", opt.out + ".upper"};
  return extra;
}

json cmd_profile(const Options& opt) {
  require(!opt.out.empty(), "--out is required (key: out)");

  if (opt.cost_model.empty()) {
    // SLC zero-fraction profile; --m 0 profiles the uncoded stream.
    require(!opt.input.empty(), "--input is required (key: input)");
    const BitStream data = ingest_corpus(opt.input);
    require(data.size() > 0, "input file is empty (key: input)");
    BitStream stream;
    if (opt.m == 0) {
      stream = data;
    } else {
      stream = slc_encode(pad_with_ones(data, opt.m), opt.m);
    }
    const auto checkpoints = log_spaced_checkpoints(std::min<uint64_t>(1024, stream.size()),
                                                    stream.size());
    const ZeroFractionProfile profile = zero_fraction_profile(stream, checkpoints);
    CsvWriter csv({"gamma", "fraction"});
    for (size_t i = 0; i < profile.checkpoints.size(); ++i)
      csv.add_row({format_value(profile.checkpoints[i]), format_value(profile.fractions[i])});
    csv.write(opt.out);
    json extra;
    extra["m"] = opt.m;
    extra["stream_bits"] = stream.size();
    extra["final_fraction"] = profile.fractions.back();
    extra["outputs"] = {opt.out};
    return extra;
  }

  // MLC level-fraction profile over the split input. --shaping selects the
  // codec: none (uncoded), slc (independent pages), mlc (page-dependent).
  const MlcCostModel model = parse_cost_model(opt.cost_model);
  uint64_t data_bits = 0;
  const auto [lower, upper] = split_pages(opt, &data_bits);
  BitStream page_lower = lower, page_upper = upper;
  if (opt.shaping == "mlc") {
    std::tie(page_lower, page_upper) = mlc_encode(lower, upper, opt.m, model);
  } else if (opt.shaping == "slc") {
    page_lower = slc_encode(lower, opt.m);
    page_upper = slc_encode(upper, opt.m);
  } else {
    require(opt.shaping == "none", "--shaping must be one of none|slc|mlc (key: shaping)");
  }
  const std::vector<uint8_t> levels = cell_levels(page_lower, page_upper);
  const auto checkpoints =
      log_spaced_checkpoints(std::min<uint64_t>(1024, levels.size()), levels.size());
  const LevelFractionProfile profile = level_fraction_profile(levels, checkpoints, model);
  CsvWriter csv({"gamma", "frac_L0", "frac_L1", "frac_L2", "frac_L3", "avg_cost"});
  for (size_t i = 0; i < profile.checkpoints.size(); ++i)
    csv.add_row({format_value(profile.checkpoints[i]), format_value(profile.fractions[0][i]),
                 format_value(profile.fractions[1][i]), format_value(profile.fractions[2][i]),
                 format_value(profile.fractions[3][i]), format_value(profile.avg_costs[i])});
  csv.write(opt.out);
  json extra;
  extra["m"] = opt.m;
  extra["shaping"] = opt.shaping;
  extra["level_costs"] = model.level_costs;
  extra["cells"] = levels.size();
  extra["avg_cost"] = profile.avg_costs.back();
  extra["outputs"] = {opt.out};
  return extra;
}

json cmd_bounds(const Options& opt) {
  require(!opt.out.empty(), "--out is required (key: out)");
  require(!opt.probs.empty(), "--P is required (key: P)");
  require(!opt.ne.empty() && !opt.nd.empty(), "--ne and --nd are required (key: ne/nd)");
  const std::vector<double> P = parse_doubles(opt.probs);
  const std::vector<int> ne_set = parse_int_set(opt.ne);
  const std::vector<int> nd_set = parse_int_set(opt.nd);

  PairWalkModel walk;
  DecodeMarginals marginals;
  bool two_word = P.size() == 2;
  if (two_word) {
    walk = two_word_walk_model(P[0], P[1], opt.rho);
  } else {
    walk = pair_transition_model(P, opt.rho, opt.m, opt.pair_index);
    marginals = decode_marginals(P, opt.rho, opt.m);
  }

  int max_start = 0;
  for (int v : ne_set) max_start = std::max(max_start, v);
  for (int v : nd_set) max_start = std::max(max_start, v);
  require(opt.grid_l > max_start, "--L must exceed every start coordinate (key: L)");

  // One relaxation serves every start; solve at an interior point and read
  // the whole field.
  const GridStart probe{std::max(1, ne_set.front()), std::max(1, nd_set.front())};
  const GridSolution plain = grid_lower_bound(walk, opt.grid_l, probe, opt.tol, opt.max_iterations);
  std::optional<GridSolution> parity_even, parity_odd;
  auto grid_value = [&](int ne, int nd) -> double {
    if (!two_word) return plain.at(ne, nd);
    const int parity = (ne + nd) & 1;
    auto& cache = parity ? parity_odd : parity_even;
    if (!cache)
      cache = grid_lower_bound_parity(walk, opt.grid_l, {ne, nd}, opt.tol, opt.max_iterations);
    return cache->at(ne, nd);
  };

  CsvWriter csv({"Ne", "Nd", "lower", "upper", "mc"});
  uint64_t stream = 0;
  for (int ne : ne_set)
    for (int nd : nd_set) {
      const double lower = grid_value(ne, nd);
      const BoundValue upper =
          two_word ? pair_recurrence_upper(P[0], P[1], opt.rho, ne, nd)
                   : dictionary_pair_upper(P, marginals, opt.pair_index, ne, nd);
      const double mc = mc_pair_walk_recurrence(walk, ne, nd, opt.trials,
                                                derive_seed(opt.seed, stream++),
                                                std::max(80, opt.grid_l + 20));
      csv.add_row({format_value(static_cast<uint64_t>(ne)), format_value(static_cast<uint64_t>(nd)),
                   format_value(lower), format_value(upper.clamped), format_value(mc)});
    }
  csv.write(opt.out);
  json extra;
  extra["P"] = P;
  extra["rho"] = opt.rho;
  extra["L"] = opt.grid_l;
  extra["trials"] = opt.trials;
  if (!two_word) extra["pair_index"] = opt.pair_index;
  extra["outputs"] = {opt.out};
  return extra;
}

json cmd_grid(const Options& opt) {
  require(!opt.out.empty(), "--out is required (key: out)");
  require(!opt.probs.empty(), "--P is required (key: P)");
  require(!opt.start.empty(), "--start \"ne,nd\" is required (key: start)");
  const std::vector<double> P = parse_doubles(opt.probs);
  const auto start_vals = parse_u64_list(opt.start);
  require(start_vals.size() == 2, "--start must be \"ne,nd\" (key: start)");
  const GridStart start{static_cast<int>(start_vals[0]), static_cast<int>(start_vals[1])};

  PairWalkModel walk = P.size() == 2 ? two_word_walk_model(P[0], P[1], opt.rho)
                                     : pair_transition_model(P, opt.rho, opt.m, opt.pair_index);
  const GridSolution sol =
      walk.is_four_direction()
          ? grid_lower_bound_parity(walk, opt.grid_l, start, opt.tol, opt.max_iterations)
          : grid_lower_bound(walk, opt.grid_l, start, opt.tol, opt.max_iterations);

  std::vector<std::string> header{"ne\\nd"};
  for (int nd = 0; nd <= opt.grid_l; ++nd) header.push_back(std::to_string(nd));
  CsvWriter csv(header);
  for (int ne = 0; ne <= opt.grid_l; ++ne) {
    std::vector<std::string> row{std::to_string(ne)};
    for (int nd = 0; nd <= opt.grid_l; ++nd) row.push_back(format_value(sol.at(ne, nd)));
    csv.add_row(row);
  }
  csv.write(opt.out);
  json extra;
  extra["P"] = P;
  extra["rho"] = opt.rho;
  extra["L"] = opt.grid_l;
  extra["start"] = {start.ne, start.nd};
  extra["value_at_start"] = sol.value_at_start();
  extra["iterations"] = sol.iterations;
  extra["converged"] = sol.converged;
  extra["final_delta"] = sol.final_delta;
  extra["stopping_criterion"] = sol.converged ? "tolerance" : "max_iterations";
  extra["outputs"] = {opt.out};
  return extra;
}

json cmd_instability(const Options& opt) {
  require(!opt.out.empty(), "--out is required (key: out)");
  require(!opt.probs.empty(), "--P is required (key: P)");
  require(!opt.t_grid.empty(), "--t-grid is required (key: t-grid)");
  InstabilityConfig config;
  config.P = parse_doubles(opt.probs);
  config.m = opt.m;
  config.rho = opt.rho;
  config.t_grid = parse_u64_list(opt.t_grid);
  config.trials = opt.trials;
  config.seed = opt.seed;
  config.sequence_words = opt.sequence_words;
  const TrialBatch batch = estimate_instability(config);

  CsvWriter csv({"t", "fraction", "stderr", "bound", "bound_raw"});
  for (size_t i = 0; i < batch.t_grid.size(); ++i) {
    const InstabilityBound bound =
        instability_bound(config.P, config.m, config.rho, static_cast<long long>(batch.t_grid[i]));
    csv.add_row({format_value(batch.t_grid[i]), format_value(batch.fractions[i]),
                 format_value(batch.std_errors[i]), format_value(bound.bound),
                 format_value(bound.raw)});
  }
  csv.write(opt.out);
  json extra;
  extra["P"] = config.P;
  extra["m"] = config.m;
  extra["rho"] = config.rho;
  extra["trials"] = config.trials;
  extra["sequence_words"] = config.sequence_words;
  extra["time_unit"] = batch.time_unit;
  extra["outputs"] = {opt.out};
  return extra;
}

json cmd_montecarlo(const Options& opt) {
  require(!opt.input.empty(), "--input corpus file is required (key: input)");
  require(!opt.out.empty(), "--out is required (key: out)");
  require(!opt.t_grid.empty(), "--t-grid is required (key: t-grid)");
  const BitStream corpus = ingest_corpus(opt.input);
  CorpusDecodeConfig config;
  config.m = opt.m;
  config.rho = opt.rho;
  config.t_grid = parse_u64_list(opt.t_grid);
  config.trials = opt.trials;
  config.seed = opt.seed;
  config.prefix_bytes = opt.prefix_bytes;
  const TrialBatch batch = estimate_corpus_decode_recurrence(corpus, config);

  CsvWriter csv({"t", "fraction", "stderr"});
  for (size_t i = 0; i < batch.t_grid.size(); ++i)
    csv.add_row({format_value(batch.t_grid[i]), format_value(batch.fractions[i]),
                 format_value(batch.std_errors[i])});
  csv.write(opt.out);

  // context: the clean encoder's recurrence tail for this prefix
  const uint64_t words = config.prefix_bytes * 8 / static_cast<uint64_t>(config.m);
  std::vector<uint32_t> source(words);
  for (uint64_t k = 0; k < words; ++k) source[k] = corpus.word_value(k, config.m);
  const EncodeTrace trace = trace_encode_recurrences(source, config.m);
  json extra;
  extra["m"] = config.m;
  extra["rho"] = config.rho;
  extra["trials"] = config.trials;
  extra["prefix_bytes"] = config.prefix_bytes;
  extra["time_unit"] = batch.time_unit;
  if (!trace.events.empty()) {
    const RecurrenceEvent& last = trace.events.back();
    extra["last_encoder_recurrence"] = {
        {"t_words", last.t},
        {"gamma_bits", last.t * static_cast<uint64_t>(config.m)},
        {"pair", last.pair},
        {"words", {BitWord(last.upper_word, config.m).to_string(),
                   BitWord(last.lower_word, config.m).to_string()}}};
  }
  extra["outputs"] = {opt.out};
  return extra;
}

CerCurve read_cer_curve_rows(const std::filesystem::path& path, int level) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open CER CSV: " + path.string());
  std::string line;
  CerCurve curve;
  curve.level = level;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {  // header: level,cycles,error_rate
      first = false;
      continue;
    }
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string l, c, e;
    std::getline(ss, l, ',');
    std::getline(ss, c, ',');
    std::getline(ss, e, ',');
    if (std::stoi(l) != level) continue;
    curve.cycles.push_back(std::stod(c));
    curve.error_rates.push_back(std::stod(e));
  }
  return curve;
}

json cmd_theory(const Options& opt) {
  require(!opt.out.empty(), "--out is required (key: out)");
  json result;

  if (!opt.cer_csv.empty()) {
    require(opt.cer_max > 0.0, "--cermax is required with --cer-csv (key: cermax)");
    std::array<CerCurve, 4> curves;
    for (int level = 0; level < 4; ++level) curves[static_cast<size_t>(level)] = read_cer_curve_rows(opt.cer_csv, level);
    const CostModelResult derived = cost_model_from_cer(curves, opt.t0, opt.cer_max);
    result["level_costs"] = derived.model.level_costs;
    json tmax = json::array();
    for (double t : derived.t_max)
      tmax.push_back(std::isinf(t) ? json(nullptr) : json(t));
    result["t_max"] = tmax;
    result["t0"] = opt.t0;
    result["cer_max"] = opt.cer_max;
    result["warnings"] = derived.warnings;
  }

  if (!opt.probs.empty()) {
    require(!opt.costs.empty(), "--costs is required with --P (key: costs)");
    const SourceModel source = make_source_model(parse_doubles(opt.probs));
    const CostProfile profile = make_cost_profile(parse_doubles(opt.costs));
    const int m = opt.set("--m") ? opt.m : static_cast<int>(std::round(std::log2(source.probs.size())));
    const AsymptoticCost cost = asymptotic_cost(source, profile, m);
    const OptimalityGap gap = optimality_gap(source, profile);
    const Rate1Optimum opt_dist = optimal_rate1_distribution(source.entropy, profile);
    result["per_word"] = cost.per_word;
    result["per_bit"] = cost.per_bit;
    result["entropy_bits_per_word"] = source.entropy;
    result["cost_min"] = gap.cost_min;
    result["gap"] = gap.gap;
    result["mu"] = std::isinf(opt_dist.mu) ? json(nullptr) : json(opt_dist.mu);
    result["optimal_distribution"] = opt_dist.probs;
  }

  require(!result.empty(), "theory needs --P/--costs and/or --cer-csv (key: P)");
  std::ofstream out(opt.out, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + opt.out);
  out << result.dump(2) << "\n";
  json extra;
  extra["outputs"] = {opt.out};
  return extra;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Shaping codecs for SLC/MLC flash and their error-propagation analysis"};
  opt.app = &app;

  app.add_option("--cmd", opt.cmd,
                 "one of: slc-encode, slc-decode, mlc-encode, mlc-decode, profile, bounds, grid, "
                 "instability, montecarlo, theory")
      ->required();
  app.add_option("--input", opt.input, "input file (raw bytes / corpus / CSV)");
  app.add_option("--lower", opt.lower, "lower page file (mlc commands)");
  app.add_option("--upper", opt.upper, "upper page file (mlc commands)");
  app.add_option("--out", opt.out, "output path (CSV/JSON/binary; manifest written alongside)");
  app.add_option("--m", opt.m, "parsing length in bits (profile: 0 = uncoded)");
  app.add_option("--rho", opt.rho, "BSC crossover probability");
  app.add_option("--trials", opt.trials, "Monte Carlo trial count");
  app.add_option("--seed", opt.seed, "master 64-bit seed");
  app.add_option("--t-grid", opt.t_grid, "comma-separated conditioning times (words)");
  app.add_option("--cost-model", opt.cost_model, "JSON file or inline {\"level_costs\":[...]}");
  app.add_option("--config", opt.config, "JSON config file; explicit flags win");
  app.add_option("--P", opt.probs, "comma-separated source distribution, sorted descending");
  app.add_option("--costs", opt.costs, "comma-separated per-codeword costs (theory)");
  app.add_option("--ne", opt.ne, "start N^e: value, list, or a:b range (bounds)");
  app.add_option("--nd", opt.nd, "start N^d: value, list, or a:b range (bounds)");
  app.add_option("--start", opt.start, "grid start \"ne,nd\" (grid)");
  app.add_option("--pair", opt.pair_index, "adjacent pair index, 1-based (bounds/grid)");
  app.add_option("--L", opt.grid_l, "grid boundary size");
  app.add_option("--tol", opt.tol, "grid solver delta tolerance");
  app.add_option("--max-iters", opt.max_iterations, "grid solver iteration cap");
  app.add_option("--sequence-words", opt.sequence_words, "source words per trial (instability)");
  app.add_option("--prefix-bytes", opt.prefix_bytes, "corpus prefix to encode (montecarlo)");
  app.add_option("--payload-bits", opt.payload_bits, "coded payload length in bits (decode)");
  app.add_option("--data-bits", opt.data_bits, "original data length in bits (decode)");
  app.add_option("--shaping", opt.shaping, "profile codec: none|slc|mlc");
  app.add_option("--cer-csv", opt.cer_csv, "CER curve CSV: level,cycles,error_rate (theory)");
  app.add_option("--t0", opt.t0, "design lifetime in P/E cycles (theory)");
  app.add_option("--cermax", opt.cer_max, "maximum tolerable cell error rate (theory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    apply_config_file(opt);
    json extra;
    if (opt.cmd == "slc-encode") extra = cmd_slc_encode(opt);
    else if (opt.cmd == "slc-decode") extra = cmd_slc_decode(opt);
    else if (opt.cmd == "mlc-encode") extra = cmd_mlc_encode(opt);
    else if (opt.cmd == "mlc-decode") extra = cmd_mlc_decode(opt);
    else if (opt.cmd == "profile") extra = cmd_profile(opt);
    else if (opt.cmd == "bounds") extra = cmd_bounds(opt);
    else if (opt.cmd == "grid") extra = cmd_grid(opt);
    else if (opt.cmd == "instability") extra = cmd_instability(opt);
    else if (opt.cmd == "montecarlo") extra = cmd_montecarlo(opt);
    else if (opt.cmd == "theory") extra = cmd_theory(opt);
    else throw std::invalid_argument("unknown command '" + opt.cmd + "' (key: cmd)");

    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();
    json manifest = base_manifest(opt, wall_ms);
    manifest["config"] = extra;
    write_manifest(opt, manifest);
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

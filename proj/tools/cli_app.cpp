#include "cli_app.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mallows/analytics.hpp"
#include "mallows/estimators.hpp"
#include "mallows/exact.hpp"
#include "mallows/experiments.hpp"
#include "mallows/insertion.hpp"
#include "mallows/json_io.hpp"
#include "mallows/monotone.hpp"
#include "mallows/parallel.hpp"
#include "mallows/regen.hpp"

namespace mallows::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  return f;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

// Full-precision text for CSV columns.
std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return s.str();
}

Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read '" + path + "'");
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw UsageError("'" + path + "' is not valid JSON: " + e.what());
  }
}

struct Common {
  double q = 0.5;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 1;
};

void add_common(CLI::App* cmd, Common& c, bool with_q = true) {
  if (with_q) cmd->add_option("--q", c.q, "Mallows parameter in (0, 1)")->capture_default_str();
  cmd->add_option("--seed", c.seed, "master seed")->capture_default_str();
  cmd->add_option("--workers", c.workers, "worker threads (env MALLOWS_WORKERS)")->check(CLI::PositiveNumber);
}

// ---------------------------------------------------------------- sample

struct SampleArgs {
  Common common;
  std::uint64_t n = 10;
  std::uint64_t count = 1;
  std::string format = "json";
};

void cmd_sample(const SampleArgs& a, std::ostream& out) {
  const MallowsParams params{a.common.q};
  if (a.n < 1 || a.count < 1) throw UsageError("--n and --count must be >= 1");
  struct Record {
    Permutation p;
    std::size_t lis = 0, lds = 0;
    std::uint64_t inv = 0;
  };
  std::vector<Record> records(a.count);
  parallel_for(a.count, a.common.workers, [&](std::uint64_t i) {
    GeometricStream stream(params, a.common.seed, stream_id(StreamPurpose::kSample, i));
    auto p = sample_mallows(a.n, params, stream);
    records[i] = {p, lis_length(p), lds_length(p), inversions(p)};
  });
  if (a.format == "json") {
    Json j;
    j["config"] = {{"command", "sample"}, {"n", a.n}, {"q", a.common.q}, {"seed", a.common.seed}, {"count", a.count}};
    Json recs = Json::array();
    for (std::size_t i = 0; i < records.size(); ++i) {
      recs.push_back({{"index", i},
                      {"permutation", permutation_to_json(records[i].p)},
                      {"lis", records[i].lis},
                      {"lds", records[i].lds},
                      {"inversions", records[i].inv}});
    }
    j["records"] = recs;
    emit(out, j);
  } else {
    out << "index,permutation,lis,lds,inversions\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[i];
      std::vector<int> shown = a.format == "array" ? r.p.array_form()
                                                   : std::vector<int>(r.p.one_line().begin(), r.p.one_line().end());
      out << i << ',';
      for (std::size_t k = 0; k < shown.size(); ++k) out << (k ? " " : "") << shown[k];
      out << ',' << r.lis << ',' << r.lds << ',' << r.inv << '\n';
    }
  }
}

// ---------------------------------------------------------------- blocks

struct BlocksArgs {
  Common common;
  std::uint64_t blocks = 1000;
  std::string out_path;
};

void cmd_blocks(const BlocksArgs& a, std::ostream& out) {
  const MallowsParams params{a.common.q};
  if (a.blocks < 1) throw UsageError("--blocks must be >= 1");
  auto file = open_output(a.out_path);
  constexpr std::uint64_t kChunks = 64;
  const auto chunks = std::min(kChunks, a.blocks);
  std::vector<std::vector<BlockStats>> parts(chunks);
  parallel_for(chunks, a.common.workers, [&](std::uint64_t c) {
    BlockSampler sampler(params, GeometricStream(params, a.common.seed, stream_id(StreamPurpose::kBlocks, c)));
    const auto count = chunk_size(a.blocks, chunks, c);
    parts[c].reserve(count);
    for (std::uint64_t b = 0; b < count; ++b) parts[c].push_back(sampler.next_stats());
  });
  file << "x,y,y_down\n";
  BlockMoments m;
  double sum_down = 0, sum_down_sq = 0;
  for (const auto& part : parts) {
    for (const auto& b : part) {
      file << b.x << ',' << b.y << ',' << b.y_down << '\n';
      m.add(b);
      sum_down += b.y_down;
      sum_down_sq += static_cast<double>(b.y_down) * b.y_down;
    }
  }
  file.close();
  if (!file) throw IoError("failed writing '" + a.out_path + "'");
  const double count = static_cast<double>(m.count());
  Json j;
  j["config"] = {{"command", "blocks"}, {"q", a.common.q}, {"blocks", a.blocks}, {"seed", a.common.seed},
                 {"stream_first", stream_id(StreamPurpose::kBlocks, 0)}, {"stream_count", chunks},
                 {"out", a.out_path}};
  j["count"] = m.count();
  j["mean_x"] = static_cast<double>(m.moment(1, 0));
  j["mean_y"] = static_cast<double>(m.moment(0, 1));
  j["mean_y_down"] = sum_down / count;
  j["second_moments"] = {{"xx", static_cast<double>(m.moment(2, 0))},
                         {"xy", static_cast<double>(m.moment(1, 1))},
                         {"yy", static_cast<double>(m.moment(0, 2))},
                         {"y_down_y_down", sum_down_sq / count}};
  j["mu0_hat"] = 1.0 / static_cast<double>(m.moment(1, 0));
  emit(out, j);
}

// -------------------------------------------------------------- estimate

struct EstimateArgs {
  Common common;
  std::uint64_t blocks = 1'000'000;
  std::uint64_t groups = 100;
};

void cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  const auto c = estimate_constants(a.common.q, a.blocks, a.common.seed, a.common.workers, a.groups);
  Json j;
  j["config"] = {{"command", "estimate"}, {"q", a.common.q}, {"blocks", a.blocks}, {"groups", a.groups},
                 {"seed", a.common.seed}};
  j["constants"] = constants_to_json(c);
  j["euler_mu0"] = euler_mu0(a.common.q);
  emit(out, j);
}

// ------------------------------------------------------------ clt / lds

struct CltArgs {
  Common common;
  std::uint64_t n = 20000;
  std::uint64_t reps = 1000;
  std::string constants_path;
  std::string config_path;
  std::string csv_path;
  CltThresholds thresholds;
};

CltThresholds read_clt_thresholds(const Json& cfg, CltThresholds t) {
  if (!cfg.contains("thresholds")) return t;
  const auto& th = cfg.at("thresholds");
  t.ks_max = th.value("ks_max", t.ks_max);
  t.mean_abs_max = th.value("mean_abs_max", t.mean_abs_max);
  t.variance_min = th.value("variance_min", t.variance_min);
  t.variance_max = th.value("variance_max", t.variance_max);
  return t;
}

void write_samples_csv(const std::string& path, const std::string& column, const std::vector<double>& samples) {
  auto f = open_output(path);
  f << "replicate," << column << '\n';
  for (std::size_t i = 0; i < samples.size(); ++i) f << i << ',' << num(samples[i]) << '\n';
  f.close();
  if (!f) throw IoError("failed writing '" + path + "'");
}

void cmd_clt(const CltArgs& a, std::ostream& out) {
  const Json doc = read_json_file(a.constants_path);
  CltConstants c;
  try {
    c = constants_from_json(doc.contains("constants") ? doc.at("constants") : doc);
  } catch (const Json::exception& e) {
    throw UsageError("'" + a.constants_path + "' does not hold constants: " + e.what());
  }
  if (c.q != a.common.q) throw UsageError("constants file was estimated for a different q");
  if (a.n < 1 || a.reps < 2) throw UsageError("--n must be >= 1 and --reps >= 2");
  const auto rep = clt_experiment(a.common.q, a.n, a.reps, c, a.common.seed, a.common.workers, a.thresholds);
  Json j;
  j["config"] = {{"command", "clt"},
                 {"q", a.common.q},
                 {"n", a.n},
                 {"reps", a.reps},
                 {"seed", a.common.seed},
                 {"constants", a.constants_path},
                 {"constants_seed", c.seed},
                 {"thresholds",
                  {{"ks_max", a.thresholds.ks_max},
                   {"mean_abs_max", a.thresholds.mean_abs_max},
                   {"variance_min", a.thresholds.variance_min},
                   {"variance_max", a.thresholds.variance_max}}}};
  j["report"] = report_to_json(rep);
  if (!a.csv_path.empty()) write_samples_csv(a.csv_path, "standardized", rep.samples);
  emit(out, j);
}

struct LdsArgs {
  Common common;
  std::uint64_t n = 1'000'000;
  std::uint64_t reps = 50;
  std::string config_path;
  std::string csv_path;
  LdsThresholds thresholds;
};

void cmd_lds(const LdsArgs& a, std::ostream& out) {
  if (a.n < 2 || a.reps < 1) throw UsageError("--n must be >= 2 and --reps >= 1");
  const auto rep = lds_lln_experiment(a.common.q, a.n, a.reps, a.common.seed, a.common.workers, a.thresholds);
  Json j;
  j["config"] = {{"command", "lds"},
                 {"q", a.common.q},
                 {"n", a.n},
                 {"reps", a.reps},
                 {"seed", a.common.seed},
                 {"thresholds", {{"ratio_min", a.thresholds.ratio_min}, {"ratio_max", a.thresholds.ratio_max}}}};
  j["report"] = report_to_json(rep);
  if (!a.csv_path.empty()) write_samples_csv(a.csv_path, "ratio", rep.samples);
  emit(out, j);
}

// ----------------------------------------------------------------- chain

struct ChainArgs {
  Common common;
  std::string mode = "stationary";
  double eps = 1e-12;
  std::uint64_t blocks = 1'000'000;
  std::uint64_t reps = 1'000'000;
  std::uint64_t start = 0;
  std::uint64_t horizon = 20;
  std::vector<std::uint64_t> s_grid{5, 10, 15, 20, 25, 30, 35, 40};
};

void cmd_chain(const ChainArgs& a, std::ostream& out) {
  const double q = a.common.q;
  MallowsParams{q};
  Json j;
  j["config"] = {{"command", "chain"}, {"q", q}, {"mode", a.mode}, {"eps", a.eps}, {"seed", a.common.seed}};
  Json results = Json::array();
  if (a.mode == "stationary") {
    const auto mu = stationary_dist(q, a.eps);
    const double residual = stationarity_residual(mu, q);
    results.push_back(quantity_json("mu0", mu.weights[0], 0.0, 0, mu.tail_mass_bound, a.common.seed));
    results.push_back(quantity_json("expected_return_time", 1.0 / mu.weights[0], 0.0, 0, mu.tail_mass_bound,
                                    a.common.seed));
    results.push_back(quantity_json("stationarity_residual_l1", residual, 0.0, 0, mu.tail_mass_bound, a.common.seed));
    j["j_max"] = mu.j_max;
    j["mu"] = mu.weights;
  } else if (a.mode == "firstpassage") {
    if (a.horizon < 1) throw UsageError("--horizon must be >= 1");
    const auto fp = first_passage_pmf(q, a.horizon, a.eps);
    double partial_mean = 0;
    for (std::size_t t = 0; t < fp.pmf.size(); ++t) {
      results.push_back(quantity_json("P(R0+=" + std::to_string(t + 1) + ")", fp.pmf[t], 0.0, 0, fp.truncation_loss,
                                      a.common.seed));
      partial_mean += static_cast<double>(t + 1) * fp.pmf[t];
    }
    results.push_back(quantity_json("partial_mean", partial_mean, 0.0, 0, fp.truncation_loss, a.common.seed));
    j["config"]["horizon"] = a.horizon;
    j["j_max"] = fp.j_max;
  } else if (a.mode == "kac") {
    if (a.blocks < 2) throw UsageError("--blocks must be >= 2");
    const auto k = kac_check(q, a.blocks, a.common.seed, a.common.workers, a.eps);
    results.push_back(quantity_json("E0[(R0+)^2]", k.second_moment.value, k.second_moment.std_error,
                                    k.second_moment.n_samples, 0.0, a.common.seed));
    results.push_back(quantity_json("E_mu[R0]", k.stationary_hitting.value, k.stationary_hitting.std_error,
                                    k.stationary_hitting.n_samples, k.truncation_bound, a.common.seed));
    results.push_back(quantity_json("(2E_mu[R0]+1)/mu0", k.rhs, k.rhs_std_error, k.stationary_hitting.n_samples,
                                    k.truncation_bound, a.common.seed));
    j["config"]["blocks"] = a.blocks;
    j["z_score"] = k.z_score;
  } else if (a.mode == "tail") {
    if (a.reps < 2) throw UsageError("--reps must be >= 2");
    const auto t = return_tail_probe(q, a.start, a.s_grid, a.reps, a.common.seed, a.common.workers);
    for (const auto& pt : t.points) {
      results.push_back(quantity_json("P_" + std::to_string(a.start) + "[R0+>" + std::to_string(pt.threshold) + "]",
                                      pt.p_hat, pt.std_error, a.reps, 0.0, a.common.seed));
    }
    j["config"]["start"] = a.start;
    j["config"]["reps"] = a.reps;
    j["config"]["s_grid"] = a.s_grid;
    j["fit"] = {{"slope", t.slope},
                {"slope_std_error", t.slope_std_error},
                {"slope_upper95", t.slope_upper95},
                {"points_used", t.points_used},
                {"decays", t.decays()}};
  } else {
    throw UsageError("unknown --mode '" + a.mode + "'");
  }
  j["results"] = results;
  emit(out, j);
}

// ----------------------------------------------------------------- exact

struct ExactArgs {
  std::uint64_t n = 3;
  double q = 0.5;
  std::string statistic = "pmf";
};

void cmd_exact(const ExactArgs& a, std::ostream& out) {
  if (a.n < 1 || a.n > kMaxExactN) throw UsageError("--n must lie in [1, 9]");
  Json pmf = Json::object();
  if (a.statistic == "pmf") {
    for (const auto& w : enumerate_mallows(a.n, a.q)) pmf[w.permutation.to_string()] = w.probability;
  } else {
    std::function<std::int64_t(const Permutation&)> stat;
    if (a.statistic == "lis") {
      stat = [](const Permutation& p) { return static_cast<std::int64_t>(lis_length(p)); };
    } else if (a.statistic == "lds") {
      stat = [](const Permutation& p) { return static_cast<std::int64_t>(lds_length(p)); };
    } else {
      stat = [](const Permutation& p) { return static_cast<std::int64_t>(inversions(p)); };
    }
    for (const auto& [k, v] : exact_statistic_distribution(a.n, a.q, stat, a.statistic).mass) {
      pmf[std::to_string(k)] = v;
    }
  }
  Json j;
  j["config"] = {{"command", "exact"}, {"n", a.n}, {"q", a.q}, {"statistic", a.statistic}};
  j["pmf"] = pmf;
  emit(out, j);
}

template <typename Args>
void apply_experiment_config(const std::string& path, CLI::App* cmd, Args& a) {
  if (path.empty()) return;
  const Json cfg = read_json_file(path);
  auto set = [&](const char* key, auto& field) {
    if (cfg.contains(key) && cmd->count(std::string("--") + key) == 0) field = cfg.at(key).get<std::decay_t<decltype(field)>>();
  };
  try {
    set("q", a.common.q);
    set("n", a.n);
    set("reps", a.reps);
    set("seed", a.common.seed);
  } catch (const Json::exception& e) {
    throw UsageError("bad config '" + path + "': " + e.what());
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mallows permutation simulation and verification toolkit"};
  app.require_subcommand(1);
  const unsigned workers = default_workers();

  SampleArgs sample;
  sample.common.workers = workers;
  auto* sample_cmd = app.add_subcommand("sample", "sample Mallows(q) permutations with their LIS, LDS and inversions");
  add_common(sample_cmd, sample.common);
  sample_cmd->add_option("--n", sample.n, "permutation size")->capture_default_str();
  sample_cmd->add_option("--count", sample.count, "number of permutations")->capture_default_str();
  sample_cmd->add_option("--format", sample.format, "json, csv (one-line form) or array (position -> element)")
      ->check(CLI::IsMember({"json", "csv", "array"}))
      ->capture_default_str();

  BlocksArgs blocks;
  blocks.common.workers = workers;
  auto* blocks_cmd = app.add_subcommand("blocks", "sample regeneration blocks to CSV; summary JSON on stdout");
  add_common(blocks_cmd, blocks.common);
  blocks_cmd->add_option("--blocks", blocks.blocks, "number of blocks")->capture_default_str();
  blocks_cmd->add_option("--out", blocks.out_path, "CSV destination (x,y,y_down)")->required();

  EstimateArgs estimate;
  estimate.common.workers = workers;
  auto* estimate_cmd = app.add_subcommand("estimate", "estimate the LIS CLT constants from i.i.d. blocks");
  add_common(estimate_cmd, estimate.common);
  estimate_cmd->add_option("--blocks", estimate.blocks, "number of blocks")->capture_default_str();
  estimate_cmd->add_option("--groups", estimate.groups, "independent streams / jackknife groups")
      ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 32))
      ->capture_default_str();

  CltArgs clt;
  clt.common.workers = workers;
  auto* clt_cmd = app.add_subcommand("clt", "standardized LIS replicates against the normal law");
  add_common(clt_cmd, clt.common);
  clt_cmd->add_option("--n", clt.n, "permutation size")->capture_default_str();
  clt_cmd->add_option("--reps", clt.reps, "replicates")->capture_default_str();
  clt_cmd->add_option("--constants", clt.constants_path, "JSON written by `estimate`")->required();
  clt_cmd->add_option("--config", clt.config_path, "experiment config JSON {q, n, reps, seed, thresholds}");
  clt_cmd->add_option("--csv", clt.csv_path, "write raw standardized samples here");

  LdsArgs lds;
  lds.common.workers = workers;
  auto* lds_cmd = app.add_subcommand("lds", "LDS law-of-large-numbers ratio replicates");
  add_common(lds_cmd, lds.common);
  lds_cmd->add_option("--n", lds.n, "permutation size")->capture_default_str();
  lds_cmd->add_option("--reps", lds.reps, "replicates")->capture_default_str();
  lds_cmd->add_option("--config", lds.config_path, "experiment config JSON {q, n, reps, seed, thresholds}");
  lds_cmd->add_option("--csv", lds.csv_path, "write raw ratios here");

  ChainArgs chain;
  chain.common.workers = workers;
  auto* chain_cmd = app.add_subcommand("chain", "analytics of the auxiliary Markov chain");
  add_common(chain_cmd, chain.common);
  chain_cmd->add_option("--mode", chain.mode, "stationary, kac, tail or firstpassage")
      ->check(CLI::IsMember({"stationary", "kac", "tail", "firstpassage"}))
      ->capture_default_str();
  chain_cmd->add_option("--eps", chain.eps, "truncation tail mass")->check(CLI::Range(1e-300, 0.5))->capture_default_str();
  chain_cmd->add_option("--blocks", chain.blocks, "samples per side (kac)")->capture_default_str();
  chain_cmd->add_option("--reps", chain.reps, "return-time samples (tail)")->capture_default_str();
  chain_cmd->add_option("--start", chain.start, "start state t (tail)")->capture_default_str();
  chain_cmd->add_option("--s-grid", chain.s_grid, "offsets s (tail)")->delimiter(',');
  chain_cmd->add_option("--horizon", chain.horizon, "largest return time (firstpassage)")->capture_default_str();

  ExactArgs exact;
  auto* exact_cmd = app.add_subcommand("exact", "exact distributions by enumeration (n <= 9)");
  exact_cmd->add_option("--n", exact.n, "permutation size")->capture_default_str();
  exact_cmd->add_option("--q", exact.q, "Mallows parameter in (0, 1)")->capture_default_str();
  exact_cmd->add_option("--statistic", exact.statistic, "lis, lds, inv or pmf")
      ->check(CLI::IsMember({"lis", "lds", "inv", "pmf"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*sample_cmd) {
      cmd_sample(sample, out);
    } else if (*blocks_cmd) {
      cmd_blocks(blocks, out);
    } else if (*estimate_cmd) {
      cmd_estimate(estimate, out);
    } else if (*clt_cmd) {
      apply_experiment_config(clt.config_path, clt_cmd, clt);
      if (!clt.config_path.empty()) clt.thresholds = read_clt_thresholds(read_json_file(clt.config_path), clt.thresholds);
      cmd_clt(clt, out);
    } else if (*lds_cmd) {
      apply_experiment_config(lds.config_path, lds_cmd, lds);
      if (!lds.config_path.empty()) {
        const auto cfg = read_json_file(lds.config_path);
        if (cfg.contains("thresholds")) {
          lds.thresholds.ratio_min = cfg["thresholds"].value("ratio_min", lds.thresholds.ratio_min);
          lds.thresholds.ratio_max = cfg["thresholds"].value("ratio_max", lds.thresholds.ratio_max);
        }
      }
      cmd_lds(lds, out);
    } else if (*chain_cmd) {
      cmd_chain(chain, out);
    } else if (*exact_cmd) {
      cmd_exact(exact, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const DegenerateEstimate& e) {
    err << "error: " << e.what() << '\n';
    return kDegenerate;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

}  // namespace mallows::cli

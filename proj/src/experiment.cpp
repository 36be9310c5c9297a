#include "mcsense/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <omp.h>

#include <json.hpp>

#include "mcsense/error.hpp"
#include "mcsense/rng.hpp"
#include "mcsense/siggen.hpp"

namespace mcsense {

using nlohmann::json;

std::string_view to_string(Method m) { return m == Method::Nlls ? "nlls" : "ed"; }

Method method_from_string(std::string_view name) {
  if (name == "nlls") return Method::Nlls;
  if (name == "ed") return Method::Ed;
  throw Error(ErrorKind::InvalidConfig, "unknown method '" + std::string(name) + "'");
}

ExperimentConfig default_config() {
  return ExperimentConfig{
      .plan = validate_plan(32, 10e6, 8),
      .pattern = {},
      .snapshots = 64,
      .sigma2 = 1.0,
      .snr_db_grid = {-4.0, -2.0, 0.0, 2.0, 4.0, 5.0, 6.0, 8.0, 10.0},
      .m_grid = {16, 32, 64, 128, 256},
      .trials = 1000,
      .methods = {Method::Nlls, Method::Ed},
      .p_fa = 0.01,
      .master_seed = 1,
      .active = {.fixed = std::vector<int>{8, 16, 17, 18, 29, 30}},
      .workers = 0,
  };
}

namespace {

[[noreturn]] void bad_config(const std::string& what) {
  throw Error(ErrorKind::InvalidConfig, what);
}

void check_config(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) bad_config("trials must be >= 1");
  if (cfg.snapshots < 2) bad_config("snapshots must be >= 2");
  if (!(cfg.sigma2 > 0.0)) bad_config("sigma2 must be positive");
  if (cfg.snr_db_grid.empty()) bad_config("snr_db grid is empty");
  if (cfg.methods.empty()) bad_config("no methods selected");
  if (cfg.workers < 0) bad_config("workers must be >= 0");
  for (int m : cfg.m_grid) {
    if (m < 2) bad_config("m_grid entries must be >= 2");
  }
  if (!cfg.active.fixed) {
    if (cfg.active.random_min < 0 || cfg.active.random_max < cfg.active.random_min ||
        cfg.active.random_max > cfg.plan.max_occupied()) {
      bad_config("random active-set size range must lie within [0, N_max]");
    }
  }
  try {
    resolve_pattern(cfg);
    if (cfg.active.fixed) ActiveChannelSet(*cfg.active.fixed, cfg.plan.channels());
  } catch (const Error& e) {
    bad_config(e.what());
  }
}

}  // namespace

ExperimentConfig config_from_json(std::string_view text) {
  ExperimentConfig cfg = default_config();
  try {
    const json doc = json::parse(text);
    if (doc.contains("plan")) {
      const auto& plan = doc.at("plan");
      std::optional<double> total;
      if (plan.contains("total_bandwidth_hz")) total = plan.at("total_bandwidth_hz").get<double>();
      cfg.plan = validate_plan(plan.value("channels", cfg.plan.channels()),
                               plan.value("channel_bandwidth_hz", cfg.plan.channel_bandwidth_hz()),
                               plan.value("max_occupied", cfg.plan.max_occupied()), total);
    }
    if (doc.contains("pattern")) {
      const auto& pat = doc.at("pattern");
      cfg.pattern = {};
      if (pat.contains("cosets")) {
        cfg.pattern.cosets = pat.at("cosets").get<std::vector<int>>();
        cfg.pattern.p = static_cast<int>(cfg.pattern.cosets->size());
      } else {
        cfg.pattern.p = pat.value("p", 10);
      }
      if (pat.contains("seed")) cfg.pattern.seed = pat.at("seed").get<std::uint64_t>();
    }
    cfg.snapshots = doc.value("snapshots", cfg.snapshots);
    cfg.sigma2 = doc.value("sigma2", cfg.sigma2);
    if (doc.contains("snr_db")) cfg.snr_db_grid = doc.at("snr_db").get<std::vector<double>>();
    if (doc.contains("m_grid")) cfg.m_grid = doc.at("m_grid").get<std::vector<int>>();
    cfg.trials = doc.value("trials", cfg.trials);
    if (doc.contains("methods")) {
      cfg.methods.clear();
      for (const auto& m : doc.at("methods")) cfg.methods.push_back(method_from_string(m.get<std::string>()));
    }
    cfg.p_fa = doc.value("p_fa", cfg.p_fa);
    cfg.master_seed = doc.value("seed", cfg.master_seed);
    if (doc.contains("active")) {
      const auto& act = doc.at("active");
      cfg.active = {};
      if (act.contains("fixed")) {
        cfg.active.fixed = act.at("fixed").get<std::vector<int>>();
      } else {
        cfg.active.random_min = act.value("random_min", 1);
        cfg.active.random_max = act.value("random_max", cfg.active.random_min);
      }
    }
    cfg.workers = doc.value("workers", cfg.workers);
  } catch (const json::exception& e) {
    bad_config(std::string("config: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidConfig) throw;
    bad_config(std::string("config: ") + e.what());
  }
  check_config(cfg);
  if (cfg.active.fixed) {
    try {
      ActiveChannelSet(*cfg.active.fixed, cfg.plan.channels());
    } catch (const Error& e) {
      bad_config(std::string("config: active set: ") + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  const auto pattern = resolve_pattern(cfg);
  json doc;
  doc["plan"] = {{"channels", cfg.plan.channels()},
                 {"channel_bandwidth_hz", cfg.plan.channel_bandwidth_hz()},
                 {"total_bandwidth_hz", cfg.plan.total_bandwidth_hz()},
                 {"max_occupied", cfg.plan.max_occupied()}};
  doc["pattern"] = {{"cosets", pattern.cosets()}};
  if (pattern.seed()) doc["pattern"]["seed"] = *pattern.seed();
  doc["snapshots"] = cfg.snapshots;
  doc["sigma2"] = cfg.sigma2;
  doc["snr_db"] = cfg.snr_db_grid;
  doc["m_grid"] = cfg.m_grid;
  doc["trials"] = cfg.trials;
  doc["methods"] = json::array();
  for (auto m : cfg.methods) doc["methods"].push_back(std::string(to_string(m)));
  doc["p_fa"] = cfg.p_fa;
  doc["seed"] = cfg.master_seed;
  if (cfg.active.fixed) {
    doc["active"] = {{"fixed", *cfg.active.fixed}};
  } else {
    doc["active"] = {{"random_min", cfg.active.random_min}, {"random_max", cfg.active.random_max}};
  }
  doc["workers"] = cfg.workers;
  return doc.dump(2) + "\n";
}

CosetPattern resolve_pattern(const ExperimentConfig& cfg) {
  if (cfg.pattern.cosets) {
    return CosetPattern(cfg.plan.channels(), *cfg.pattern.cosets, cfg.pattern.seed);
  }
  return random_pattern(cfg.plan.channels(), cfg.pattern.p,
                        cfg.pattern.seed.value_or(cfg.master_seed));
}

ActiveChannelSet draw_active_set(const ExperimentConfig& cfg, std::uint64_t seed) {
  const int L = cfg.plan.channels();
  if (cfg.active.fixed) return ActiveChannelSet(*cfg.active.fixed, L);
  auto gen = make_stream(seed, kActiveSetStream);
  std::uniform_int_distribution<int> size(cfg.active.random_min, cfg.active.random_max);
  const int n = size(gen);
  std::vector<int> pool(L);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < n; ++i) {
    std::uniform_int_distribution<int> pick(i, L - 1);
    std::swap(pool[i], pool[pick(gen)]);
  }
  pool.resize(n);
  return ActiveChannelSet(std::move(pool), L);
}

TrialOutcome run_trial(const ExperimentConfig& cfg, const CosetPattern& pattern, double snr_db,
                       int snapshots, std::uint64_t seed) {
  const int L = cfg.plan.channels();
  TrialOutcome out{.truth = draw_active_set(cfg, seed)};
  const MultibandSignalSpec spec{
      .plan = cfg.plan,
      .active = out.truth,
      .snr_db = snr_db,
      .noise_power = cfg.sigma2,
      .n_samples = static_cast<std::size_t>(snapshots) * L,
      .seed = seed,
  };
  const auto record = generate(spec);

  for (Method m : cfg.methods) {
    if (m == Method::Nlls) {
      const auto R = sample_correlation(mcsense::snapshots(record, pattern));
      out.nlls = sequential_forward_nlls(R, pattern, cfg.sigma2, cfg.plan.max_occupied());
    } else {
      const EdConfig ed{.plan = cfg.plan, .samples = snapshots, .p_fa = cfg.p_fa, .sigma2 = cfg.sigma2};
      out.ed = energy_detect(record, ed);
    }
  }
  return out;
}

void DetectionCounts::add(const ActiveChannelSet& truth, const ActiveChannelSet& flagged,
                          int channels) {
  ++trials;
  active += truth.size();
  vacant += channels - truth.size();
  for (int r : flagged.indices()) {
    if (truth.contains(r)) {
      ++detected;
    } else {
      ++false_alarms;
    }
  }
}

DetectionCounts& DetectionCounts::operator+=(const DetectionCounts& other) {
  detected += other.detected;
  active += other.active;
  false_alarms += other.false_alarms;
  vacant += other.vacant;
  trials += other.trials;
  return *this;
}

namespace {

TrialTotals tally(const ExperimentConfig& cfg, const TrialOutcome& outcome) {
  TrialTotals t;
  const int L = cfg.plan.channels();
  if (outcome.nlls) t.nlls.add(outcome.truth, outcome.nlls->b_hat, L);
  if (outcome.ed) t.ed.add(outcome.truth, outcome.ed->flagged(), L);
  return t;
}

}  // namespace

TrialTotals accumulate_trials_serial(const ExperimentConfig& cfg, const CosetPattern& pattern,
                                     double snr_db, int snapshots) {
  TrialTotals totals;
  for (int t = 0; t < cfg.trials; ++t) {
    const auto one = tally(cfg, run_trial(cfg, pattern, snr_db, snapshots, trial_seed(cfg, t)));
    totals.nlls += one.nlls;
    totals.ed += one.ed;
  }
  return totals;
}

TrialTotals accumulate_trials(const ExperimentConfig& cfg, const CosetPattern& pattern,
                              double snr_db, int snapshots) {
  // Plain integer reductions keep the result independent of scheduling.
  std::int64_t n_det = 0, n_act = 0, n_fa = 0, n_vac = 0, n_tr = 0;
  std::int64_t e_det = 0, e_act = 0, e_fa = 0, e_vac = 0, e_tr = 0;
  std::exception_ptr failure;
  const int workers = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 4) num_threads(workers) \
    reduction(+ : n_det, n_act, n_fa, n_vac, n_tr, e_det, e_act, e_fa, e_vac, e_tr)
  for (int t = 0; t < cfg.trials; ++t) {
    try {
      const auto one = tally(cfg, run_trial(cfg, pattern, snr_db, snapshots, trial_seed(cfg, t)));
      n_det += one.nlls.detected;
      n_act += one.nlls.active;
      n_fa += one.nlls.false_alarms;
      n_vac += one.nlls.vacant;
      n_tr += one.nlls.trials;
      e_det += one.ed.detected;
      e_act += one.ed.active;
      e_fa += one.ed.false_alarms;
      e_vac += one.ed.vacant;
      e_tr += one.ed.trials;
    } catch (...) {
#pragma omp critical(mcsense_trial_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  TrialTotals totals;
  totals.nlls = {n_det, n_act, n_fa, n_vac, n_tr};
  totals.ed = {e_det, e_act, e_fa, e_vac, e_tr};
  return totals;
}

MetricsRow metrics(Method method, const DetectionCounts& counts, double snr_db, int snapshots,
                   double alpha, double wall_time_s) {
  return {method, snr_db, snapshots, alpha, counts.pd(), counts.pf(), counts.trials, wall_time_s};
}

namespace {

std::vector<MetricsRow> sweep(const ExperimentConfig& cfg, const std::vector<int>& m_values) {
  check_config(cfg);
  const auto pattern = resolve_pattern(cfg);
  if (cfg.plan.max_occupied() >= pattern.size() &&
      std::find(cfg.methods.begin(), cfg.methods.end(), Method::Nlls) != cfg.methods.end()) {
    bad_config("NLLS needs p > N_max");
  }
  const double alpha = sub_nyquist_factor(pattern);
  std::vector<MetricsRow> rows;
  for (double snr : cfg.snr_db_grid) {
    for (int M : m_values) {
      const auto start = std::chrono::steady_clock::now();
      const auto totals = accumulate_trials(cfg, pattern, snr, M);
      const double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      for (Method m : cfg.methods) {
        const auto& counts = m == Method::Nlls ? totals.nlls : totals.ed;
        // ED samples at the Nyquist rate
        rows.push_back(metrics(m, counts, snr, M, m == Method::Nlls ? alpha : 1.0, wall));
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const MetricsRow& a, const MetricsRow& b) {
    return static_cast<int>(a.method) < static_cast<int>(b.method);
  });
  return rows;
}

}  // namespace

std::vector<MetricsRow> sweep_snr(const ExperimentConfig& cfg) {
  return sweep(cfg, {cfg.snapshots});
}

std::vector<MetricsRow> sweep_m(const ExperimentConfig& cfg) {
  if (cfg.m_grid.empty()) bad_config("m_grid is empty");
  return sweep(cfg, cfg.m_grid);
}

void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << "method,snr_db,alpha,M,trials,pd,pf\n";
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%s,%.4f,%.6f,%d,%lld,%.6f,%.6f\n",
                  std::string(to_string(r.method)).c_str(), r.snr_db, r.alpha, r.snapshots,
                  static_cast<long long>(r.trials), r.pd, r.pf);
    out << line;
  }
}

std::vector<MetricsRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("method,snr_db,alpha,M,trials,pd,pf", 0) != 0) {
    throw Error(ErrorKind::BadFormat, "CSV header mismatch");
  }
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> f;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != 7) throw Error(ErrorKind::BadFormat, "CSV row needs 7 fields: " + line);
    try {
      rows.push_back({method_from_string(f[0]), std::stod(f[1]), std::stoi(f[3]), std::stod(f[2]),
                      std::stod(f[5]), std::stod(f[6]), std::stoll(f[4])});
    } catch (const std::exception&) {
      throw Error(ErrorKind::BadFormat, "bad CSV row: " + line);
    }
  }
  return rows;
}

}  // namespace mcsense

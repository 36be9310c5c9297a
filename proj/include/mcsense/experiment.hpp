#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcsense/ed_baseline.hpp"
#include "mcsense/estimator.hpp"
#include "mcsense/multicoset.hpp"
#include "mcsense/spectrum_model.hpp"

namespace mcsense {

enum class Method { Nlls, Ed };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

/// Either an explicit offset list or (p, seed) for random_pattern().
struct PatternSpec {
  std::optional<std::vector<int>> cosets;
  int p = 10;
  std::optional<std::uint64_t> seed;  // defaults to the master seed
};

/// Fixed truth set, or a fresh uniform subset per trial whose size is
/// uniform in [random_min, random_max].
struct ActivePolicy {
  std::optional<std::vector<int>> fixed;
  int random_min = 1;
  int random_max = 1;
};

struct ExperimentConfig {
  ChannelPlan plan;
  PatternSpec pattern;
  int snapshots = 64;  // M per coset; records hold M * L Nyquist samples
  double sigma2 = 1.0;
  std::vector<double> snr_db_grid;
  std::vector<int> m_grid;
  int trials = 1000;
  std::vector<Method> methods{Method::Nlls, Method::Ed};
  double p_fa = 0.01;
  std::uint64_t master_seed = 1;
  ActivePolicy active;
  int workers = 0;  // 0: OpenMP default
};

/// L=32, B=10 MHz, N_max=8, p=10, M=64, sigma^2=1, truth {8,16,17,18,29,30}.
ExperimentConfig default_config();

/// Parses the JSON config; missing keys keep default_config() values.
/// Throws InvalidConfig on malformed input.
ExperimentConfig config_from_json(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Fully resolved config (pattern offsets spelled out), pretty-printed.
std::string config_to_json(const ExperimentConfig& cfg);

CosetPattern resolve_pattern(const ExperimentConfig& cfg);

inline std::uint64_t trial_seed(const ExperimentConfig& cfg, int trial) {
  return cfg.master_seed + static_cast<std::uint64_t>(trial);
}

ActiveChannelSet draw_active_set(const ExperimentConfig& cfg, std::uint64_t seed);

struct TrialOutcome {
  ActiveChannelSet truth;
  std::optional<DetectionResult> nlls{};
  std::optional<EdDecision> ed{};
};

/// One record, generated from trial_seed, fed to every configured method.
TrialOutcome run_trial(const ExperimentConfig& cfg, const CosetPattern& pattern, double snr_db,
                       int snapshots, std::uint64_t seed);

/// Integer tallies behind Pd and Pf; merging is order independent.
struct DetectionCounts {
  std::int64_t detected = 0;      // truth channels flagged
  std::int64_t active = 0;        // truth channels seen
  std::int64_t false_alarms = 0;  // vacant channels flagged
  std::int64_t vacant = 0;        // vacant channels seen
  std::int64_t trials = 0;

  void add(const ActiveChannelSet& truth, const ActiveChannelSet& flagged, int channels);
  DetectionCounts& operator+=(const DetectionCounts& other);
  bool operator==(const DetectionCounts&) const = default;

  double pd() const { return active == 0 ? 0.0 : static_cast<double>(detected) / active; }
  double pf() const { return vacant == 0 ? 0.0 : static_cast<double>(false_alarms) / vacant; }
};

struct TrialTotals {
  DetectionCounts nlls;
  DetectionCounts ed;
  bool operator==(const TrialTotals&) const = default;
};

/// Runs cfg.trials trials at one (SNR, M) point across cfg.workers OpenMP threads.
TrialTotals accumulate_trials(const ExperimentConfig& cfg, const CosetPattern& pattern,
                              double snr_db, int snapshots);
/// Single-threaded reference for accumulate_trials().
TrialTotals accumulate_trials_serial(const ExperimentConfig& cfg, const CosetPattern& pattern,
                                     double snr_db, int snapshots);

struct MetricsRow {
  Method method;
  double snr_db;
  int snapshots;
  double alpha;
  double pd;
  double pf;
  std::int64_t trials;
  double wall_time_s = 0.0;  // not part of the CSV
};

MetricsRow metrics(Method method, const DetectionCounts& counts, double snr_db, int snapshots,
                   double alpha, double wall_time_s = 0.0);

/// One row per (method, SNR) at cfg.snapshots, grouped by method.
std::vector<MetricsRow> sweep_snr(const ExperimentConfig& cfg);
/// One row per (method, SNR, M) over cfg.m_grid, grouped by method then SNR.
std::vector<MetricsRow> sweep_m(const ExperimentConfig& cfg);

/// CSV header: method,snr_db,alpha,M,trials,pd,pf
void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_csv(std::istream& in);

}  // namespace mcsense

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mcsense/ed_baseline.hpp"
#include "mcsense/error.hpp"
#include "mcsense/estimator.hpp"
#include "mcsense/experiment.hpp"
#include "mcsense/iq_file.hpp"
#include "mcsense/multicoset.hpp"
#include "mcsense/plot.hpp"
#include "mcsense/report.hpp"
#include "mcsense/siggen.hpp"

namespace fs = std::filesystem;
using namespace mcsense;

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> workers;
  std::string method = "";
  std::string out = ".";
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "JSON experiment config (defaults to the 32-channel setup)");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--trials", o.trials, "Monte Carlo trials per point");
  cmd->add_option("--workers", o.workers, "Worker threads (0 = all cores)");
  cmd->add_option("--method", o.method, "nlls, ed or both")
      ->check(CLI::IsMember({"nlls", "ed", "both"}));
  cmd->add_option("--out", o.out, "Output directory");
}

ExperimentConfig resolve(const CommonOptions& o) {
  ExperimentConfig cfg = o.config.empty() ? default_config() : load_config(o.config);
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.trials) cfg.trials = *o.trials;
  if (o.workers) cfg.workers = *o.workers;
  if (o.method == "nlls") cfg.methods = {Method::Nlls};
  if (o.method == "ed") cfg.methods = {Method::Ed};
  if (o.method == "both") cfg.methods = {Method::Nlls, Method::Ed};
  if (cfg.trials < 1) throw Error(ErrorKind::InvalidConfig, "trials must be >= 1");
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
}

fs::path prepare_out(const std::string& dir, const ExperimentConfig& cfg) {
  fs::path out(dir);
  fs::create_directories(out);
  write_text(out / "resolved_config.json", config_to_json(cfg));
  return out;
}

NyquistRecord read_record(const std::string& iq, const std::string& sidecar,
                          const ExperimentConfig& cfg) {
  const fs::path data(iq);
  return ingest_iq(data, sidecar.empty() ? sidecar_path_for(data) : fs::path(sidecar), cfg.plan);
}

void log_rows(const std::vector<MetricsRow>& rows) {
  for (const auto& r : rows) {
    std::cerr << to_string(r.method) << " snr=" << r.snr_db << " M=" << r.snapshots
              << " pd=" << r.pd << " pf=" << r.pf << " (" << r.wall_time_s << " s)\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sub-Nyquist multicoset spectrum sensing"};
  app.require_subcommand(1);

  CommonOptions gen_opt, sense_opt, ed_opt, snr_opt, m_opt, trace_opt;
  double gen_snr = 10.0, trace_snr = 10.0;
  std::string gen_name = "record.cf32";
  std::size_t gen_samples = 0;
  std::string sense_iq, sense_sidecar, ed_iq, ed_sidecar;

  auto* gen = app.add_subcommand("generate", "Synthesize a multiband record as cf32le + sidecar");
  add_common(gen, gen_opt);
  gen->add_option("--snr", gen_snr, "In-band SNR [dB]");
  gen->add_option("--name", gen_name, "Record file name");
  gen->add_option("--samples", gen_samples, "Record length (default M*L)");

  auto* sense = app.add_subcommand("sense", "Run sequential forward NLLS on a cf32le record");
  add_common(sense, sense_opt);
  sense->add_option("--iq", sense_iq, "cf32le record")->required();
  sense->add_option("--sidecar", sense_sidecar, "Sidecar JSON (default <iq>.json)");

  auto* ed = app.add_subcommand("ed", "Run Nyquist-rate energy detection on a cf32le record");
  add_common(ed, ed_opt);
  ed->add_option("--iq", ed_iq, "cf32le record")->required();
  ed->add_option("--sidecar", ed_sidecar, "Sidecar JSON (default <iq>.json)");

  auto* sweep_snr_cmd = app.add_subcommand("sweep-snr", "Pd/Pf versus SNR (CSV)");
  add_common(sweep_snr_cmd, snr_opt);

  auto* sweep_m_cmd = app.add_subcommand("sweep-m", "Pd versus sensing period M (CSV)");
  add_common(sweep_m_cmd, m_opt);

  auto* trace = app.add_subcommand("trace", "Single-run step trace of the greedy detector");
  add_common(trace, trace_opt);
  trace->add_option("--snr", trace_snr, "In-band SNR [dB]");

  std::string plot_csv, plot_kind = "pd", plot_trace, plot_iq, plot_sidecar, plot_config,
                        plot_out = "plot.svg";
  std::size_t plot_nfft = 1024;
  auto* plot = app.add_subcommand("plot", "Render SVG from a CSV table, a trace report or a record");
  plot->add_option("--csv", plot_csv, "Metrics CSV from sweep-snr / sweep-m");
  plot->add_option("--kind", plot_kind, "pd, pf or pd-m")
      ->check(CLI::IsMember({"pd", "pf", "pd-m"}));
  plot->add_option("--trace", plot_trace, "Detection report (first JSON line is used)");
  plot->add_option("--iq", plot_iq, "cf32le record for a PSD plot");
  plot->add_option("--sidecar", plot_sidecar, "Sidecar JSON (default <iq>.json)");
  plot->add_option("--config", plot_config, "Config for the record's channel plan");
  plot->add_option("--nfft", plot_nfft, "PSD FFT size");
  plot->add_option("--out", plot_out, "Output SVG path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto cfg = resolve(gen_opt);
      const auto out = prepare_out(gen_opt.out, cfg);
      const auto n = gen_samples ? gen_samples
                                 : static_cast<std::size_t>(cfg.snapshots) * cfg.plan.channels();
      const MultibandSignalSpec spec{.plan = cfg.plan,
                                     .active = draw_active_set(cfg, cfg.master_seed),
                                     .snr_db = gen_snr,
                                     .noise_power = cfg.sigma2,
                                     .n_samples = n,
                                     .seed = cfg.master_seed};
      const auto record = generate(spec);
      write_iq(record, out / gen_name, sidecar_path_for(out / gen_name));
      std::cout << (out / gen_name).string() << "\n";
    } else if (sense->parsed()) {
      const auto cfg = resolve(sense_opt);
      const auto record = read_record(sense_iq, sense_sidecar, cfg);
      const auto pattern = resolve_pattern(cfg);
      const auto R = sample_correlation(snapshots(record, pattern));
      const auto result = sequential_forward_nlls(R, pattern, cfg.sigma2, cfg.plan.max_occupied());
      std::cout << detection_report(result) << "\n";
    } else if (ed->parsed()) {
      const auto cfg = resolve(ed_opt);
      const auto record = read_record(ed_iq, ed_sidecar, cfg);
      const EdConfig ecfg{.plan = cfg.plan, .samples = cfg.snapshots, .p_fa = cfg.p_fa,
                          .sigma2 = cfg.sigma2};
      std::cout << ed_report(energy_detect(record, ecfg)) << "\n";
    } else if (sweep_snr_cmd->parsed()) {
      const auto cfg = resolve(snr_opt);
      const auto out = prepare_out(snr_opt.out, cfg);
      const auto rows = sweep_snr(cfg);
      std::ofstream csv(out / "sweep_snr.csv", std::ios::binary);
      write_csv(csv, rows);
      log_rows(rows);
    } else if (sweep_m_cmd->parsed()) {
      const auto cfg = resolve(m_opt);
      const auto out = prepare_out(m_opt.out, cfg);
      const auto rows = sweep_m(cfg);
      std::ofstream csv(out / "sweep_m.csv", std::ios::binary);
      write_csv(csv, rows);
      log_rows(rows);
    } else if (trace->parsed()) {
      auto cfg = resolve(trace_opt);
      cfg.methods = {Method::Nlls};
      const auto out = prepare_out(trace_opt.out, cfg);
      const auto pattern = resolve_pattern(cfg);
      const auto outcome = run_trial(cfg, pattern, trace_snr, cfg.snapshots, cfg.master_seed);
      const auto line = detection_report(*outcome.nlls);
      write_text(out / "trace.jsonl", line + "\n");
      write_text(out / "trace.svg", render_trace_svg(*outcome.nlls));
      std::cout << line << "\n";
    } else if (plot->parsed()) {
      std::string svg;
      if (!plot_csv.empty()) {
        std::ifstream in(plot_csv);
        if (!in) throw Error(ErrorKind::Io, "cannot open " + plot_csv);
        svg = render_metrics_svg(read_csv(in), plot_kind_from_string(plot_kind));
      } else if (!plot_trace.empty()) {
        std::ifstream in(plot_trace);
        std::string line;
        if (!in || !std::getline(in, line)) throw Error(ErrorKind::Io, "cannot read " + plot_trace);
        svg = render_trace_svg(parse_detection_report(line));
      } else if (!plot_iq.empty()) {
        const auto cfg = plot_config.empty() ? default_config() : load_config(plot_config);
        svg = render_psd_svg(empirical_psd(read_record(plot_iq, plot_sidecar, cfg), plot_nfft));
      } else {
        throw Error(ErrorKind::InvalidConfig, "plot needs --csv, --trace or --iq");
      }
      write_text(plot_out, svg);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

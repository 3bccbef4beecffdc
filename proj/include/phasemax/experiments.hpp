#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "phasemax/image.hpp"
#include "phasemax/measurements.hpp"
#include "phasemax/solver.hpp"

namespace phasemax::experiments {

/// Noise as given on the command line: uniform takes eta_inv, gaussian takes a target SNR in dB.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::None;
  double value = 0.0;

  /// Parses "none", "uniform:<eta_inv>" or "gaussian:<snr_db>".
  static NoiseSpec parse(std::string_view text);
  /// Concrete model for a target with the given norm.
  [[nodiscard]] NoiseModel model_for(double signal_norm) const;
};

/// Parses "2,4,6" or "lo:hi:step" (inclusive of hi up to rounding).
std::vector<double> parse_ratios(std::string_view text);

struct SweepConfig {
  int n = 128;
  std::vector<double> ratios;
  int trials = 20;
  NoiseSpec noise;
  int anchor_iters = 50;
  SolverConfig solver;
  std::uint64_t seed = 1;
  /// When false runtime_ms is written as 0 so reruns are byte-identical.
  bool record_runtime = true;
  /// 0 selects the hardware concurrency.
  unsigned threads = 0;

  void validate() const;
};

struct TrialRecord {
  int n = 0;
  int m = 0;
  double ratio = 0.0;
  int trial_index = 0;
  std::uint64_t seed = 0;
  NoiseKind noise_kind = NoiseKind::None;
  double noise_param = 0.0;
  std::optional<double> snr_db;
  double anchor_correlation = 0.0;
  double rel_error = 0.0;
  int iters_used = 0;
  bool converged = false;
  double runtime_ms = 0.0;
};

/// Stream id of one trial; depends only on (ratio, trial) so any trial can be replayed alone.
std::uint64_t trial_stream_id(double ratio, int trial);

TrialRecord run_trial(const SweepConfig& cfg, double ratio, int trial);

/// All (ratio, trial) pairs, ratio-major, computed on a worker pool.
std::vector<TrialRecord> run_sweep(const SweepConfig& cfg);

inline constexpr std::string_view kCsvHeader =
    "n,m,ratio,trial,seed,noise_kind,noise_param,snr_db,anchor_corr,rel_error,iters,converged,"
    "runtime_ms";

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records);
void write_csv(const std::filesystem::path& path, const std::vector<TrialRecord>& records);

struct RatioSummary {
  double ratio = 0.0;
  int trials = 0;
  double median_rel_error = 0.0;
  double q90_rel_error = 0.0;
  double median_anchor_correlation = 0.0;
};

/// Linear-interpolation quantile of an unsorted sample, q in [0, 1].
double quantile(std::vector<double> values, double q);

std::vector<RatioSummary> summarize(const std::vector<TrialRecord>& records);
void print_summary(std::ostream& out, const std::vector<RatioSummary>& rows);

inline constexpr int kCdpDefaultMaxIters = 1000;

struct CdpConfig {
  int num_masks = 20;
  int anchor_iters = 50;
  SolverConfig solver = [] {
    SolverConfig c;
    c.max_iters = kCdpDefaultMaxIters;
    return c;
  }();
  std::uint64_t seed = 1;
  bool record_runtime = true;
};

struct CdpReport {
  int width = 0;
  int height = 0;
  int num_masks = 0;
  double anchor_correlation = 0.0;
  double rel_error = 0.0;
  int iters_used = 0;
  bool converged = false;
  long operator_applications = 0;
  double runtime_ms = 0.0;
};

/// Recovers an image from noiseless coded-diffraction magnitudes.
///
/// Writes <out_prefix>.pgm (phase-aligned real part, rounded and clamped) and
/// <out_prefix>.f64 (the same values unquantized) when out_prefix is non-empty.
CdpReport run_cdp_demo(const std::filesystem::path& image_path, const CdpConfig& cfg,
                       const std::filesystem::path& out_prefix);
CdpReport run_cdp_demo(const GrayImage& image, const CdpConfig& cfg,
                       const std::filesystem::path& out_prefix);

void write_cdp_report(std::ostream& out, const CdpReport& report);

}  // namespace phasemax::experiments

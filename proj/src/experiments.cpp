#include "phasemax/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "phasemax/anchor.hpp"

namespace phasemax::experiments {

namespace {

double parse_double(std::string_view text, const char* what) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value))
    throw std::invalid_argument(std::string("cannot parse ") + what + " '" + std::string(text) + "'");
  return value;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

NoiseSpec NoiseSpec::parse(std::string_view text) {
  if (text == "none")
    return {};
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("noise must be none, uniform:<eta_inv> or gaussian:<snr_db>");
  const auto kind = text.substr(0, colon);
  const double value = parse_double(text.substr(colon + 1), "noise parameter");
  if (kind == "uniform") {
    if (value < 0.0)
      throw std::invalid_argument("uniform noise needs eta_inv >= 0");
    return {NoiseKind::Uniform, value};
  }
  if (kind == "gaussian")
    return {NoiseKind::Gaussian, value};
  throw std::invalid_argument("unknown noise kind '" + std::string(kind) + "'");
}

NoiseModel NoiseSpec::model_for(double signal_norm) const {
  switch (kind) {
    case NoiseKind::None:
      return NoiseModel::none();
    case NoiseKind::Uniform:
      return NoiseModel::uniform(value);
    case NoiseKind::Gaussian:
      return NoiseModel::gaussian_from_snr(value, signal_norm);
  }
  return NoiseModel::none();
}

std::vector<double> parse_ratios(std::string_view text) {
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string_view::npos)
      throw std::invalid_argument("ratio range must be lo:hi:step");
    const double lo = parse_double(text.substr(0, c1), "ratio");
    const double hi = parse_double(text.substr(c1 + 1, c2 - c1 - 1), "ratio");
    const double step = parse_double(text.substr(c2 + 1), "ratio step");
    if (!(step > 0.0) || hi < lo)
      throw std::invalid_argument("ratio range needs lo <= hi and step > 0");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= count; ++k)
      out.push_back(lo + static_cast<double>(k) * step);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                           : comma - start);
    out.push_back(parse_double(piece, "ratio"));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return out;
}

void SweepConfig::validate() const {
  if (n < 1)
    throw std::invalid_argument("sweep: n must be positive");
  if (ratios.empty())
    throw std::invalid_argument("sweep: at least one ratio is required");
  for (double r : ratios) {
    if (!(r >= 1.0))
      throw std::invalid_argument("sweep: ratios must be at least 1");
  }
  if (trials < 1)
    throw std::invalid_argument("sweep: trials must be positive");
  if (anchor_iters < 1)
    throw std::invalid_argument("sweep: anchor_iters must be positive");
  if (noise.kind == NoiseKind::Uniform && noise.value < 0.0)
    throw std::invalid_argument("sweep: uniform noise needs eta_inv >= 0");
  solver.validate();
}

std::uint64_t trial_stream_id(double ratio, int trial) {
  const auto milli = static_cast<std::uint64_t>(std::llround(ratio * 1000.0));
  return (milli << 24) | static_cast<std::uint64_t>(trial);
}

TrialRecord run_trial(const SweepConfig& cfg, double ratio, int trial) {
  const auto start = std::chrono::steady_clock::now();
  RngStream rng(cfg.seed, trial_stream_id(ratio, trial));
  const int m = static_cast<int>(std::lround(ratio * cfg.n));

  const ComplexSignal xstar = sample_complex_gaussian(cfg.n, rng);
  const auto ens = MeasurementEnsemble::dense_gaussian(cfg.n, m, rng);
  const NoiseModel noise = cfg.noise.model_for(xstar.norm());
  const Observations obs = observe(ens, xstar, noise, rng);
  const AnchorReport anchor = spectral_anchor(ens, obs, cfg.anchor_iters, rng);
  const Solution sol = solve_phasemax(ens, obs, anchor.a0, cfg.solver);

  TrialRecord rec;
  rec.n = cfg.n;
  rec.m = m;
  rec.ratio = ratio;
  rec.trial_index = trial;
  rec.seed = cfg.seed;
  rec.noise_kind = noise.kind;
  rec.noise_param = noise.parameter();
  rec.snr_db = obs.snr_db;
  rec.anchor_correlation = anchor_correlation(anchor.a0, xstar);
  rec.rel_error = phase_align_error(sol.xhat, xstar);
  rec.iters_used = sol.iters_used;
  rec.converged = sol.converged;
  if (cfg.record_runtime)
    rec.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<TrialRecord> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  struct Job {
    double ratio;
    int trial;
  };
  std::vector<Job> jobs;
  for (double r : cfg.ratios)
    for (int t = 0; t < cfg.trials; ++t)
      jobs.push_back({r, t});

  std::vector<TrialRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size())
        return;
      try {
        records[j] = run_trial(cfg, jobs[j].ratio, jobs[j].trial);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
      }
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(jobs.size()));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t)
    pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure)
    std::rethrow_exception(failure);
  return records;
}

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.n << ',' << r.m << ',' << format_double(r.ratio) << ',' << r.trial_index << ','
        << r.seed << ',' << to_string(r.noise_kind) << ',' << format_double(r.noise_param) << ','
        << (r.snr_db ? format_double(*r.snr_db) : std::string()) << ','
        << format_double(r.anchor_correlation) << ',' << format_double(r.rel_error) << ','
        << r.iters_used << ',' << (r.converged ? 1 : 0) << ',' << format_double(r.runtime_ms)
        << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const std::vector<TrialRecord>& records) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write CSV to " + path.string());
  write_csv(out, records);
  if (!out)
    throw std::runtime_error("failed writing CSV to " + path.string());
}

double quantile(std::vector<double> values, double q) {
  if (values.empty())
    throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<RatioSummary> summarize(const std::vector<TrialRecord>& records) {
  std::map<double, std::pair<std::vector<double>, std::vector<double>>> by_ratio;
  for (const auto& r : records) {
    auto& [errors, corrs] = by_ratio[r.ratio];
    errors.push_back(r.rel_error);
    corrs.push_back(r.anchor_correlation);
  }
  std::vector<RatioSummary> out;
  for (const auto& [ratio, samples] : by_ratio) {
    out.push_back({ratio, static_cast<int>(samples.first.size()), quantile(samples.first, 0.5),
                   quantile(samples.first, 0.9), quantile(samples.second, 0.5)});
  }
  return out;
}

void print_summary(std::ostream& out, const std::vector<RatioSummary>& rows) {
  char line[160];
  std::snprintf(line, sizeof line, "%8s %7s %14s %14s %12s\n", "M/N", "trials", "median_err",
                "q90_err", "median_corr");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%8.3g %7d %14.4e %14.4e %12.4f\n", r.ratio, r.trials,
                  r.median_rel_error, r.q90_rel_error, r.median_anchor_correlation);
    out << line;
  }
}

CdpReport run_cdp_demo(const GrayImage& image, const CdpConfig& cfg,
                       const std::filesystem::path& out_prefix) {
  if (cfg.num_masks < 1)
    throw std::invalid_argument("cdp: need at least one mask");
  if (image.pixels.empty() || image.size() != static_cast<std::size_t>(image.width) * image.height)
    throw std::invalid_argument("cdp: malformed image");
  const auto start = std::chrono::steady_clock::now();

  const auto n = static_cast<Eigen::Index>(image.size());
  ComplexVector pixels(n);
  for (Eigen::Index i = 0; i < n; ++i)
    pixels[i] = static_cast<double>(image.pixels[static_cast<std::size_t>(i)]);
  if (pixels.norm() == 0.0)
    throw std::invalid_argument("cdp: image is identically zero, nothing to recover");
  const ComplexSignal xstar(std::move(pixels));

  RngStream rng(cfg.seed, 0);
  const auto ens = MeasurementEnsemble::coded_diffraction_rademacher(n, cfg.num_masks, rng);
  const Observations obs = observe(ens, xstar, NoiseModel::none(), rng);
  const AnchorReport anchor = spectral_anchor(ens, obs, cfg.anchor_iters, rng);
  const Solution sol = solve_phasemax(ens, obs, anchor.a0, cfg.solver);

  CdpReport report;
  report.width = image.width;
  report.height = image.height;
  report.num_masks = cfg.num_masks;
  report.anchor_correlation = anchor_correlation(anchor.a0, xstar);
  report.rel_error = phase_align_error(sol.xhat, xstar);
  report.iters_used = sol.iters_used;
  report.converged = sol.converged;
  // Power iterations of the anchor (iters + 1 applications of Sigma) plus the solver.
  report.operator_applications = 2L * (cfg.anchor_iters + 1) + sol.operator_applications;
  if (cfg.record_runtime)
    report.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (!out_prefix.empty()) {
    const Complex phase = optimal_phase(sol.xhat.values(), xstar.values());
    const Eigen::VectorXd recovered = (sol.xhat.values() * std::conj(phase)).real();
    auto pgm = out_prefix;
    pgm += ".pgm";
    auto raw = out_prefix;
    raw += ".f64";
    write_pgm(pgm, to_gray_image(recovered, image.width, image.height));
    write_raw_f64(raw, recovered);
  }
  return report;
}

CdpReport run_cdp_demo(const std::filesystem::path& image_path, const CdpConfig& cfg,
                       const std::filesystem::path& out_prefix) {
  return run_cdp_demo(read_pgm(image_path), cfg, out_prefix);
}

void write_cdp_report(std::ostream& out, const CdpReport& r) {
  out << "image=" << r.width << 'x' << r.height << '\n'
      << "masks=" << r.num_masks << '\n'
      << "anchor_corr=" << format_double(r.anchor_correlation) << '\n'
      << "rel_error=" << format_double(r.rel_error) << '\n'
      << "iters=" << r.iters_used << '\n'
      << "converged=" << (r.converged ? 1 : 0) << '\n'
      << "operator_applications=" << r.operator_applications << '\n'
      << "runtime_ms=" << format_double(r.runtime_ms) << '\n';
}

}  // namespace phasemax::experiments

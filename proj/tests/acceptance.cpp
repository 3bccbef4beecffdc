// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "phasemax/anchor.hpp"
#include "phasemax/experiments.hpp"
#include "phasemax/solver.hpp"
#include "phasemax/theory.hpp"

using namespace phasemax;
namespace ex = phasemax::experiments;
namespace th = phasemax::theory;

namespace {

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  if (!ok)
    ++failures;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double median_at(const std::vector<ex::RatioSummary>& rows, double ratio) {
  for (const auto& r : rows)
    if (r.ratio == ratio)
      return r.median_rel_error;
  return NAN;
}

ex::SweepConfig transition_config() {
  ex::SweepConfig cfg;
  cfg.n = 128;
  cfg.ratios = {2, 4, 6, 8, 10, 12};
  cfg.trials = 20;
  cfg.anchor_iters = 50;
  cfg.seed = 2024;
  cfg.record_runtime = false;
  return cfg;
}

std::string sweep_csv(const ex::SweepConfig& cfg, std::vector<ex::TrialRecord>* out = nullptr) {
  const auto records = ex::run_sweep(cfg);
  std::ostringstream csv;
  ex::write_csv(csv, records);
  if (out)
    *out = records;
  return csv.str();
}

ex::CdpConfig cdp_config() {
  ex::CdpConfig cfg;
  cfg.num_masks = 20;
  cfg.seed = 7;
  cfg.record_runtime = false;
  return cfg;
}

std::string cdp_report_text(ex::CdpReport* out = nullptr) {
  const auto rep = ex::run_cdp_demo(synthetic_gradient(64, 64), cdp_config(), {});
  std::ostringstream text;
  ex::write_cdp_report(text, rep);
  if (out)
    *out = rep;
  return text.str();
}

void criterion_1_and_9_sweep(std::string& csv) {
  std::vector<ex::TrialRecord> records;
  csv = sweep_csv(transition_config(), &records);
  const auto rows = ex::summarize(records);
  std::string medians;
  bool ok = true;
  for (const auto& r : rows) {
    medians += fmt("%g:%.2e ", r.ratio, r.median_rel_error);
    if (r.ratio >= 10.0 && !(r.median_rel_error <= 1e-3))
      ok = false;
    if (r.ratio <= 2.0 && !(r.median_rel_error >= 0.3))
      ok = false;
  }
  report(1, "phase transition N=128, 20 trials per M/N", ok, "medians " + medians);
}

void criterion_2() {
  std::vector<double> medians;
  bool bounded = true;
  std::string detail;
  for (double eta_inv : {1e-4, 1e-2}) {
    auto cfg = transition_config();
    cfg.ratios = {12};
    cfg.noise = {NoiseKind::Uniform, eta_inv};
    const double med = median_at(ex::summarize(ex::run_sweep(cfg)), 12.0);
    medians.push_back(med);
    bounded = bounded && med <= 10.0 * eta_inv;
    detail += fmt("eta_inv=%g median=%.3e ", eta_inv, med);
  }
  report(2, "uniform noise scaling at M/N=12", bounded && medians[0] < medians[1], detail);
}

void criterion_3() {
  const double alphas[] = {-2, -0.5, 0, 0.5, 2};
  const double betas[] = {-1, -0.1, 0, 0.1, 1};
  const long draws = 1'000'000;
  std::mt19937_64 gen(31337);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst_z = 0.0;
  for (double a : alphas)
    for (double b : betas) {
      long hits = 0;
      for (long k = 0; k < draws; ++k) {
        const double v = std::sqrt(-2.0 * std::log1p(-unif(gen)));
        if (a * v + b / v > normal(gen))
          ++hits;
      }
      const double p = th::rayleigh_normal_cdf(a, b);
      const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(draws));
      const double z = std::abs(static_cast<double>(hits) / draws - p) / se;
      worst_z = std::max(worst_z, z);
    }
  double worst_gap = 0.0;
  for (int k = 0; k <= 2000; ++k) {
    const double a = -10.0 + 0.01 * k;
    worst_gap = std::max(worst_gap, std::abs(th::rayleigh_normal_cdf(a, 0.0) -
                                             th::rayleigh_normal_cdf(a, -1e-300)));
  }
  report(3, "Rayleigh-normal closed form vs Monte Carlo, continuity at beta=0",
         worst_z <= 4.0 && worst_gap <= 1e-12,
         fmt("max |z|=%.2f (<=4), branch gap=%.1e (<=1e-12)", worst_z, worst_gap));
}

void criterion_4() {
  RngStream rng(44, 0);
  ComplexVector x = sample_complex_gaussian_vector(4, rng);
  x.normalize();
  const th::GeometryContext ctx(ComplexSignal(x), 0.9, 10.0, 1e-3);
  const auto est = th::empirical_pmin(ctx, 200, 100'000, rng);
  const double bound = th::pmin_lower_bound(0.9, 10.0);
  const double se = std::max(est.minimum.standard_error(), est.minimum.standard_error_at(bound));
  report(4, "empirical cut probability above the p_min bound",
         est.minimum.probability >= bound - 4.0 * se,
         fmt("min estimate=%.3e, bound=%.3e, se=%.1e, %d directions", est.minimum.probability,
             bound, se, est.directions));
}

void criterion_5() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RngStream rng(5000 + seed, 0);
    Eigen::VectorXd xstar(2);
    xstar << rng.normal(), rng.normal();
    std::vector<Eigen::VectorXd> rows;
    Eigen::MatrixXcd a(15, 2);
    Eigen::VectorXd b(15);
    for (int i = 0; i < 15; ++i) {
      Eigen::VectorXd r(2);
      r << rng.normal(), rng.normal();
      rows.push_back(r);
      a.row(i) = r.transpose().cast<Complex>();
      b[i] = std::pow(r.dot(xstar), 2);
    }
    Observations obs;
    obs.b = b;
    const auto sol = solve_phasemax(MeasurementEnsemble::dense_from_matrix(a), obs,
                                    ComplexSignal(xstar.cast<Complex>()));
    const auto oracle = oracle_solve_small(rows, b, xstar, 2001);
    worst = std::max(worst, phase_align_error(sol.xhat, ComplexSignal(oracle.cast<Complex>())));
  }
  report(5, "solver vs brute-force oracle, 50 instances N=2 M=15", worst <= 1e-4,
         fmt("worst error=%.2e (<=1e-4)", worst));
}

double worst_adjoint(const MeasurementEnsemble& ens, RngStream& rng) {
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto x = sample_complex_gaussian_vector(ens.n(), rng);
    const auto y = sample_complex_gaussian_vector(ens.m(), rng);
    const ComplexVector ax = ens.apply_forward(x);
    const Complex lhs = ax.dot(y);
    const Complex rhs = x.dot(ens.apply_adjoint(y));
    worst = std::max(worst, std::abs(lhs - rhs) / (ax.norm() * y.norm()));
  }
  return worst;
}

void criterion_6() {
  RngStream rng(66, 0);
  const auto dense = MeasurementEnsemble::dense_gaussian(128, 1280, rng);
  const auto cdp = MeasurementEnsemble::coded_diffraction_rademacher(4096, 20, rng);
  const double wd = worst_adjoint(dense, rng);
  const double wc = worst_adjoint(cdp, rng);
  const double norm_gap = std::abs(operator_norm(cdp, 30, rng) - std::sqrt(20.0));
  report(6, "adjoint consistency and CDP operator norm",
         wd <= 1e-10 && wc <= 1e-10 && norm_gap <= 1e-6,
         fmt("dense=%.1e cdp=%.1e (<=1e-10), |norm-sqrt(20)|=%.1e (<=1e-6)", wd, wc, norm_gap));
}

void criterion_7_and_9_cdp(std::string& text) {
  ex::CdpReport rep;
  text = cdp_report_text(&rep);
  const auto cfg = cdp_config();
  const long budget = 2L * (cfg.anchor_iters + 1) + 2L * (cfg.solver.norm_est_iters + cfg.solver.max_iters);
  report(7, "CDP 64x64 L=20 noiseless recovery",
         rep.rel_error <= 1e-4 && rep.operator_applications <= budget,
         fmt("rel_error=%.2e (<=1e-4), applications=%ld (budget %ld)", rep.rel_error,
             rep.operator_applications, budget));
}

void criterion_8() {
  bool ok = true;
  double worst_ratio = 0.0;
  for (double p : {0.01, 0.05, 0.3})
    for (int n : {10, 500})
      for (double eps : {0.1, 0.01}) {
        const double m = th::sample_complexity(p, n, eps);
        const double lhs =
            (16.0 * n * std::log(std::exp(1.0) * m / (2.0 * n)) + 8.0 * std::log(8.0 / eps)) / m;
        ok = ok && m == std::ceil(m) && lhs < p * p;
        worst_ratio = std::max(worst_ratio, lhs / (p * p));
      }
  bool sauer_ok = th::sauer_bound(4, 2) == 11.0;
  for (int n = 1; n <= 8; ++n)
    for (int d = n; d <= 8; ++d)
      sauer_ok = sauer_ok && th::sauer_bound(n, d) == std::ldexp(1.0, n);
  for (int n = 4; n <= 64; ++n)
    for (int d = 2; d <= std::min(8, n); ++d) {
      double sum = 0.0, term = 1.0;
      for (int i = 0; i <= d; ++i) {
        sum += term;
        term = term * (n - i) / (i + 1);
      }
      const double expected = std::min(sum, std::ldexp(1.0, n));
      sauer_ok = sauer_ok && std::abs(th::sauer_bound(n, d) - expected) <= 1e-15 * expected &&
                 th::sauer_bound(n, d) <= th::sauer_relaxation(n, d);
    }
  bool vc_ok = th::vc_deviation_bound(100, 7.0, 0.0) == 56.0;
  const double half = th::vc_deviation_bound(40, 1.0, 0.3) / 8.0;
  vc_ok = vc_ok && std::abs(th::vc_deviation_bound(80, 1.0, 0.3) / 8.0 - half * half) <= 1e-15;
  report(8, "sample-complexity inequality, Sauer and VC grids", ok && sauer_ok && vc_ok,
         fmt("max lhs/p^2=%.6f (<1), sauer %s, vc %s", worst_ratio, sauer_ok ? "ok" : "bad",
             vc_ok ? "ok" : "bad"));
}

}  // namespace

int main() {
  std::string csv_first, report_first;
  criterion_1_and_9_sweep(csv_first);
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7_and_9_cdp(report_first);
  criterion_8();

  const bool csv_same = sweep_csv(transition_config()) == csv_first;
  const bool report_same = cdp_report_text() == report_first;
  report(9, "bitwise-identical reruns of criteria 1 and 7", csv_same && report_same,
         fmt("csv %s, cdp report %s", csv_same ? "identical" : "differs",
             report_same ? "identical" : "differs"));

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}

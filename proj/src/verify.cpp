#include "phasemax/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "phasemax/theory.hpp"

namespace phasemax::verify {

namespace th = phasemax::theory;

Suite parse_suite(std::string_view name) {
  if (name == "closed-forms")
    return Suite::ClosedForms;
  if (name == "geometry")
    return Suite::Geometry;
  if (name == "vc")
    return Suite::Vc;
  if (name == "all")
    return Suite::All;
  throw std::invalid_argument("unknown suite '" + std::string(name) +
                              "' (expected closed-forms, geometry, vc or all)");
}

bool Report::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed)
      return false;
  }
  return true;
}

MonteCarloEstimate monte_carlo_rayleigh_normal(double alpha, double beta, long draws,
                                               RngStream& rng) {
  if (draws < 1)
    throw std::invalid_argument("monte_carlo_rayleigh_normal: draws must be positive");
  long hits = 0;
  for (long k = 0; k < draws; ++k) {
    const double v = std::hypot(rng.normal(), rng.normal());
    const double g = rng.normal();
    if (alpha * v + beta / v > g)
      ++hits;
  }
  return {static_cast<double>(hits) / static_cast<double>(draws), draws};
}

namespace {

std::string fmt(const char* pattern, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

void closed_form_checks(Report& report, std::uint64_t seed) {
  constexpr long kDraws = 1'000'000;
  const double alphas[] = {-2.0, -0.5, 0.0, 0.5, 2.0};
  const double betas[] = {-1.0, -0.1, 0.0, 0.1, 1.0};
  std::uint64_t stream = 0;
  for (double a : alphas) {
    for (double b : betas) {
      RngStream rng(seed, 100 + stream++);
      const double exact = th::rayleigh_normal_cdf(a, b);
      const auto mc = monte_carlo_rayleigh_normal(a, b, kDraws, rng);
      const double se = std::sqrt(exact * (1.0 - exact) / static_cast<double>(kDraws));
      const double dev = std::abs(mc.probability - exact);
      report.checks.push_back({"rayleigh_normal_cdf MC " + fmt("alpha=%g beta=%g", a, b),
                               dev <= 4.0 * se, dev, 4.0 * se,
                               fmt("closed=%.6f mc=%.6f", exact, mc.probability)});
    }
  }

  double worst_jump = 0.0;
  for (int k = 0; k <= 2000; ++k) {
    const double a = -10.0 + 0.01 * k;
    const double below = th::rayleigh_normal_cdf(a, -std::numeric_limits<double>::min());
    worst_jump = std::max(worst_jump, std::abs(below - th::rayleigh_normal_cdf(a, 0.0)));
  }
  report.checks.push_back(
      {"rayleigh_normal_cdf branch continuity at beta=0", worst_jump <= 1e-12, worst_jump, 1e-12, ""});

  bool monotone = true;
  bool bounded = true;
  for (int i = 0; i <= 40; ++i) {
    for (int j = 0; j <= 40; ++j) {
      const double a = -5.0 + 0.25 * i;
      const double b = -5.0 + 0.25 * j;
      const double f = th::rayleigh_normal_cdf(a, b);
      bounded = bounded && f >= 0.0 && f <= 1.0;
      monotone = monotone && th::rayleigh_normal_cdf(a + 0.25, b) >= f - 1e-15 &&
                 th::rayleigh_normal_cdf(a, b + 0.25) >= f - 1e-15;
    }
  }
  report.checks.push_back({"rayleigh_normal_cdf within [0,1] on grid", bounded, 0, 0, ""});
  report.checks.push_back({"rayleigh_normal_cdf non-decreasing in alpha and beta", monotone, 0, 0, ""});

  const double p11 = th::pmin_lower_bound(1.0, 1.0);
  const double expected = 0.5 * std::exp(-2.0 * std::numbers::sqrt2);
  report.checks.push_back({"pmin_lower_bound(1,1) = exp(-2 sqrt 2)/2",
                           std::abs(p11 - expected) <= 1e-15 * expected, p11, expected, ""});
  bool decreasing = true;
  for (double d : {0.3, 0.6, 0.9, 1.0}) {
    for (double t = 0.5; t < 20.0; t += 0.5)
      decreasing = decreasing && th::pmin_lower_bound(d, t + 0.5) < th::pmin_lower_bound(d, t);
  }
  report.checks.push_back({"pmin_lower_bound decreasing in t", decreasing, 0, 0, ""});
}

void geometry_checks(Report& report, std::uint64_t seed) {
  constexpr Eigen::Index kDim = 4;
  RngStream rng(seed, 200);
  ComplexVector x = sample_complex_gaussian_vector(kDim, rng);
  x.normalize();
  const th::GeometryContext ctx(ComplexSignal(x), 0.9, 10.0, 1e-3);
  const auto est = th::empirical_pmin(ctx, 200, 100'000, rng);
  const double bound = th::pmin_lower_bound(ctx.delta(), ctx.t());
  // The empirical error collapses to 0 when no draw hits; test against the bound's own.
  const double se = std::max(est.minimum.standard_error(), est.minimum.standard_error_at(bound));
  const double margin = bound - 4.0 * se;
  report.checks.push_back({"empirical cut probability >= pmin bound - 4 se",
                           est.minimum.probability >= margin, est.minimum.probability, margin,
                           fmt("directions=%g rejections=%g", est.directions,
                               static_cast<double>(est.rejections))});

  bool nested = true;
  int tested = 0;
  for (double delta : {0.1, 0.5, 0.9, 0.99}) {
    const th::GeometryContext c(ComplexSignal(x), delta, 1.0, 0.0);
    for (int k = 0; k < 500; ++k) {
      // Mix in x so that a fair share of samples land in C_delta.
      const ComplexVector y = sample_complex_gaussian_vector(kDim, rng) * 0.3 + x * (k % 3);
      const ComplexSignal ys(y);
      if (th::in_C_delta(ys, c)) {
        ++tested;
        nested = nested && th::in_Cprime_delta(ys, c);
      }
    }
  }
  report.checks.push_back({"C_delta contained in C'_delta", nested && tested > 0,
                           static_cast<double>(tested), 1.0, ""});

  const th::GeometryContext c(ComplexSignal(x), 0.5, 1.0, 0.0);
  const bool r_ok = th::in_R_delta(ComplexSignal(x), c) &&
                    !th::in_R_delta(ComplexSignal(x * Complex(0.0, 1.0)), c);
  const bool cp_ok = !th::in_Cprime_delta(ComplexSignal(-x), c) &&
                     th::in_Cprime_delta(ComplexSignal(x), c);
  report.checks.push_back({"R_delta contains x and excludes i x", r_ok, 0, 0, ""});
  report.checks.push_back({"C'_delta contains x and excludes -x", cp_ok, 0, 0, ""});
}

void vc_checks(Report& report) {
  bool relaxation = true;
  for (int n = 4; n <= 64; ++n) {
    for (int d = 2; d <= std::min(8, n); ++d)
      relaxation = relaxation && th::sauer_relaxation(n, d) >= th::sauer_bound(n, d);
  }
  report.checks.push_back({"sauer sum <= (e n / d)^d for n >= d", relaxation, 0, 0, ""});

  bool full = true;
  for (int n = 1; n <= 8; ++n)
    for (int d = n; d <= 10; ++d)
      full = full && th::sauer_bound(n, d) == std::ldexp(1.0, n);
  report.checks.push_back({"sauer bound = 2^n for n <= d", full, 0, 0, ""});
  report.checks.push_back(
      {"sauer_bound(4, 2) = 11", th::sauer_bound(4, 2) == 11.0, th::sauer_bound(4, 2), 11.0, ""});

  bool dev_ok = true;
  for (double s : {1.0, 11.0, 1e6}) {
    dev_ok = dev_ok && th::vc_deviation_bound(100, s, 0.0) == 8.0 * s;
    for (int n : {10, 100, 1000}) {
      for (double t : {0.05, 0.2, 0.5}) {
        const double single = th::vc_deviation_bound(n, s, t) / (8.0 * s);
        const double doubled = th::vc_deviation_bound(2 * n, s, t) / (8.0 * s);
        dev_ok = dev_ok && std::abs(doubled - single * single) <= 1e-12 * single * single;
      }
    }
  }
  report.checks.push_back({"vc deviation bound: t=0 value and doubling law", dev_ok, 0, 0, ""});

  double worst_ratio = 0.0;
  for (double p : {0.01, 0.05, 0.3}) {
    for (int n : {10, 500}) {
      for (double eps : {0.1, 0.01}) {
        const double m = th::sample_complexity(p, n, eps);
        worst_ratio = std::max(worst_ratio, th::sample_complexity_slack(m, n, eps) / (p * p));
      }
    }
  }
  report.checks.push_back({"sample complexity: deviation term < p_min^2 on grid", worst_ratio < 1.0,
                           worst_ratio, 1.0, "observed is max slack / p_min^2"});
}

}  // namespace

Report run_verify(Suite suite, std::uint64_t seed) {
  Report report;
  if (suite == Suite::ClosedForms || suite == Suite::All)
    closed_form_checks(report, seed);
  if (suite == Suite::Geometry || suite == Suite::All)
    geometry_checks(report, seed);
  if (suite == Suite::Vc || suite == Suite::All)
    vc_checks(report);
  return report;
}

void print_report(std::ostream& out, const Report& report) {
  int failed = 0;
  for (const auto& c : report.checks) {
    char line[256];
    std::snprintf(line, sizeof line, "[%s] %s  observed=%.6g required=%.6g", c.passed ? "PASS" : "FAIL",
                  c.name.c_str(), c.observed, c.required);
    out << line;
    if (!c.detail.empty())
      out << "  (" << c.detail << ')';
    out << '\n';
    failed += c.passed ? 0 : 1;
  }
  out << report.checks.size() - static_cast<std::size_t>(failed) << '/' << report.checks.size()
      << " checks passed\n";
}

}  // namespace phasemax::verify

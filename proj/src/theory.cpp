#include "phasemax/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phasemax::theory {

GeometryContext::GeometryContext(ComplexSignal xstar, double delta, double t, double eta_inv)
    : xstar_(std::move(xstar)), delta_(delta), t_(t), eta_inv_(eta_inv) {
  if (std::abs(xstar_.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("GeometryContext: xstar must have unit norm");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("GeometryContext: delta must lie in (0, 1)");
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::invalid_argument("GeometryContext: t must be positive");
  if (!(eta_inv >= 0.0) || !std::isfinite(eta_inv))
    throw std::invalid_argument("GeometryContext: eta_inv must be non-negative");
}

double rayleigh_normal_cdf(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta))
    throw std::invalid_argument("rayleigh_normal_cdf: inputs must be finite");
  const double s = std::hypot(alpha, 1.0);
  // s + alpha and s - alpha, each formed without cancellation.
  const double plus = alpha >= 0.0 ? s + alpha : 1.0 / (s - alpha);
  const double minus = alpha <= 0.0 ? s - alpha : 1.0 / (s + alpha);
  double value;
  if (beta >= 0.0)
    value = 1.0 - minus / (2.0 * s) * std::exp(-beta * plus);
  else
    value = plus / (2.0 * s) * std::exp(beta / plus);
  return std::clamp(value, 0.0, 1.0);
}

double log_pmin_lower_bound(double delta, double t) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("pmin_lower_bound: delta must lie in (0, 1]");
  if (!(t > 0.0))
    throw std::invalid_argument("pmin_lower_bound: t must be positive");
  // 1/2 - sqrt(1 - delta^2)/2 = delta^2 / (2 (1 + sqrt(1 - delta^2)))
  const double prefactor = delta * delta / (2.0 * (1.0 + std::sqrt(1.0 - delta * delta)));
  return std::log(prefactor) - 2.0 * std::numbers::sqrt2 * t / (delta * delta);
}

double pmin_lower_bound(double delta, double t) {
  return std::exp(log_pmin_lower_bound(delta, t));
}

namespace {

void check_length(const ComplexSignal& v, const GeometryContext& ctx) {
  if (v.size() != ctx.xstar().size())
    throw std::invalid_argument("geometry predicate: length does not match xstar");
}

}  // namespace

bool in_R_delta(const ComplexSignal& h, const GeometryContext& ctx) {
  check_length(h, ctx);
  const ComplexVector& x = ctx.xstar().values();
  const Complex proj = x.dot(h.values());
  const double perp = (h.values() - proj * x).norm();
  return perp >= ctx.delta() * std::abs(proj.imag());
}

bool in_C_delta(const ComplexSignal& y, const GeometryContext& ctx) {
  check_length(y, ctx);
  return ctx.xstar().values().dot(y.values()).real() >= ctx.delta() * y.norm();
}

bool in_Cprime_delta(const ComplexSignal& z, const GeometryContext& ctx) {
  check_length(z, ctx);
  const Complex proj = ctx.xstar().values().dot(z.values());
  const double perp_sq = std::max(0.0, z.values().squaredNorm() - std::norm(proj));
  const double delta = ctx.delta();
  return delta * proj.real() >= -std::sqrt(1.0 - delta * delta) * std::sqrt(perp_sq);
}

Eigen::VectorXd cut_statistics(const MeasurementEnsemble& ens, const ComplexSignal& xstar,
                               const ComplexSignal& h) {
  const ComplexVector ax = ens.apply_forward(xstar.values());
  const ComplexVector ah = ens.apply_forward(h.values());
  return (ax.conjugate().array() * ah.array()).real();
}

CertificateReport check_certificate(const ComplexSignal& h, const ComplexSignal& a0,
                                    const MeasurementEnsemble& ens, const GeometryContext& ctx) {
  if (a0.size() != h.size())
    throw std::invalid_argument("check_certificate: anchor length does not match h");
  CertificateReport report{h, false, false, std::nullopt, false};
  report.in_R_delta = in_R_delta(h, ctx);
  report.anchor_inequality_holds = real_inner(a0, h) >= 0.0;
  const Eigen::VectorXd stats = cut_statistics(ens, ctx.xstar(), h);
  const double threshold = 0.5 * ctx.eta_inv();
  for (Eigen::Index i = 0; i < stats.size(); ++i) {
    if (stats[i] > threshold) {
      report.first_violated_constraint = i;
      break;
    }
  }
  report.certified_excluded =
      !report.anchor_inequality_holds || report.first_violated_constraint.has_value();
  return report;
}

double CutProbabilityEstimate::standard_error() const {
  if (draws <= 0)
    return 0.0;
  return std::sqrt(probability * (1.0 - probability) / static_cast<double>(draws));
}

double CutProbabilityEstimate::standard_error_at(double p) const {
  if (draws <= 0 || !(p >= 0.0 && p <= 1.0))
    return 0.0;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(draws));
}

CutProbabilityEstimate empirical_cut_probability(const ComplexSignal& h,
                                                 const GeometryContext& ctx, long num_a,
                                                 RngStream& rng) {
  check_length(h, ctx);
  if (num_a < 1)
    throw std::invalid_argument("empirical_cut_probability: num_a must be positive");
  const ComplexVector& x = ctx.xstar().values();
  const double threshold = 0.5 * ctx.eta_inv();
  long hits = 0;
  for (long k = 0; k < num_a; ++k) {
    const ComplexVector a = sample_complex_gaussian_vector(x.size(), rng);
    const Complex ax = a.dot(x);
    const Complex ah = a.dot(h.values());
    if ((std::conj(ax) * ah).real() > threshold)
      ++hits;
  }
  return {static_cast<double>(hits) / static_cast<double>(num_a), num_a};
}

EmpiricalPmin empirical_pmin(const GeometryContext& ctx, int num_h, long num_a, RngStream& rng) {
  if (num_h < 1 || num_a < 1)
    throw std::invalid_argument("empirical_pmin: num_h and num_a must be positive");
  const long max_proposals = 1000L * num_h + 1000L;
  const double radius = (1.0 + 1e-6) * ctx.error_radius();
  const Eigen::Index n = ctx.xstar().size();

  EmpiricalPmin result;
  result.minimum.probability = 1.0;
  long proposals = 0;
  while (result.directions < num_h) {
    if (proposals++ >= max_proposals)
      throw std::runtime_error("empirical_pmin: too few directions accepted in C'_delta and R_delta");
    ComplexVector dir = sample_complex_gaussian_vector(n, rng);
    const double norm = dir.norm();
    if (norm == 0.0)
      continue;
    const ComplexSignal h(dir * (radius / norm));
    if (!in_Cprime_delta(h, ctx) || !in_R_delta(h, ctx)) {
      ++result.rejections;
      continue;
    }
    const auto estimate = empirical_cut_probability(h, ctx, num_a, rng);
    if (result.directions == 0 || estimate.probability < result.minimum.probability)
      result.minimum = estimate;
    ++result.directions;
  }
  return result;
}

double sauer_bound(int n, int d) {
  if (n < 1 || d < 1)
    throw std::invalid_argument("sauer_bound: n and d must be positive");
  const double full = std::ldexp(1.0, n);
  if (n <= d)
    return full;
  double term = 1.0;
  double sum = 1.0;
  for (int i = 1; i <= d; ++i) {
    term = term * static_cast<double>(n - i + 1) / static_cast<double>(i);
    sum += term;
  }
  return std::min(sum, full);
}

double sauer_relaxation(int n, int d) {
  if (n < 1 || d < 1)
    throw std::invalid_argument("sauer_relaxation: n and d must be positive");
  return std::pow(std::numbers::e * n / d, d);
}

double vc_deviation_bound(int n, double shatter, double t) {
  if (n < 1 || !(shatter >= 1.0) || !(t >= 0.0))
    throw std::invalid_argument("vc_deviation_bound: need n >= 1, shatter >= 1, t >= 0");
  return 8.0 * shatter * std::exp(-n * t * t / 8.0);
}

double sample_complexity(double p_min, int n_dim, double failure_prob) {
  if (!(p_min > 0.0 && p_min < 1.0))
    throw std::invalid_argument("sample_complexity: p_min must lie in (0, 1)");
  if (n_dim < 1)
    throw std::invalid_argument("sample_complexity: dimension must be positive");
  if (!(failure_prob > 0.0 && failure_prob < 1.0))
    throw std::invalid_argument("sample_complexity: failure probability must lie in (0, 1)");
  const double log_p2 = 2.0 * std::log(p_min);
  const double c = 2.0 * (std::log(8.0) + 1.0 - log_p2);
  const double m = 8.0 * std::exp(-log_p2) *
                   (2.0 * c * n_dim + 2.0 * std::log(8.0 / failure_prob));
  return std::ceil(m);
}

double sample_complexity_slack(double m, int n_dim, double failure_prob) {
  if (!(m > 0.0) || n_dim < 1 || !(failure_prob > 0.0 && failure_prob < 1.0))
    throw std::invalid_argument("sample_complexity_slack: invalid arguments");
  return (16.0 * n_dim * std::log(std::numbers::e * m / (2.0 * n_dim)) +
          8.0 * std::log(8.0 / failure_prob)) /
         m;
}

}  // namespace phasemax::theory

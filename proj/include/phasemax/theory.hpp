#pragma once

#include <cstdint>
#include <optional>

#include "phasemax/measurements.hpp"

namespace phasemax::theory {

/// Geometry of the recovery analysis around a unit-norm target.
///
/// delta is the anchor correlation level, t the error-to-noise scale, and
/// eta_inv the noise bound. Construction rejects a non-unit xstar.
class GeometryContext {
 public:
  GeometryContext(ComplexSignal xstar, double delta, double t, double eta_inv);

  [[nodiscard]] const ComplexSignal& xstar() const { return xstar_; }
  [[nodiscard]] double delta() const { return delta_; }
  [[nodiscard]] double t() const { return t_; }
  [[nodiscard]] double eta_inv() const { return eta_inv_; }
  /// Norm threshold (t eta)^{-1} = eta_inv / t above which error vectors are considered.
  [[nodiscard]] double error_radius() const { return eta_inv_ / t_; }

 private:
  ComplexSignal xstar_;
  double delta_;
  double t_;
  double eta_inv_;
};

struct CertificateReport {
  ComplexSignal h;
  bool in_R_delta = false;
  /// <a0, h> >= 0
  bool anchor_inequality_holds = false;
  /// First i with <a_i a_i^* xstar, h> > eta_inv / 2.
  std::optional<Eigen::Index> first_violated_constraint;
  bool certified_excluded = false;
};

/// P(alpha v + beta / v > g) for independent v ~ Rayleigh(1), g ~ Normal(0, 1).
double rayleigh_normal_cdf(double alpha, double beta);

/// Lower bound (1/2 - sqrt(1 - delta^2)/2) exp(-2 sqrt(2) t / delta^2) on the
/// probability that a complex Gaussian measurement cuts off an error direction.
double pmin_lower_bound(double delta, double t);
/// Natural log of pmin_lower_bound, finite even where the bound underflows.
double log_pmin_lower_bound(double delta, double t);

/// ||h - (x^* h) x|| >= delta |Im(x^* h)|
bool in_R_delta(const ComplexSignal& h, const GeometryContext& ctx);
/// Re(x^* y) >= delta ||y||
bool in_C_delta(const ComplexSignal& y, const GeometryContext& ctx);
/// delta <x, z> >= -sqrt(1 - delta^2) sqrt(||z||^2 - |x^* z|^2)
bool in_Cprime_delta(const ComplexSignal& z, const GeometryContext& ctx);

/// <a_i a_i^* x, h> = Re(conj(a_i^* x) (a_i^* h)) for every measurement i.
Eigen::VectorXd cut_statistics(const MeasurementEnsemble& ens, const ComplexSignal& xstar,
                               const ComplexSignal& h);

/// Evaluates whether h violates the anchor inequality or some measurement inequality.
CertificateReport check_certificate(const ComplexSignal& h, const ComplexSignal& a0,
                                    const MeasurementEnsemble& ens, const GeometryContext& ctx);

struct CutProbabilityEstimate {
  double probability = 0.0;
  long draws = 0;
  [[nodiscard]] double standard_error() const;
  /// Binomial standard error at a reference probability p, e.g. a hypothesized
  /// lower bound; stays positive when no draw hits.
  [[nodiscard]] double standard_error_at(double p) const;
};

/// Monte Carlo estimate of P(<a a^* xstar, h> > eta_inv / 2) over complex Gaussian a.
CutProbabilityEstimate empirical_cut_probability(const ComplexSignal& h,
                                                 const GeometryContext& ctx, long num_a,
                                                 RngStream& rng);

struct EmpiricalPmin {
  /// Smallest per-direction estimate.
  CutProbabilityEstimate minimum;
  int directions = 0;
  long rejections = 0;
};

/// Minimum cut probability over directions rejection-sampled from C'_delta and R_delta.
///
/// Each accepted direction is scaled just above the error radius, where the
/// cut probability is smallest. Throws when no direction is accepted within
/// a bounded number of proposals.
EmpiricalPmin empirical_pmin(const GeometryContext& ctx, int num_h, long num_a, RngStream& rng);

/// min(sum_{i<=d} C(n, i), 2^n).
double sauer_bound(int n, int d);
/// The relaxation (e n / d)^d, valid for n >= d.
double sauer_relaxation(int n, int d);

/// 8 s exp(-n t^2 / 8). May exceed 1.
double vc_deviation_bound(int n, double shatter, double t);

/// Measurement count ceil((8 / p^2)(2 c N + 2 log(8 / failure_prob))), c = 2 log(8e / p^2).
///
/// Returned as a double holding an integer: for realistic p_min the count far
/// exceeds the 64-bit integer range.
double sample_complexity(double p_min, int n_dim, double failure_prob);

/// The deviation term (16 N log(e M / 2N) + 8 log(8 / failure_prob)) / M, which must fall below p_min^2.
double sample_complexity_slack(double m, int n_dim, double failure_prob);

}  // namespace phasemax::theory

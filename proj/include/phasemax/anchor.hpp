#pragma once

#include "phasemax/measurements.hpp"

namespace phasemax {

struct AnchorReport {
  ComplexSignal a0;
  int power_iters = 0;
  /// <a0, Sigma a0> at exit, the top-eigenvalue estimate.
  double rayleigh_quotient = 0.0;
};

/// Principal eigenvector of Sigma = (1/m) sum_i b_i a_i a_i^* by power iteration.
///
/// Sigma is applied matrix-free as (1/m) A^*(b o Ax). The start vector is a
/// complex Gaussian draw from `rng`. Throws if b is identically zero.
AnchorReport spectral_anchor(const MeasurementEnsemble& ens, const Observations& obs, int iters,
                             RngStream& rng);

/// |a0^* x| / (||a0|| ||x||).
double anchor_correlation(const ComplexSignal& a0, const ComplexSignal& xstar);

/// The unit vector with all entries 1/sqrt(n); a valid anchor for non-negative signals.
ComplexSignal constant_anchor(Eigen::Index n);

}  // namespace phasemax

#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace phasemax {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;

/// A length-N complex vector with finite entries.
///
/// C^N is treated as a 2N-dimensional real inner-product space; see real_inner().
/// The length is fixed at construction. Finiteness is checked once there, so
/// hot loops work on the underlying Eigen vector directly.
class ComplexSignal {
 public:
  explicit ComplexSignal(ComplexVector values);
  static ComplexSignal zeros(Eigen::Index n);

  [[nodiscard]] Eigen::Index size() const { return values_.size(); }
  [[nodiscard]] const ComplexVector& values() const { return values_; }
  [[nodiscard]] Complex operator[](Eigen::Index i) const { return values_[i]; }
  [[nodiscard]] double norm() const { return values_.norm(); }

  [[nodiscard]] ComplexSignal scaled(Complex factor) const;

 private:
  ComplexVector values_;
};

/// Reproducible random stream keyed by (seed, stream_id).
///
/// Distinct stream ids give independent engines, so parallel trials can each
/// own one. A stream must not be shared between threads.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::uint64_t stream_id() const { return stream_id_; }

  double normal(double stddev = 1.0);
  double uniform(double lo, double hi);
  bool coin();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// Re(x^* y).
double real_inner(const ComplexSignal& x, const ComplexSignal& y);
double real_inner(const ComplexVector& x, const ComplexVector& y);

/// min over phi of ||xhat - e^{i phi} xstar|| / ||xstar||, evaluated in closed form.
double phase_align_error(const ComplexSignal& xhat, const ComplexSignal& xstar);
double phase_align_error(const ComplexVector& xhat, const ComplexVector& xstar);

/// The unit-modulus factor w minimizing ||xhat - w xstar||; 1 when xhat^* xstar = 0.
Complex optimal_phase(const ComplexVector& xhat, const ComplexVector& xstar);

/// Entries with independent Normal(0, 1/2) real and imaginary parts.
ComplexSignal sample_complex_gaussian(Eigen::Index n, RngStream& rng);
ComplexVector sample_complex_gaussian_vector(Eigen::Index n, RngStream& rng);

/// Entries drawn uniformly from {+1, -1}.
ComplexSignal sample_rademacher(Eigen::Index n, RngStream& rng);

bool all_finite(const ComplexVector& v);

}  // namespace phasemax

#include "phasemax/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace phasemax {

bool all_finite(const ComplexVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
      return false;
  }
  return true;
}

ComplexSignal::ComplexSignal(ComplexVector values) : values_(std::move(values)) {
  if (values_.size() < 1)
    throw std::invalid_argument("ComplexSignal: length must be at least 1");
  if (!all_finite(values_))
    throw std::invalid_argument("ComplexSignal: entries must be finite");
}

ComplexSignal ComplexSignal::zeros(Eigen::Index n) {
  return ComplexSignal(ComplexVector::Zero(n));
}

ComplexSignal ComplexSignal::scaled(Complex factor) const {
  return ComplexSignal(values_ * factor);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32),
                    0x70686d78u};
  engine_.seed(seq);
}

double RngStream::normal(double stddev) {
  return std::normal_distribution<double>(0.0, stddev)(engine_);
}

double RngStream::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

bool RngStream::coin() { return (engine_() >> 63) != 0; }

double real_inner(const ComplexVector& x, const ComplexVector& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("real_inner: length mismatch");
  return x.dot(y).real();  // Eigen's dot conjugates the first argument
}

double real_inner(const ComplexSignal& x, const ComplexSignal& y) {
  return real_inner(x.values(), y.values());
}

Complex optimal_phase(const ComplexVector& xhat, const ComplexVector& xstar) {
  const Complex c = xstar.dot(xhat);  // x_star^* xhat
  const double mag = std::abs(c);
  if (mag == 0.0)
    return {1.0, 0.0};
  return c / mag;
}

double phase_align_error(const ComplexVector& xhat, const ComplexVector& xstar) {
  if (xhat.size() != xstar.size())
    throw std::invalid_argument("phase_align_error: length mismatch");
  const double ref = xstar.norm();
  if (ref == 0.0)
    throw std::invalid_argument("phase_align_error: reference signal is zero");
  const double residual = (xhat - optimal_phase(xhat, xstar) * xstar).norm();
  return residual / ref;
}

double phase_align_error(const ComplexSignal& xhat, const ComplexSignal& xstar) {
  return phase_align_error(xhat.values(), xstar.values());
}

ComplexVector sample_complex_gaussian_vector(Eigen::Index n, RngStream& rng) {
  if (n < 1)
    throw std::invalid_argument("sample_complex_gaussian: n must be at least 1");
  const double s = std::sqrt(0.5);
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = rng.normal(s);
    const double im = rng.normal(s);
    v[i] = {re, im};
  }
  return v;
}

ComplexSignal sample_complex_gaussian(Eigen::Index n, RngStream& rng) {
  return ComplexSignal(sample_complex_gaussian_vector(n, rng));
}

ComplexSignal sample_rademacher(Eigen::Index n, RngStream& rng) {
  if (n < 1)
    throw std::invalid_argument("sample_rademacher: n must be at least 1");
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = rng.coin() ? 1.0 : -1.0;
  return ComplexSignal(std::move(v));
}

}  // namespace phasemax

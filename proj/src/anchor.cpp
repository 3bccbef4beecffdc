#include "phasemax/anchor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phasemax {

namespace {

// w = Sigma v
void apply_sigma(const MeasurementEnsemble& ens, const Eigen::VectorXd& b, const ComplexVector& v,
                 ComplexVector& av, ComplexVector& w) {
  ens.apply_forward(v, av);
  av.array() *= b.array().cast<Complex>();
  ens.apply_adjoint(av, w);
  w /= static_cast<double>(ens.m());
}

}  // namespace

AnchorReport spectral_anchor(const MeasurementEnsemble& ens, const Observations& obs, int iters,
                             RngStream& rng) {
  if (iters < 1)
    throw std::invalid_argument("spectral_anchor: iters must be at least 1");
  if (obs.size() != ens.m())
    throw std::invalid_argument("spectral_anchor: observation count does not match ensemble");
  if ((obs.b.array() == 0.0).all())
    throw std::invalid_argument("spectral_anchor: all observations are zero");

  ComplexVector v = sample_complex_gaussian_vector(ens.n(), rng);
  v.normalize();
  ComplexVector av;
  ComplexVector w;
  for (int k = 0; k < iters; ++k) {
    apply_sigma(ens, obs.b, v, av, w);
    const double wn = w.norm();
    if (wn == 0.0)
      throw std::runtime_error("spectral_anchor: start vector lies in the null space of Sigma");
    v = w / wn;
  }
  apply_sigma(ens, obs.b, v, av, w);
  return AnchorReport{ComplexSignal(v), iters, real_inner(v, w)};
}

double anchor_correlation(const ComplexSignal& a0, const ComplexSignal& xstar) {
  if (a0.size() != xstar.size())
    throw std::invalid_argument("anchor_correlation: length mismatch");
  const double na = a0.norm();
  const double nx = xstar.norm();
  if (na == 0.0 || nx == 0.0)
    throw std::invalid_argument("anchor_correlation: zero vector");
  return std::min(1.0, std::abs(a0.values().dot(xstar.values())) / (na * nx));
}

ComplexSignal constant_anchor(Eigen::Index n) {
  if (n < 1)
    throw std::invalid_argument("constant_anchor: n must be at least 1");
  return ComplexSignal(ComplexVector::Constant(n, Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0)));
}

}  // namespace phasemax

#include "phasemax/measurements.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace phasemax {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

/// Unnormalized forward and backward DFT plans of one length, usable on any buffers.
class DftPlans {
 public:
  explicit DftPlans(Eigen::Index n) {
    ComplexVector in(n);
    ComplexVector out(n);
    const auto size = static_cast<int>(n);
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_1d(size, as_fftw(in.data()), as_fftw(out.data()), FFTW_FORWARD, flags);
    backward_ = fftw_plan_dft_1d(size, as_fftw(in.data()), as_fftw(out.data()), FFTW_BACKWARD, flags);
    if (!forward_ || !backward_)
      throw std::runtime_error("FFTW failed to create a plan");
  }
  DftPlans(const DftPlans&) = delete;
  DftPlans& operator=(const DftPlans&) = delete;
  ~DftPlans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  void forward(ComplexVector& in, ComplexVector& out) const {
    fftw_execute_dft(forward_, as_fftw(in.data()), as_fftw(out.data()));
  }
  void backward(ComplexVector& in, ComplexVector& out) const {
    fftw_execute_dft(backward_, as_fftw(in.data()), as_fftw(out.data()));
  }

 private:
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

MeasurementEnsemble MeasurementEnsemble::dense(const std::vector<ComplexSignal>& rows) {
  if (rows.empty())
    throw std::invalid_argument("dense ensemble needs at least one measurement vector");
  const Eigen::Index n = rows.front().size();
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n)
      throw std::invalid_argument("dense ensemble rows must share one length");
    a.row(static_cast<Eigen::Index>(i)) = rows[i].values().adjoint();
  }
  return dense_from_matrix(std::move(a));
}

MeasurementEnsemble MeasurementEnsemble::dense_from_matrix(Eigen::MatrixXcd matrix) {
  if (matrix.rows() < 1 || matrix.cols() < 1)
    throw std::invalid_argument("dense ensemble must be non-empty");
  MeasurementEnsemble e;
  e.kind_ = EnsembleKind::DenseGaussian;
  e.n_ = matrix.cols();
  e.m_ = matrix.rows();
  e.matrix_ = std::move(matrix);
  return e;
}

MeasurementEnsemble MeasurementEnsemble::dense_gaussian(Eigen::Index n, Eigen::Index m,
                                                        RngStream& rng) {
  if (n < 1 || m < 1)
    throw std::invalid_argument("dense_gaussian: n and m must be positive");
  Eigen::MatrixXcd a(m, n);
  // Row i holds a_i^*; conjugation preserves the circular Gaussian law.
  for (Eigen::Index i = 0; i < m; ++i)
    a.row(i) = sample_complex_gaussian_vector(n, rng).adjoint();
  return dense_from_matrix(std::move(a));
}

MeasurementEnsemble MeasurementEnsemble::coded_diffraction(std::vector<ComplexSignal> masks) {
  if (masks.empty())
    throw std::invalid_argument("coded diffraction needs at least one mask");
  MeasurementEnsemble e;
  e.kind_ = EnsembleKind::CodedDiffraction;
  e.n_ = masks.front().size();
  for (const auto& mask : masks) {
    if (mask.size() != e.n_)
      throw std::invalid_argument("coded diffraction masks must share one length");
    e.masks_.push_back(mask.values());
  }
  e.m_ = e.n_ * static_cast<Eigen::Index>(e.masks_.size());
  e.plans_ = std::make_shared<const DftPlans>(e.n_);
  return e;
}

MeasurementEnsemble MeasurementEnsemble::coded_diffraction_rademacher(Eigen::Index n,
                                                                      Eigen::Index num_masks,
                                                                      RngStream& rng) {
  if (num_masks < 1)
    throw std::invalid_argument("coded diffraction needs at least one mask");
  std::vector<ComplexSignal> masks;
  masks.reserve(static_cast<std::size_t>(num_masks));
  for (Eigen::Index l = 0; l < num_masks; ++l)
    masks.push_back(sample_rademacher(n, rng));
  return coded_diffraction(std::move(masks));
}

void MeasurementEnsemble::apply_forward(const ComplexVector& x, ComplexVector& out) const {
  if (x.size() != n_)
    throw std::invalid_argument("forward: signal length does not match ensemble");
  if (kind_ == EnsembleKind::DenseGaussian) {
    out.noalias() = matrix_ * x;
    return;
  }
  out.resize(m_);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  ComplexVector modulated(n_);
  ComplexVector spectrum(n_);
  for (std::size_t l = 0; l < masks_.size(); ++l) {
    modulated = masks_[l].cwiseProduct(x);
    plans_->forward(modulated, spectrum);
    out.segment(static_cast<Eigen::Index>(l) * n_, n_) = spectrum * scale;
  }
}

void MeasurementEnsemble::apply_adjoint(const ComplexVector& z, ComplexVector& out) const {
  if (z.size() != m_)
    throw std::invalid_argument("adjoint: measurement length does not match ensemble");
  if (kind_ == EnsembleKind::DenseGaussian) {
    out.noalias() = matrix_.adjoint() * z;
    return;
  }
  out.setZero(n_);
  // Unscaled inverse is n times the true inverse; the unitary inverse needs 1/sqrt(n).
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  ComplexVector block(n_);
  ComplexVector signal(n_);
  for (std::size_t l = 0; l < masks_.size(); ++l) {
    block = z.segment(static_cast<Eigen::Index>(l) * n_, n_);
    plans_->backward(block, signal);
    out += masks_[l].conjugate().cwiseProduct(signal) * scale;
  }
}

ComplexVector MeasurementEnsemble::apply_forward(const ComplexVector& x) const {
  ComplexVector out;
  apply_forward(x, out);
  return out;
}

ComplexVector MeasurementEnsemble::apply_adjoint(const ComplexVector& z) const {
  ComplexVector out;
  apply_adjoint(z, out);
  return out;
}

ComplexSignal MeasurementEnsemble::forward(const ComplexSignal& x) const {
  return ComplexSignal(apply_forward(x.values()));
}

ComplexSignal MeasurementEnsemble::adjoint(const ComplexSignal& z) const {
  return ComplexSignal(apply_adjoint(z.values()));
}

NoiseModel NoiseModel::uniform(double eta_inv) {
  NoiseModel nm{NoiseKind::Uniform, eta_inv, 0.0};
  nm.validate();
  return nm;
}

NoiseModel NoiseModel::gaussian(double sigma) {
  NoiseModel nm{NoiseKind::Gaussian, 0.0, sigma};
  nm.validate();
  return nm;
}

NoiseModel NoiseModel::gaussian_from_snr(double snr_db, double signal_norm) {
  if (!std::isfinite(snr_db) || !(signal_norm > 0.0))
    throw std::invalid_argument("gaussian_from_snr: need finite SNR and a nonzero signal");
  return gaussian(signal_norm * signal_norm * std::pow(10.0, -snr_db / 20.0));
}

void NoiseModel::validate() const {
  switch (kind) {
    case NoiseKind::None:
      return;
    case NoiseKind::Uniform:
      if (!(eta_inv >= 0.0) || !std::isfinite(eta_inv))
        throw std::invalid_argument("uniform noise needs a finite eta_inv >= 0");
      return;
    case NoiseKind::Gaussian:
      if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("gaussian noise needs a finite sigma > 0");
      return;
  }
}

double NoiseModel::parameter() const {
  switch (kind) {
    case NoiseKind::Uniform:
      return eta_inv;
    case NoiseKind::Gaussian:
      return sigma;
    case NoiseKind::None:
      break;
  }
  return 0.0;
}

const char* to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::None:
      return "none";
    case NoiseKind::Uniform:
      return "uniform";
    case NoiseKind::Gaussian:
      return "gaussian";
  }
  return "unknown";
}

double input_snr_db(double signal_norm, double sigma) {
  return 10.0 * std::log10(std::pow(signal_norm, 4) / (sigma * sigma));
}

Observations observe(const MeasurementEnsemble& ens, const ComplexSignal& xstar,
                     const NoiseModel& noise, RngStream& rng) {
  noise.validate();
  const ComplexVector ax = ens.apply_forward(xstar.values());
  Observations obs;
  obs.noise = noise;
  obs.b = ax.cwiseAbs2();
  switch (noise.kind) {
    case NoiseKind::None:
      break;
    case NoiseKind::Uniform:
      for (Eigen::Index i = 0; i < obs.b.size(); ++i)
        obs.b[i] += rng.uniform(0.0, noise.eta_inv);
      break;
    case NoiseKind::Gaussian:
      for (Eigen::Index i = 0; i < obs.b.size(); ++i)
        obs.b[i] = std::max(0.0, obs.b[i] + rng.normal(noise.sigma));
      obs.snr_db = input_snr_db(xstar.norm(), noise.sigma);
      break;
  }
  return obs;
}

double operator_norm(const MeasurementEnsemble& ens, int iters, RngStream& rng) {
  if (iters < 1)
    throw std::invalid_argument("operator_norm: iters must be at least 1");
  ComplexVector v = sample_complex_gaussian_vector(ens.n(), rng);
  v.normalize();
  ComplexVector av;
  ComplexVector w;
  double estimate = 0.0;
  for (int k = 0; k < iters; ++k) {
    ens.apply_forward(v, av);
    ens.apply_adjoint(av, w);
    const double wn = w.norm();
    estimate = std::sqrt(wn);
    if (wn == 0.0)
      break;
    v = w / wn;
  }
  return estimate;
}

}  // namespace phasemax

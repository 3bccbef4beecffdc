#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "phasemax/numerics.hpp"

namespace phasemax {

class DftPlans;

enum class EnsembleKind { DenseGaussian, CodedDiffraction };

/// Linear measurement map A : C^n -> C^m with entries (Ax)_i = a_i^* x.
///
/// Dense ensembles keep the rows a_i^* explicitly. Coded-diffraction ensembles
/// keep only the L modulation masks; block l of the output is the unitary DFT
/// of (mask_l o x), and blocks are laid out mask-major so m = L * n.
/// Instances are immutable and forward/adjoint may be called concurrently.
class MeasurementEnsemble {
 public:
  /// Dense ensemble from explicit measurement vectors a_1..a_m (all of length n).
  static MeasurementEnsemble dense(const std::vector<ComplexSignal>& rows);
  /// Dense ensemble from the matrix whose i-th row is a_i^* (i.e. A itself).
  static MeasurementEnsemble dense_from_matrix(Eigen::MatrixXcd matrix);
  static MeasurementEnsemble dense_gaussian(Eigen::Index n, Eigen::Index m, RngStream& rng);

  static MeasurementEnsemble coded_diffraction(std::vector<ComplexSignal> masks);
  static MeasurementEnsemble coded_diffraction_rademacher(Eigen::Index n, Eigen::Index num_masks,
                                                          RngStream& rng);

  [[nodiscard]] EnsembleKind kind() const { return kind_; }
  [[nodiscard]] Eigen::Index n() const { return n_; }
  [[nodiscard]] Eigen::Index m() const { return m_; }
  [[nodiscard]] Eigen::Index num_masks() const { return static_cast<Eigen::Index>(masks_.size()); }
  [[nodiscard]] const std::vector<ComplexVector>& masks() const { return masks_; }
  /// Only meaningful for dense ensembles.
  [[nodiscard]] const Eigen::MatrixXcd& matrix() const { return matrix_; }

  [[nodiscard]] ComplexSignal forward(const ComplexSignal& x) const;
  [[nodiscard]] ComplexSignal adjoint(const ComplexSignal& z) const;

  // Unchecked-finiteness variants for iterative solvers. Sizes are still checked.
  void apply_forward(const ComplexVector& x, ComplexVector& out) const;
  void apply_adjoint(const ComplexVector& z, ComplexVector& out) const;
  [[nodiscard]] ComplexVector apply_forward(const ComplexVector& x) const;
  [[nodiscard]] ComplexVector apply_adjoint(const ComplexVector& z) const;

 private:
  MeasurementEnsemble() = default;

  EnsembleKind kind_ = EnsembleKind::DenseGaussian;
  Eigen::Index n_ = 0;
  Eigen::Index m_ = 0;
  Eigen::MatrixXcd matrix_;
  std::vector<ComplexVector> masks_;
  std::shared_ptr<const DftPlans> plans_;
};

enum class NoiseKind { None, Uniform, Gaussian };

/// Additive noise on the squared magnitudes.
///
/// Uniform draws from [0, eta_inv]. Gaussian draws Normal(0, sigma^2) and the
/// resulting observation is clipped at zero.
struct NoiseModel {
  NoiseKind kind = NoiseKind::None;
  double eta_inv = 0.0;
  double sigma = 0.0;

  static NoiseModel none() { return {}; }
  static NoiseModel uniform(double eta_inv);
  static NoiseModel gaussian(double sigma);
  /// sigma chosen so that 10 log10(||x||^4 / sigma^2) equals snr_db.
  static NoiseModel gaussian_from_snr(double snr_db, double signal_norm);

  void validate() const;
  /// Scalar parameter as reported in experiment output (eta_inv or sigma).
  [[nodiscard]] double parameter() const;
};

const char* to_string(NoiseKind kind);

struct Observations {
  Eigen::VectorXd b;
  NoiseModel noise;
  std::optional<double> snr_db;

  [[nodiscard]] Eigen::Index size() const { return b.size(); }
};

/// 10 log10(||x||^4 / sigma^2).
double input_snr_db(double signal_norm, double sigma);

Observations observe(const MeasurementEnsemble& ens, const ComplexSignal& xstar,
                     const NoiseModel& noise, RngStream& rng);

/// Power-iteration estimate of the largest singular value of A.
double operator_norm(const MeasurementEnsemble& ens, int iters, RngStream& rng);

}  // namespace phasemax

#pragma once

#include <cstdint>
#include <vector>

#include "phasemax/measurements.hpp"

namespace phasemax {

struct SolverConfig {
  int max_iters = 2000;
  /// Stop once ||x_k+1 - x_k|| / ||x_k+1|| falls to this level (and feasibility holds).
  double tol_rel_change = 1e-9;
  /// Allowed max_i (|a_i^* x|^2 - b_i)_+ at termination.
  double tol_feas = 1e-9;
  /// Fraction of the stability bound 1/||A|| used for both step sizes.
  double step_scale = 0.95;
  /// tau / sigma = ratio^2 with tau * sigma * ||A||^2 = step_scale^2. Zero selects
  /// sqrt(||sqrt(b)|| / ||a0||), the ratio of the expected primal and dual solution scales.
  double primal_dual_ratio = 0.0;
  int norm_est_iters = 30;
  /// Seed of the power iteration that estimates ||A||.
  std::uint64_t norm_seed = 0x5eed;

  void validate() const;
};

struct Solution {
  ComplexSignal xhat;
  int iters_used = 0;
  /// <a0, xhat>
  double objective = 0.0;
  double feas_residual = 0.0;
  bool converged = false;
  /// Forward plus adjoint applications of A, including the norm estimate.
  long operator_applications = 0;
};

/// Projection of z onto the closed disk of radius r.
Complex disk_project(Complex z, double r);

/// max_i (|(Ax)_i|^2 - b_i)_+
double feasibility_residual(const MeasurementEnsemble& ens, const Observations& obs,
                            const ComplexSignal& x);
double feasibility_residual(const ComplexVector& ax, const Eigen::VectorXd& b);

/// Maximize <a0, x> subject to |a_i^* x|^2 <= b_i.
///
/// Uses primal-dual splitting on  min_x -<a0, x> + g(Ax),  where g is the
/// indicator of the product of disks of radius sqrt(b_i). Each iteration costs
/// one forward and one adjoint application.
Solution solve_phasemax(const MeasurementEnsemble& ens, const Observations& obs,
                        const ComplexSignal& a0, const SolverConfig& cfg = {});

enum class OracleMode { VertexEnumeration, GridSearch };

/// Brute-force maximizer of <a0, x> over {x in R^n : |row_i . x| <= sqrt(b_i)}, n <= 3.
///
/// Vertex enumeration intersects every n-subset of the bounding hyperplanes and
/// keeps the best feasible point; if no feasible vertex exists it falls back
/// to grid search. Grid search scans `grid_points` per axis over a box that
/// provably contains the polytope and then refines around the best point.
/// Throws on infeasible or unbounded programs.
Eigen::VectorXd oracle_solve_small(const std::vector<Eigen::VectorXd>& rows,
                                   const Eigen::VectorXd& b, const Eigen::VectorXd& a0,
                                   int grid_points, OracleMode mode = OracleMode::VertexEnumeration);

}  // namespace phasemax

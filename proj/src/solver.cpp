#include "phasemax/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace phasemax {

void SolverConfig::validate() const {
  if (max_iters < 1)
    throw std::invalid_argument("SolverConfig: max_iters must be at least 1");
  if (!(tol_rel_change > 0.0) || !(tol_feas > 0.0))
    throw std::invalid_argument("SolverConfig: tolerances must be positive");
  if (!(step_scale > 0.0 && step_scale < 1.0))
    throw std::invalid_argument("SolverConfig: step_scale must lie in (0, 1)");
  if (!(primal_dual_ratio >= 0.0) || !std::isfinite(primal_dual_ratio))
    throw std::invalid_argument("SolverConfig: primal_dual_ratio must be non-negative");
  if (norm_est_iters < 1)
    throw std::invalid_argument("SolverConfig: norm_est_iters must be at least 1");
}

Complex disk_project(Complex z, double r) {
  if (r < 0.0)
    throw std::invalid_argument("disk_project: negative radius");
  const double mag = std::abs(z);
  if (mag <= r)
    return z;
  return z * (r / mag);
}

double feasibility_residual(const ComplexVector& ax, const Eigen::VectorXd& b) {
  if (ax.size() != b.size())
    throw std::invalid_argument("feasibility_residual: size mismatch");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < b.size(); ++i)
    worst = std::max(worst, std::norm(ax[i]) - b[i]);
  return worst;
}

double feasibility_residual(const MeasurementEnsemble& ens, const Observations& obs,
                            const ComplexSignal& x) {
  if (obs.size() != ens.m())
    throw std::invalid_argument("feasibility_residual: observation count does not match ensemble");
  return feasibility_residual(ens.apply_forward(x.values()), obs.b);
}

Solution solve_phasemax(const MeasurementEnsemble& ens, const Observations& obs,
                        const ComplexSignal& a0_signal, const SolverConfig& cfg) {
  cfg.validate();
  if (a0_signal.size() != ens.n())
    throw std::invalid_argument("solve_phasemax: anchor length does not match ensemble");
  if (obs.size() != ens.m())
    throw std::invalid_argument("solve_phasemax: observation count does not match ensemble");
  if (obs.size() == 0)
    throw std::invalid_argument("solve_phasemax: no constraints, the program is unbounded");
  if (a0_signal.norm() == 0.0)
    throw std::invalid_argument("solve_phasemax: anchor must be nonzero");
  for (Eigen::Index i = 0; i < obs.b.size(); ++i) {
    if (!std::isfinite(obs.b[i]) || obs.b[i] < 0.0)
      throw std::invalid_argument("solve_phasemax: observations must be finite and non-negative");
  }

  const Eigen::VectorXd radii = obs.b.cwiseSqrt();
  const ComplexVector& a0 = a0_signal.values();
  const Eigen::Index n = ens.n();
  const Eigen::Index m = ens.m();

  RngStream norm_rng(cfg.norm_seed, 0);
  const double op_norm = operator_norm(ens, cfg.norm_est_iters, norm_rng);
  if (!(op_norm > 0.0))
    throw std::invalid_argument("solve_phasemax: measurement operator is zero");
  double ratio = cfg.primal_dual_ratio;
  if (ratio == 0.0) {
    const double data_scale = radii.norm();
    ratio = data_scale > 0.0 ? std::sqrt(data_scale / a0.norm()) : 1.0;
  }
  const double tau = cfg.step_scale * ratio / op_norm;
  const double sigma = cfg.step_scale / (ratio * op_norm);

  ComplexVector x = ComplexVector::Zero(n);
  ComplexVector x_new(n);
  ComplexVector y = ComplexVector::Zero(m);
  ComplexVector ax = ComplexVector::Zero(m);      // A x
  ComplexVector ax_bar = ComplexVector::Zero(m);  // A (2 x_new - x), kept by linearity
  ComplexVector ax_new(m);
  ComplexVector aty(n);

  Solution sol{ComplexSignal::zeros(n)};
  sol.operator_applications = 2L * cfg.norm_est_iters;
  int k = 0;
  double feas = 0.0;
  bool converged = false;
  while (k < cfg.max_iters) {
    ++k;
    // Dual step: prox of sigma g^* via Moreau, y - sigma P(y / sigma).
    y += sigma * ax_bar;
    for (Eigen::Index i = 0; i < m; ++i)
      y[i] -= sigma * disk_project(y[i] / sigma, radii[i]);

    ens.apply_adjoint(y, aty);
    x_new = x + tau * (a0 - aty);
    ens.apply_forward(x_new, ax_new);
    sol.operator_applications += 2;

    const double step = (x_new - x).norm();
    const double scale = x_new.norm();
    ax_bar = 2.0 * ax_new - ax;
    x.swap(x_new);
    ax.swap(ax_new);

    feas = feasibility_residual(ax, obs.b);
    if (scale > 0.0 && step <= cfg.tol_rel_change * scale && feas <= cfg.tol_feas) {
      converged = true;
      break;
    }
  }

  if (!all_finite(x))
    throw std::runtime_error("solve_phasemax: iterates diverged");
  sol.xhat = ComplexSignal(x);
  sol.iters_used = k;
  sol.objective = real_inner(a0, x);
  sol.feas_residual = feas;
  sol.converged = converged;
  return sol;
}

namespace {

bool feasible_point(const std::vector<Eigen::VectorXd>& rows, const Eigen::VectorXd& radii,
                    const Eigen::VectorXd& x, double slack) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (std::abs(rows[i].dot(x)) > radii[static_cast<Eigen::Index>(i)] + slack)
      return false;
  }
  return true;
}

// Visits every n-subset of [0, m) in lexicographic order.
template <typename Visit>
void for_each_subset(int m, int n, Visit&& visit) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    visit(idx);
    int pos = n - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == m - n + pos)
      --pos;
    if (pos < 0)
      return;
    ++idx[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < n; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

std::optional<Eigen::VectorXd> best_vertex(const std::vector<Eigen::VectorXd>& rows,
                                           const Eigen::VectorXd& radii,
                                           const Eigen::VectorXd& a0) {
  const int n = static_cast<int>(a0.size());
  const int m = static_cast<int>(rows.size());
  if (m < n)
    return std::nullopt;
  std::optional<Eigen::VectorXd> best;
  double best_value = -std::numeric_limits<double>::infinity();
  const double scale = 1.0 + radii.maxCoeff();
  for_each_subset(m, n, [&](const std::vector<int>& idx) {
    Eigen::MatrixXd system(n, n);
    for (int r = 0; r < n; ++r)
      system.row(r) = rows[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])].transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (!lu.isInvertible())
      return;
    // Each active constraint may sit on either face of its slab.
    for (int signs = 0; signs < (1 << n); ++signs) {
      Eigen::VectorXd rhs(n);
      for (int r = 0; r < n; ++r) {
        const double rad = radii[idx[static_cast<std::size_t>(r)]];
        rhs[r] = ((signs >> r) & 1) ? -rad : rad;
      }
      const Eigen::VectorXd vertex = lu.solve(rhs);
      if (!feasible_point(rows, radii, vertex, 1e-10 * scale))
        continue;
      const double value = a0.dot(vertex);
      if (value > best_value) {
        best_value = value;
        best = vertex;
      }
    }
  });
  return best;
}

Eigen::VectorXd grid_search(const std::vector<Eigen::VectorXd>& rows, const Eigen::VectorXd& radii,
                            const Eigen::VectorXd& a0, int grid_points) {
  const Eigen::Index n = a0.size();
  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t i = 0; i < rows.size(); ++i)
    a.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  if (a.rows() < n)
    throw std::invalid_argument("oracle_solve_small: polytope is unbounded");
  // ||x|| <= ||Ax|| / sigma_min(A) <= ||radii|| / sigma_min(A) on the polytope.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const double smin = svd.singularValues().minCoeff();
  if (!(smin > 1e-12 * std::max(1.0, svd.singularValues().maxCoeff())))
    throw std::invalid_argument("oracle_solve_small: polytope is unbounded");
  double half_width = radii.norm() / smin;

  Eigen::VectorXd center = Eigen::VectorXd::Zero(n);
  std::optional<Eigen::VectorXd> best;
  // Shrink the window gradually: in a thin wedge around the optimal vertex the
  // best grid point can sit many spacings away from the vertex.
  const double floor_width = 1e-13 * (1.0 + half_width);
  constexpr int max_passes = 40;
  for (int pass = 0; pass < max_passes && half_width > floor_width; ++pass) {
    const double spacing = 2.0 * half_width / (grid_points - 1);
    double best_value = -std::numeric_limits<double>::infinity();
    std::optional<Eigen::VectorXd> pass_best;
    // Per-axis tables: objective and row contributions of each grid coordinate.
    const auto g = static_cast<Eigen::Index>(grid_points);
    const auto m = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd coord(g, n);
    for (Eigen::Index d = 0; d < n; ++d)
      for (Eigen::Index k = 0; k < g; ++k)
        coord(k, d) = center[d] - half_width + spacing * static_cast<double>(k);
    Eigen::MatrixXd obj(g, n);
    std::vector<Eigen::MatrixXd> proj(static_cast<std::size_t>(n), Eigen::MatrixXd(m, g));
    for (Eigen::Index d = 0; d < n; ++d) {
      obj.col(d) = a0[d] * coord.col(d);
      for (Eigen::Index i = 0; i < m; ++i)
        proj[static_cast<std::size_t>(d)].row(i) = a(i, d) * coord.col(d).transpose();
    }
    std::vector<Eigen::Index> k(static_cast<std::size_t>(n), 0);
    while (true) {
      double value = 0.0;
      for (Eigen::Index d = 0; d < n; ++d)
        value += obj(k[static_cast<std::size_t>(d)], d);
      if (value > best_value) {
        bool feasible = true;
        for (Eigen::Index i = 0; i < m && feasible; ++i) {
          double dot = 0.0;
          for (Eigen::Index d = 0; d < n; ++d)
            dot += proj[static_cast<std::size_t>(d)](i, k[static_cast<std::size_t>(d)]);
          feasible = std::abs(dot) <= radii[i];
        }
        if (feasible) {
          best_value = value;
          Eigen::VectorXd point(n);
          for (Eigen::Index d = 0; d < n; ++d)
            point[d] = coord(k[static_cast<std::size_t>(d)], d);
          pass_best = point;
        }
      }
      Eigen::Index d = 0;
      while (d < n && ++k[static_cast<std::size_t>(d)] == g)
        k[static_cast<std::size_t>(d++)] = 0;
      if (d == n)
        break;
    }
    if (!pass_best) {
      if (!best)
        throw std::invalid_argument("oracle_solve_small: no feasible grid point");
      break;
    }
    best = pass_best;
    center = *pass_best;
    half_width = std::max(0.25 * half_width, 4.0 * spacing);
  }
  return *best;
}

}  // namespace

Eigen::VectorXd oracle_solve_small(const std::vector<Eigen::VectorXd>& rows,
                                   const Eigen::VectorXd& b, const Eigen::VectorXd& a0,
                                   int grid_points, OracleMode mode) {
  const Eigen::Index n = a0.size();
  if (n < 1 || n > 3)
    throw std::invalid_argument("oracle_solve_small: dimension must be 1, 2 or 3");
  if (rows.empty() || static_cast<Eigen::Index>(rows.size()) != b.size())
    throw std::invalid_argument("oracle_solve_small: need one observation per row");
  if (grid_points < 2)
    throw std::invalid_argument("oracle_solve_small: grid_points must be at least 2");
  for (const auto& row : rows) {
    if (row.size() != n)
      throw std::invalid_argument("oracle_solve_small: row length mismatch");
  }
  if ((b.array() < 0.0).any())
    throw std::invalid_argument("oracle_solve_small: infeasible, negative observation");
  const Eigen::VectorXd radii = b.cwiseSqrt();

  if (mode == OracleMode::VertexEnumeration) {
    // A polytope without any vertex is unbounded (it contains a line), and then
    // the grid search below reports it.
    if (auto vertex = best_vertex(rows, radii, a0))
      return *vertex;
  }
  return grid_search(rows, radii, a0, grid_points);
}

}  // namespace phasemax

#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "phasemax/anchor.hpp"
#include "phasemax/solver.hpp"

using namespace phasemax;

namespace {

struct RealInstance {
  std::vector<Eigen::VectorXd> rows;
  Eigen::VectorXd xstar;
  Eigen::VectorXd b;
};

RealInstance real_instance(int n, int m, RngStream& rng) {
  RealInstance inst;
  inst.xstar = Eigen::VectorXd(n);
  for (int j = 0; j < n; ++j)
    inst.xstar[j] = rng.normal();
  inst.b = Eigen::VectorXd(m);
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd r(n);
    for (int j = 0; j < n; ++j)
      r[j] = rng.normal();
    inst.b[i] = std::pow(r.dot(inst.xstar), 2);
    inst.rows.push_back(r);
  }
  return inst;
}

MeasurementEnsemble as_ensemble(const std::vector<Eigen::VectorXd>& rows) {
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(rows.size()), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    a.row(static_cast<Eigen::Index>(i)) = rows[i].transpose().cast<Complex>();
  return MeasurementEnsemble::dense_from_matrix(a);
}

struct Problem {
  MeasurementEnsemble ens;
  ComplexSignal xstar;
  Observations obs;
};

Problem gaussian_problem(Eigen::Index n, Eigen::Index m, std::uint64_t seed) {
  RngStream rng(seed, 0);
  auto xstar = sample_complex_gaussian(n, rng);
  auto ens = MeasurementEnsemble::dense_gaussian(n, m, rng);
  auto obs = observe(ens, xstar, NoiseModel::none(), rng);
  return {std::move(ens), std::move(xstar), std::move(obs)};
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("disk projection") {
  CHECK(disk_project({0.3, -0.4}, 1.0) == Complex(0.3, -0.4));
  CHECK(disk_project({0.6, 0.8}, 1.0) == Complex(0.6, 0.8));
  CHECK(std::abs(disk_project(std::polar(4.0, 0.9), 2.0) - std::polar(2.0, 0.9)) < 1e-15);
  CHECK(disk_project({5.0, 5.0}, 0.0) == Complex(0.0, 0.0));
  CHECK_THROWS_AS(disk_project({1.0, 0.0}, -1.0), std::invalid_argument);

  RngStream rng(1, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Complex z{rng.normal(3.0), rng.normal(3.0)};
    const double r = rng.uniform(0.0, 5.0);
    const Complex p = disk_project(z, r);
    CHECK(std::abs(std::abs(p) - std::min(std::abs(z), r)) <= 1e-14 * (1.0 + std::abs(z)));
    CHECK(std::abs(std::remainder(std::arg(p) - std::arg(z), 2.0 * std::numbers::pi)) <= 1e-14);
  }
}

TEST_CASE("feasibility residual") {
  auto p = gaussian_problem(6, 30, 2);
  CHECK(feasibility_residual(p.ens, p.obs, p.xstar) == 0.0);
  CHECK(feasibility_residual(p.ens, p.obs, p.xstar.scaled(2.0)) > 0.0);

  RngStream rng(2, 1);
  RngStream noise_rng(2, 2);
  const auto noisy = observe(p.ens, p.xstar, NoiseModel::uniform(0.1), noise_rng);
  CHECK(feasibility_residual(p.ens, noisy, p.xstar) == 0.0);

  const auto x = sample_complex_gaussian(6, rng);
  double loop = 0.0;
  for (Eigen::Index i = 0; i < p.ens.m(); ++i) {
    Complex ai_x = 0.0;
    for (Eigen::Index j = 0; j < 6; ++j)
      ai_x += p.ens.matrix()(i, j) * x[j];
    loop = std::max(loop, std::norm(ai_x) - p.obs.b[i]);
  }
  CHECK(feasibility_residual(p.ens, p.obs, x) == doctest::Approx(loop).epsilon(1e-12));
}

TEST_CASE("solver input validation") {
  auto p = gaussian_problem(4, 12, 3);
  CHECK_THROWS_AS(solve_phasemax(p.ens, p.obs, ComplexSignal::zeros(4)), std::invalid_argument);
  Observations bad = p.obs;
  bad.b[3] = -1.0;
  CHECK_THROWS_AS(solve_phasemax(p.ens, bad, p.xstar), std::invalid_argument);
  Observations empty;
  CHECK_THROWS_AS(solve_phasemax(p.ens, empty, p.xstar), std::invalid_argument);
  SolverConfig cfg;
  cfg.step_scale = 1.0;
  CHECK_THROWS_AS(solve_phasemax(p.ens, p.obs, p.xstar, cfg), std::invalid_argument);
}

TEST_CASE("oracle on hand-solvable programs") {
  Eigen::VectorXd e1(2), e2(2), a0(2);
  e1 << 1.0, 0.0;
  e2 << 0.0, 1.0;
  a0 << 1.0, 1.0;
  Eigen::VectorXd b(2);
  b << 1.0, 4.0;
  for (auto mode : {OracleMode::VertexEnumeration, OracleMode::GridSearch}) {
    const auto x = oracle_solve_small({e1, e2}, b, a0, 2001, mode);
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-3));
  }

  b << 1.0, 1.0;
  const auto corner = oracle_solve_small({e1, e2}, b, a0 / std::sqrt(2.0), 101);
  CHECK(corner[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(corner[1] == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::VectorXd two(1), nine(1), plus(1), minus(1);
  two << 2.0;
  nine << 9.0;
  plus << 1.0;
  minus << -1.0;
  CHECK(oracle_solve_small({plus}, plus, plus, 101)[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(oracle_solve_small({two}, nine, plus, 101)[0] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(oracle_solve_small({two}, nine, minus, 101)[0] == doctest::Approx(-1.5).epsilon(1e-12));

  Eigen::VectorXd one(1);
  one << 1.0;
  CHECK_THROWS_AS(oracle_solve_small({e1}, one, a0, 101), std::invalid_argument);
  CHECK_THROWS_AS(oracle_solve_small({Eigen::VectorXd::Ones(4)}, one, Eigen::VectorXd::Ones(4), 11),
                  std::invalid_argument);
}

TEST_CASE("vertex enumeration agrees with grid search in objective") {
  RngStream rng(4, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = real_instance(2, 8, rng);
    const auto v = oracle_solve_small(inst.rows, inst.b, inst.xstar, 2001, OracleMode::VertexEnumeration);
    const auto g = oracle_solve_small(inst.rows, inst.b, inst.xstar, 2001, OracleMode::GridSearch);
    const double best = inst.xstar.dot(v);
    CHECK(std::abs(best - inst.xstar.dot(g)) <= 1e-3 * std::abs(best));
    CHECK(inst.xstar.dot(g) <= best + 1e-12 * std::abs(best));
  }
}

TEST_CASE("solver matches the brute-force oracle on small real instances") {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RngStream rng(500 + seed, 0);
    const auto inst = real_instance(2, 15, rng);
    const auto ens = as_ensemble(inst.rows);
    Observations obs;
    obs.b = inst.b;
    const ComplexSignal a0(inst.xstar.cast<Complex>());
    const auto sol = solve_phasemax(ens, obs, a0);
    const auto oracle = oracle_solve_small(inst.rows, inst.b, inst.xstar, 2001);
    worst = std::max(worst, phase_align_error(sol.xhat, ComplexSignal(oracle.cast<Complex>())));
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("solution properties on a noiseless Gaussian instance") {
  auto p = gaussian_problem(16, 160, 5);
  RngStream rng(5, 1);
  const auto a0 = spectral_anchor(p.ens, p.obs, 50, rng).a0;
  SolverConfig cfg;
  const auto sol = solve_phasemax(p.ens, p.obs, a0, cfg);
  REQUIRE(sol.converged);
  CHECK(sol.feas_residual >= 0.0);
  CHECK(sol.feas_residual <= cfg.tol_feas);
  CHECK(sol.objective == doctest::Approx(real_inner(a0, sol.xhat)).epsilon(1e-14));
  // The optimum dominates every feasible point, including every rotation of xstar.
  const double best_feasible = std::abs(a0.values().dot(p.xstar.values()));
  CHECK(sol.objective >= best_feasible - cfg.tol_feas * static_cast<double>(p.ens.m()) -
                             cfg.tol_rel_change * a0.norm());
  const Complex a0x = a0.values().dot(sol.xhat.values());
  CHECK(std::abs(a0x.imag()) <= 1e-6 * a0.norm() * sol.xhat.norm());
  CHECK(phase_align_error(sol.xhat, p.xstar) <= 1e-6);
  CHECK(sol.operator_applications == 2L * (cfg.norm_est_iters + sol.iters_used));

  const auto again = solve_phasemax(p.ens, p.obs, a0, cfg);
  CHECK(again.xhat.values() == sol.xhat.values());

  const Complex w = std::polar(1.0, 2.2);
  const auto rotated = solve_phasemax(p.ens, p.obs, a0.scaled(w), cfg);
  CHECK((rotated.xhat.values() - w * sol.xhat.values()).norm() <= 1e-6 * sol.xhat.norm());
}

TEST_CASE("recovery at M = 10N for most seeds") {
  int successes = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto p = gaussian_problem(128, 1280, 900 + seed);
    RngStream rng(900 + seed, 1);
    const auto a0 = spectral_anchor(p.ens, p.obs, 50, rng).a0;
    if (phase_align_error(solve_phasemax(p.ens, p.obs, a0).xhat, p.xstar) <= 1e-3)
      ++successes;
  }
  CHECK(successes >= 18);
}

}

#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "phasemax/experiments.hpp"
#include "phasemax/verify.hpp"

namespace ex = phasemax::experiments;

namespace {

struct CommonOptions {
  int max_iters = 2000;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  bool no_timing = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--max-iters", opts.max_iters, "Solver iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", opts.tol, "Relative-change and feasibility tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opts.seed, "Base random seed");
  cmd->add_flag("--no-timing", opts.no_timing, "Write runtimes as 0 for byte-identical reruns");
}

phasemax::SolverConfig solver_config(const CommonOptions& opts) {
  phasemax::SolverConfig cfg;
  cfg.max_iters = opts.max_iters;
  cfg.tol_rel_change = opts.tol;
  cfg.tol_feas = opts.tol;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anchored convex phase retrieval: experiments and theory checks"};
  app.require_subcommand(1);

  CommonOptions sweep_opts;
  std::string ratios = "2:12:2";
  std::string noise = "none";
  std::string csv_path = "sweep.csv";
  ex::SweepConfig sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Dense Gaussian phase-transition sweep, written as CSV");
  sweep_cmd->add_option("--n", sweep.n, "Signal length")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--ratios", ratios, "M/N values: comma list or lo:hi:step");
  sweep_cmd->add_option("--trials", sweep.trials, "Trials per ratio")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--noise", noise, "none | uniform:<eta_inv> | gaussian:<snr_db>");
  sweep_cmd->add_option("--anchor-iters", sweep.anchor_iters, "Power iterations for the anchor")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--threads", sweep.threads, "Worker threads (0 = all cores)");
  sweep_cmd->add_option("--out", csv_path, "CSV output path");
  add_common(sweep_cmd, sweep_opts);

  CommonOptions cdp_opts;
  cdp_opts.max_iters = ex::kCdpDefaultMaxIters;
  ex::CdpConfig cdp;
  std::string image_path;
  int synthetic = 0;
  std::string out_prefix = "cdp_recovered";
  std::string report_path;
  auto* cdp_cmd = app.add_subcommand("cdp", "Coded-diffraction image recovery demo");
  auto* image_opt = cdp_cmd->add_option("--image", image_path, "Input 8-bit binary PGM (P5)");
  auto* synth_opt = cdp_cmd->add_option("--synthetic", synthetic,
                                        "Use a generated SIZE x SIZE gradient instead of --image")
                        ->check(CLI::PositiveNumber);
  image_opt->excludes(synth_opt);
  cdp_cmd->add_option("--masks", cdp.num_masks, "Number of coded diffraction patterns L")
      ->check(CLI::PositiveNumber);
  cdp_cmd->add_option("--anchor-iters", cdp.anchor_iters, "Power iterations for the anchor")
      ->check(CLI::PositiveNumber);
  cdp_cmd->add_option("--out-prefix", out_prefix, "Writes <prefix>.pgm and <prefix>.f64");
  cdp_cmd->add_option("--report", report_path, "Also write the report to this file");
  add_common(cdp_cmd, cdp_opts);

  std::string suite = "all";
  std::uint64_t verify_seed = 1;
  auto* verify_cmd = app.add_subcommand("verify", "Run the theory verification suites");
  verify_cmd->add_option("suite", suite, "closed-forms | geometry | vc | all");
  verify_cmd->add_option("--seed", verify_seed, "Monte Carlo seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep_cmd) {
      sweep.ratios = ex::parse_ratios(ratios);
      sweep.noise = ex::NoiseSpec::parse(noise);
      sweep.solver = solver_config(sweep_opts);
      sweep.seed = sweep_opts.seed;
      sweep.record_runtime = !sweep_opts.no_timing;
      const auto records = ex::run_sweep(sweep);
      ex::write_csv(csv_path, records);
      ex::print_summary(std::cout, ex::summarize(records));
      std::cout << "wrote " << records.size() << " rows to " << csv_path << '\n';
      return 0;
    }
    if (*cdp_cmd) {
      if (image_path.empty() && synthetic == 0)
        throw std::invalid_argument("cdp needs --image or --synthetic");
      cdp.solver = solver_config(cdp_opts);
      cdp.seed = cdp_opts.seed;
      cdp.record_runtime = !cdp_opts.no_timing;
      const auto report = synthetic > 0
                              ? ex::run_cdp_demo(phasemax::synthetic_gradient(synthetic, synthetic),
                                                 cdp, out_prefix)
                              : ex::run_cdp_demo(std::filesystem::path(image_path), cdp, out_prefix);
      ex::write_cdp_report(std::cout, report);
      if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out)
          throw std::runtime_error("cannot write report to " + report_path);
        ex::write_cdp_report(out, report);
      }
      return 0;
    }
    if (*verify_cmd) {
      const auto report = phasemax::verify::run_verify(phasemax::verify::parse_suite(suite), verify_seed);
      phasemax::verify::print_report(std::cout, report);
      return report.all_passed() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

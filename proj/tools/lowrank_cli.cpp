// Command-line front end: problem generation, single solves, completion grids and inpainting runs.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lowrank/completion.hpp"
#include "lowrank/inpainting.hpp"
#include "lowrank/pgm.hpp"
#include "lowrank/solvers.hpp"

namespace {

using namespace lowrank;

struct GenArgs {
  Index m = 100;
  Index n = 100;
  Index rank = 5;
  double sr = 0.4;
  std::uint64_t seed = 1;
  std::string out;
  std::string truth_out;
};

struct SolveArgs {
  std::string problem;
  std::string solver = "tliht";
  double alpha = 0.1;
  Index rank = 0;
  double eta = 1e-3;
  double tol = 1e-8;
  int max_iter = 20000;
  std::optional<double> lambda;
  std::optional<double> epsilon;
  std::optional<double> tau;
  std::optional<double> delta;
  std::optional<double> mu;
  std::string trace_out;
  std::string out;
  std::string truth;
};

struct BenchArgs {
  std::string grid;
  int seeds = 3;
  std::uint64_t master_seed = 1;
  double eta = 1e-3;
  double tol = 1e-8;
  int max_iter = 20000;
  bool no_timing = false;
  std::string out;
};

struct InpaintArgs {
  std::string image;
  bool synthetic = false;
  std::uint64_t image_seed = 7;
  Index rank = 30;
  double sr = 0.4;
  std::uint64_t seed = 1;
  std::vector<std::string> solvers{"tliht", "svt", "svp"};
  double alpha = 0.1;
  std::string out_dir;
};

int run_gen(const GenArgs& a) {
  const CompletionProblem p = make_completion_problem(a.m, a.n, a.rank, a.sr, a.seed);
  save_problem(a.out, p);
  if (!a.truth_out.empty()) save_matrix(a.truth_out, *p.ground_truth);
  std::cout << "m=" << a.m << " n=" << a.n << " r=" << a.rank << " samples=" << p.mask.measurements()
            << " sr=" << p.sampling_ratio() << " fr=" << p.freedom_ratio() << '\n';
  return 0;
}

int run_solve(const SolveArgs& a) {
  const CompletionProblem p = load_problem(a.problem);
  const LinearMap map(p.mask);
  const SolverKind kind = parse_solver_kind(a.solver);

  SolveResult result;
  switch (kind) {
    case SolverKind::tliht: {
      SolverConfig cfg;
      cfg.alpha = a.alpha;
      cfg.target_rank = a.rank;
      cfg.eta = a.eta;
      cfg.tol = a.tol;
      cfg.max_iter = a.max_iter;
      cfg.mu = a.mu;
      if (a.lambda) {
        cfg.lambda_policy = ParameterPolicy::fixed;
        cfg.lambda = *a.lambda;
      }
      if (a.epsilon) {
        cfg.epsilon_policy = ParameterPolicy::fixed;
        cfg.epsilon = *a.epsilon;
      }
      result = tliht_solve(map, p.b, cfg);
      break;
    }
    case SolverKind::svt: {
      SvtOptions opt = SvtOptions::defaults_for(p.rows(), p.cols(), p.sampling_ratio());
      if (a.tau) opt.tau = *a.tau;
      if (a.delta) opt.delta = *a.delta;
      opt.tol = a.tol;
      opt.max_iter = a.max_iter;
      std::cout << "svt tau=" << opt.tau << " delta=" << opt.delta << '\n';
      result = svt_solve(map, p.b, opt);
      break;
    }
    case SolverKind::svp: {
      SvpOptions opt;
      opt.rank = a.rank;
      opt.mu = a.mu ? *a.mu : SvpOptions::default_step(p.sampling_ratio());
      opt.tol = a.tol;
      opt.max_iter = a.max_iter;
      std::cout << "svp mu=" << opt.mu << '\n';
      result = svp_solve(map, p.b, opt);
      break;
    }
  }

  std::cout << "solver=" << a.solver << " iterations=" << result.iterations
            << " converged=" << (result.converged ? 1 : 0) << " diverged=" << (result.diverged ? 1 : 0);
  if (!result.trace.empty()) std::cout << " residual=" << result.trace.back().residual;
  if (!a.truth.empty()) std::cout << " re=" << relative_error(result.solution, load_matrix(a.truth));
  std::cout << '\n';

  if (!a.trace_out.empty()) {
    std::ofstream out(a.trace_out);
    if (!out) throw std::runtime_error("cannot open " + a.trace_out);
    write_trace_csv(out, result.trace);
  }
  if (!a.out.empty()) save_matrix(a.out, result.solution);
  return result.diverged ? 2 : 0;
}

int run_bench(const BenchArgs& a) {
  std::ifstream grid(a.grid);
  if (!grid) throw std::runtime_error("cannot open " + a.grid);
  GridOptions opt;
  opt.seeds = a.seeds;
  opt.master_seed = a.master_seed;
  opt.eta = a.eta;
  opt.tol = a.tol;
  opt.max_iter = a.max_iter;
  const auto rows = run_completion_grid(parse_grid(grid), opt);

  std::ofstream out(a.out);
  if (!out) throw std::runtime_error("cannot open " + a.out);
  write_grid_csv(out, rows, !a.no_timing);
  write_grid_csv(std::cout, rows, !a.no_timing);
  for (const auto& row : rows) {
    if (!row.error.empty()) std::cerr << "n=" << row.cell.n << " r=" << row.cell.r << ": " << row.error << '\n';
  }
  return 0;
}

int run_inpaint(const InpaintArgs& a) {
  if (a.image.empty() == !a.synthetic) throw CLI::ValidationError("inpaint", "give exactly one of --image or --synthetic");
  const Matrix image = a.synthetic ? synthetic_image(a.image_seed) : load_pgm(a.image);

  InpaintOptions opt;
  opt.rank = a.rank;
  opt.sr = a.sr;
  opt.seed = a.seed;
  opt.alpha = a.alpha;
  opt.solvers.clear();
  for (const auto& name : a.solvers) opt.solvers.push_back(parse_solver_kind(name));
  if (!a.out_dir.empty()) opt.out_dir = a.out_dir;

  const auto reports = inpaint_experiment(image, opt);
  std::cout << "solver,re,iters,time_s,converged,config\n";
  for (const auto& r : reports) {
    std::cout << r.solver << ',' << std::scientific << std::setprecision(3) << r.relative_error << ','
              << std::defaultfloat << r.iterations << ',' << std::fixed << std::setprecision(2) << r.wall_time_seconds
              << ',' << (r.converged ? 1 : 0) << ",\"" << r.config << "\"" << std::defaultfloat << '\n';
    if (!r.error.empty()) std::cerr << r.solver << ": " << r.error << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank matrix completion with TL iterative half thresholding"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a planted low-rank completion problem");
  gen_cmd->add_option("--m", gen.m, "Rows")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--n", gen.n, "Columns")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--rank", gen.rank, "Rank of the planted matrix")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--sr", gen.sr, "Sampling ratio in (0, 1]");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--out", gen.out, "Problem file to write")->required();
  gen_cmd->add_option("--truth-out", gen.truth_out, "Also write the planted matrix");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a completion problem file");
  solve_cmd->add_option("--problem", solve.problem, "Problem file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--solver", solve.solver, "tliht | svt | svp")
      ->check(CLI::IsMember({"tliht", "svt", "svp"}));
  solve_cmd->add_option("--alpha", solve.alpha, "TL penalty alpha in [0, 1)");
  solve_cmd->add_option("--rank", solve.rank, "Target rank (adaptive TLIHT, SVP)");
  solve_cmd->add_option("--eta", solve.eta, "Step margin: mu = (1 - eta) / ||A||^2");
  solve_cmd->add_option("--tol", solve.tol, "Stopping tolerance");
  solve_cmd->add_option("--max-iter", solve.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--lambda", solve.lambda, "Fixed lambda (TLIHT) instead of the adaptive rule");
  solve_cmd->add_option("--epsilon", solve.epsilon, "Fixed epsilon (TLIHT) instead of the adaptive rule");
  solve_cmd->add_option("--mu", solve.mu, "Explicit step size (TLIHT, SVP)");
  solve_cmd->add_option("--tau", solve.tau, "SVT shrinkage level");
  solve_cmd->add_option("--delta", solve.delta, "SVT dual step");
  solve_cmd->add_option("--trace-out", solve.trace_out, "Write the iteration trace as CSV");
  solve_cmd->add_option("--out", solve.out, "Write the recovered matrix");
  solve_cmd->add_option("--truth", solve.truth, "Ground-truth matrix for the relative error");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a completion grid");
  bench_cmd->add_option("--grid", bench.grid, "Grid file, one \"n r sr alpha\" cell per line")
      ->required()
      ->check(CLI::ExistingFile);
  bench_cmd->add_option("--seeds", bench.seeds, "Replicates per cell")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--master-seed", bench.master_seed, "Master seed");
  bench_cmd->add_option("--eta", bench.eta, "Step margin");
  bench_cmd->add_option("--tol", bench.tol, "Stopping tolerance");
  bench_cmd->add_option("--max-iter", bench.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--no-timing", bench.no_timing, "Write time_s as 0 for reproducible output");
  bench_cmd->add_option("--out", bench.out, "CSV output")->required();

  InpaintArgs inpaint;
  auto* inpaint_cmd = app.add_subcommand("inpaint", "Low-rank image inpainting experiment");
  inpaint_cmd->add_option("--image", inpaint.image, "8-bit binary PGM")->check(CLI::ExistingFile);
  inpaint_cmd->add_flag("--synthetic", inpaint.synthetic, "Use the built-in synthetic 256x256 image");
  inpaint_cmd->add_option("--image-seed", inpaint.image_seed, "Seed of the synthetic image");
  inpaint_cmd->add_option("--rank", inpaint.rank, "Rank of the reference image")->check(CLI::PositiveNumber);
  inpaint_cmd->add_option("--sr", inpaint.sr, "Sampling ratio in (0, 1]");
  inpaint_cmd->add_option("--seed", inpaint.seed, "Mask seed");
  inpaint_cmd->add_option("--solvers", inpaint.solvers, "Subset of tliht svt svp")->delimiter(',');
  inpaint_cmd->add_option("--alpha", inpaint.alpha, "TL penalty alpha");
  inpaint_cmd->add_option("--out-dir", inpaint.out_dir, "Directory for reference and recovered images");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*solve_cmd) return run_solve(solve);
    if (*bench_cmd) return run_bench(bench);
    if (*inpaint_cmd) return run_inpaint(inpaint);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

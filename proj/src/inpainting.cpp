#include "lowrank/inpainting.hpp"

#include <chrono>
#include <filesystem>
#include <sstream>

#include "lowrank/completion.hpp"
#include "lowrank/errors.hpp"
#include "lowrank/pgm.hpp"

namespace lowrank {

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::tliht:
      return "tliht";
    case SolverKind::svt:
      return "svt";
    case SolverKind::svp:
      return "svp";
  }
  return "unknown";
}

SolverKind parse_solver_kind(const std::string& name) {
  if (name == "tliht") return SolverKind::tliht;
  if (name == "svt") return SolverKind::svt;
  if (name == "svp") return SolverKind::svp;
  throw InvalidInput("unknown solver \"" + name + "\" (expected tliht, svt or svp)");
}

std::vector<RecoveryReport> inpaint_experiment(const Matrix& image, const InpaintOptions& opt) {
  const Matrix reference = truncate_rank(image, opt.rank);
  const SamplingMask mask = sample_mask(image.rows(), image.cols(), opt.sr, opt.seed);
  const LinearMap map(mask);
  const Measurement b = map.apply(reference);

  namespace fs = std::filesystem;
  if (opt.out_dir) {
    fs::create_directories(*opt.out_dir);
    save_pgm(reference, (fs::path(*opt.out_dir) / "reference.pgm").string());
    save_pgm(map.adjoint_apply(b), (fs::path(*opt.out_dir) / "observed.pgm").string());
  }

  std::vector<RecoveryReport> reports;
  for (SolverKind kind : opt.solvers) {
    RecoveryReport report;
    report.solver = to_string(kind);
    std::ostringstream config;
    try {
      const auto start = std::chrono::steady_clock::now();
      SolveResult result;
      switch (kind) {
        case SolverKind::tliht: {
          SolverConfig cfg;
          cfg.alpha = opt.alpha;
          cfg.target_rank = opt.rank;
          cfg.eta = opt.eta;
          cfg.tol = opt.tol;
          cfg.max_iter = opt.max_iter;
          config << "alpha=" << cfg.alpha << " rank=" << cfg.target_rank << " eta=" << cfg.eta << " tol=" << cfg.tol
                 << " max_iter=" << cfg.max_iter;
          result = tliht_solve(map, b, cfg);
          break;
        }
        case SolverKind::svt: {
          SvtOptions svt = SvtOptions::defaults_for(image.rows(), image.cols(), opt.sr);
          svt.tol = opt.svt_tol;
          svt.max_iter = opt.svt_max_iter;
          config << "tau=" << svt.tau << " delta=" << svt.delta << " tol=" << svt.tol << " max_iter=" << svt.max_iter;
          result = svt_solve(map, b, svt);
          break;
        }
        case SolverKind::svp: {
          SvpOptions svp;
          svp.rank = opt.rank;
          svp.mu = SvpOptions::default_step(opt.sr);
          svp.tol = opt.tol;
          svp.max_iter = opt.svp_max_iter;
          config << "rank=" << svp.rank << " mu=" << svp.mu << " tol=" << svp.tol << " max_iter=" << svp.max_iter;
          result = svp_solve(map, b, svp);
          break;
        }
      }
      report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      report.relative_error = relative_error(result.solution, reference);
      report.iterations = result.iterations;
      report.converged = result.converged;
      if (opt.out_dir) save_pgm(result.solution, (fs::path(*opt.out_dir) / (report.solver + ".pgm")).string());
    } catch (const std::exception& e) {
      report.error = e.what();
      report.relative_error = std::numeric_limits<double>::infinity();
    }
    report.config = config.str();
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace lowrank

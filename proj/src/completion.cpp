#include "lowrank/completion.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "lowrank/errors.hpp"

namespace lowrank {
namespace {

constexpr std::uint64_t kMatrixStream = 0x6d61747269780000ULL;
constexpr std::uint64_t kMaskStream = 0x6d61736b00000000ULL;

Matrix gaussian(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = normal(rng);
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::uint64_t cell_key(const GridCell& c, int replicate) {
  std::uint64_t h = mix_seed(static_cast<std::uint64_t>(c.n), static_cast<std::uint64_t>(c.r));
  h = mix_seed(h, static_cast<std::uint64_t>(std::llround(c.sr * 1e9)));
  return mix_seed(h, static_cast<std::uint64_t>(replicate));
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Matrix gen_low_rank(Index m, Index n, Index r, std::uint64_t seed) {
  if (m < 1 || n < 1) throw InvalidInput("dimensions must be positive");
  if (r < 1 || r > std::min(m, n)) {
    throw InvalidInput("rank " + std::to_string(r) + " outside [1, " + std::to_string(std::min(m, n)) + "]");
  }
  std::mt19937_64 rng(seed);
  const Matrix left = gaussian(m, r, rng);
  const Matrix right = gaussian(r, n, rng);
  return left * right;
}

SamplingMask sample_mask(Index m, Index n, double sr, std::uint64_t seed) {
  if (m < 1 || n < 1) throw InvalidInput("dimensions must be positive");
  if (!(sr > 0.0 && sr <= 1.0)) throw InvalidInput("sampling ratio must lie in (0, 1], got " + std::to_string(sr));
  const Index total = m * n;
  const auto count = static_cast<Index>(std::llround(sr * static_cast<double>(total)));

  std::vector<Index> all(static_cast<std::size_t>(total));
  std::iota(all.begin(), all.end(), Index{0});
  std::vector<Index> picked;
  picked.reserve(static_cast<std::size_t>(count));
  std::mt19937_64 rng(seed);
  std::sample(all.begin(), all.end(), std::back_inserter(picked), count, rng);

  std::vector<MatrixEntry> omega;
  omega.reserve(picked.size());
  for (Index linear : picked) omega.push_back({linear / n, linear % n});
  return SamplingMask(m, n, std::move(omega));
}

double freedom_ratio(Index s, Index r, Index m, Index n) {
  if (s < 1 || r < 1 || m < 1 || n < 1 || r >= m + n) throw InvalidInput("freedom ratio needs positive s, r < m + n");
  return static_cast<double>(s) / (static_cast<double>(r) * static_cast<double>(m + n - r));
}

double relative_error(const Matrix& x, const Matrix& reference) {
  if (x.rows() != reference.rows() || x.cols() != reference.cols()) {
    throw ShapeError("relative_error operands differ in shape");
  }
  const double denom = reference.norm();
  if (!(denom > 0.0)) throw InvalidInput("relative error against a zero reference");
  return (x - reference).norm() / denom;
}

double CompletionProblem::sampling_ratio() const {
  return static_cast<double>(mask.measurements()) / (static_cast<double>(rows()) * static_cast<double>(cols()));
}

double CompletionProblem::freedom_ratio() const {
  if (r_true < 1) return std::numeric_limits<double>::quiet_NaN();
  return lowrank::freedom_ratio(mask.measurements(), r_true, rows(), cols());
}

CompletionProblem make_completion_problem(Index m, Index n, Index r, double sr, std::uint64_t seed) {
  Matrix truth = gen_low_rank(m, n, r, mix_seed(seed, kMatrixStream));
  SamplingMask mask = sample_mask(m, n, sr, mix_seed(seed, kMaskStream));
  Measurement b = LinearMap(mask).apply(truth);
  return CompletionProblem{std::move(mask), std::move(b), std::move(truth), r};
}

void save_problem(const std::string& path, const CompletionProblem& problem) {
  auto out = open_out(path);
  write_observations(out, problem.mask, problem.b);
}

CompletionProblem load_problem(const std::string& path) {
  auto in = open_in(path);
  Observations obs = read_observations(in);
  return CompletionProblem{std::move(obs.mask), std::move(obs.values), std::nullopt, 0};
}

void save_matrix(const std::string& path, const Matrix& x) {
  auto out = open_out(path);
  out << x.rows() << ' ' << x.cols() << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) out << (j ? " " : "") << x(i, j);
    out << '\n';
  }
}

Matrix load_matrix(const std::string& path) {
  auto in = open_in(path);
  Index rows = 0;
  Index cols = 0;
  if (!(in >> rows >> cols) || rows < 1 || cols < 1) throw ParseError("expected header \"rows cols\"", 1);
  Matrix x(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (!(in >> x(i, j))) throw ParseError("matrix data ends early", static_cast<std::size_t>(i + 2));
    }
  }
  return x;
}

std::vector<GridCell> parse_grid(std::istream& in) {
  std::vector<GridCell> cells;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    GridCell c;
    std::string extra;
    if (!(fields >> c.n >> c.r >> c.sr >> c.alpha) || (fields >> extra)) {
      throw ParseError("expected \"n r sr alpha\"", line_no);
    }
    if (c.n < 2 || c.r < 1 || c.r >= c.n || !(c.sr > 0.0 && c.sr <= 1.0) || !(c.alpha >= 0.0 && c.alpha < 1.0)) {
      throw ParseError("grid cell out of range", line_no);
    }
    cells.push_back(c);
  }
  return cells;
}

std::vector<GridRow> run_completion_grid(const std::vector<GridCell>& cells, const GridOptions& opt) {
  if (opt.seeds < 1) throw InvalidInput("grid needs at least one seed per cell");
  std::vector<GridRow> rows;
  rows.reserve(cells.size());
  for (const GridCell& cell : cells) {
    GridRow row;
    row.cell = cell;
    const auto samples = static_cast<Index>(std::llround(cell.sr * static_cast<double>(cell.n * cell.n)));
    row.fr = samples >= 1 && cell.r >= 1 && cell.r < 2 * cell.n ? freedom_ratio(samples, cell.r, cell.n, cell.n)
                                                                  : std::numeric_limits<double>::quiet_NaN();
    std::vector<double> errors;
    std::vector<double> iters;
    std::vector<double> times;
    bool all_converged = true;
    for (int j = 0; j < opt.seeds; ++j) {
      try {
        const CompletionProblem problem =
            make_completion_problem(cell.n, cell.n, cell.r, cell.sr, mix_seed(opt.master_seed, cell_key(cell, j)));

        SolverConfig cfg;
        cfg.alpha = cell.alpha;
        cfg.target_rank = cell.r;
        cfg.eta = opt.eta;
        cfg.tol = opt.tol;
        cfg.max_iter = opt.max_iter;

        const auto start = std::chrono::steady_clock::now();
        const SolveResult result = tliht_solve(LinearMap(problem.mask), problem.b, cfg);
        times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        errors.push_back(relative_error(result.solution, *problem.ground_truth));
        iters.push_back(result.iterations);
        all_converged = all_converged && result.converged;
      } catch (const std::exception& e) {
        all_converged = false;
        if (row.error.empty()) row.error = e.what();
      }
    }
    if (errors.empty()) {
      row.re = std::numeric_limits<double>::infinity();
    } else {
      row.re = median(errors);
      row.iters = median(iters);
      row.time_s = median(times);
    }
    row.converged = all_converged;
    row.recovered = row.re <= kRecoveryThreshold;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows, bool include_timing) {
  out << "n,r,fr,sr,alpha,solver,re,iters,time_s,converged\n";
  for (const GridRow& row : rows) {
    std::ostringstream line;
    line << row.cell.n << ',' << row.cell.r << ',' << std::fixed << std::setprecision(4) << row.fr << ','
         << std::setprecision(2) << row.cell.sr << ',' << std::setprecision(2) << row.cell.alpha << ','
         << row.solver << ',' << std::scientific << std::setprecision(6) << row.re << ',' << std::defaultfloat
         << row.iters << ',' << std::fixed << std::setprecision(3) << (include_timing ? row.time_s : 0.0) << ','
         << (row.converged ? 1 : 0);
    out << line.str() << '\n';
  }
}

}  // namespace lowrank

#include "fsiga/linear_solver.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>

namespace fsiga {

std::string to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::JacobiCG: return "jacobi-cg";
    case SolveMethod::JacobiBiCGSTAB: return "jacobi-bicgstab";
    case SolveMethod::SparseLU: return "sparse-lu";
    case SolveMethod::Dense: return "dense-lu";
  }
  return "unknown";
}

double relative_residual(const SparseMatrix& a, const Vector& x, const Vector& b) {
  const double bn = b.norm();
  const double rn = (b - a * x).norm();
  return bn > 0 ? rn / bn : rn;
}

namespace {

// Every accepted solution must satisfy the true-residual audit.
SolveResult audited(SolveResult r, double tol) {
  if (!(r.report.relative_residual <= 10 * tol)) {
    throw SolverError(to_string(r.report.method) + " residual " +
                          std::to_string(r.report.relative_residual) + " above tolerance",
                      r.x, r.report);
  }
  return r;
}

void check_shapes(const SparseMatrix& a, const Vector& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) {
    throw ParameterError("linear solve: matrix and right-hand side sizes disagree");
  }
}

// Krylov solve with up to three restarts from the current iterate, which absorbs
// the drift between the recursive and the true residual.
template <typename Krylov>
SolveResult krylov_solve(const SparseMatrix& a, const Vector& b, double tol, SolveMethod method) {
  SolveResult out;
  out.report.method = method;
  if (b.norm() == 0) {
    out.x = Vector::Zero(b.size());
    return out;
  }
  Krylov solver;
  solver.setTolerance(tol);
  solver.setMaxIterations(10 * static_cast<int>(a.rows()));
  solver.compute(a);
  Vector x = Vector::Zero(b.size());
  double res = 1;
  for (int attempt = 0; attempt < 4; ++attempt) {
    x = solver.solveWithGuess(b, x);
    out.report.iterations += static_cast<int>(solver.iterations());
    res = relative_residual(a, x, b);
    if (res <= tol) break;
  }
  out.x = std::move(x);
  out.report.relative_residual = res;
  if (res > tol) {
    throw SolverError("iterative solve did not reach tolerance (residual " + std::to_string(res) +
                          ")",
                      out.x, out.report);
  }
  return out;
}

template <typename Krylov>
SolveResult solve_with_fallback(const SparseMatrix& a, const Vector& b, double tol,
                                SolveMethod method) {
  if (!(tol > 0)) throw ParameterError("solver tolerance must be positive");
  check_shapes(a, b);
  try {
    return krylov_solve<Krylov>(a, b, tol, method);
  } catch (const SolverError&) {
    if (a.rows() > kDenseFallbackLimit) throw;
    return audited(solve_dense(a, b), tol);
  }
}

}  // namespace

SolveResult solve_spd(const SparseMatrix& a, const Vector& b, double tol) {
  using CG = Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper,
                                      Eigen::DiagonalPreconditioner<double>>;
  return solve_with_fallback<CG>(a, b, tol, SolveMethod::JacobiCG);
}

SolveResult solve_coercive(const SparseMatrix& a, const Vector& b, double tol) {
  using BiCG = Eigen::BiCGSTAB<SparseMatrix, Eigen::DiagonalPreconditioner<double>>;
  return solve_with_fallback<BiCG>(a, b, tol, SolveMethod::JacobiBiCGSTAB);
}

SolveResult solve_dense(const SparseMatrix& a, const Vector& b) {
  check_shapes(a, b);
  const Eigen::MatrixXd dense(a);
  SolveResult out;
  out.x = dense.partialPivLu().solve(b);
  out.report.method = SolveMethod::Dense;
  out.report.relative_residual = relative_residual(a, out.x, b);
  return out;
}

LinearSolver::LinearSolver(SparseMatrix a, SolveMethod method, double tol)
    : a_(std::move(a)), method_(method), tol_(tol) {
  if (!(tol > 0)) throw ParameterError("solver tolerance must be positive");
  if (a_.rows() != a_.cols()) throw ParameterError("linear solver needs a square matrix");
  a_.makeCompressed();
  if (method_ == SolveMethod::SparseLU) {
    lu_ = std::make_shared<Eigen::SparseLU<SparseMatrix>>();
    lu_->analyzePattern(a_);
    lu_->factorize(a_);
    if (lu_->info() != Eigen::Success) {
      throw SolverError("sparse LU factorization failed: " + lu_->lastErrorMessage(), Vector(),
                        SolveReport{0, 0, method_});
    }
  }
}

SolveResult LinearSolver::solve(const Vector& b) const {
  check_shapes(a_, b);
  switch (method_) {
    case SolveMethod::JacobiCG: return solve_spd(a_, b, tol_);
    case SolveMethod::JacobiBiCGSTAB: return solve_coercive(a_, b, tol_);
    case SolveMethod::Dense: return audited(solve_dense(a_, b), tol_);
    case SolveMethod::SparseLU: break;
  }
  SolveResult out;
  out.report.method = SolveMethod::SparseLU;
  out.x = lu_->solve(b);
  out.report.iterations = 1;
  out.report.relative_residual = relative_residual(a_, out.x, b);
  // One step of iterative refinement if the factorization lost accuracy.
  if (out.report.relative_residual > tol_) {
    out.x += lu_->solve(Vector(b - a_ * out.x));
    out.report.iterations = 2;
    out.report.relative_residual = relative_residual(a_, out.x, b);
  }
  return audited(std::move(out), tol_);
}

}  // namespace fsiga

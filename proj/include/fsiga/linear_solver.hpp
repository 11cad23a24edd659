#pragma once

#include <Eigen/SparseLU>
#include <memory>
#include <string>

#include "fsiga/assembly.hpp"
#include "fsiga/errors.hpp"

namespace fsiga {

enum class SolveMethod { JacobiCG, JacobiBiCGSTAB, SparseLU, Dense };

std::string to_string(SolveMethod m);

inline constexpr double kDefaultSolverTolerance = 1e-12;
inline constexpr int kDenseFallbackLimit = 2000;

/// The residual is always the true ‖b − Ax‖/‖b‖, recomputed after the solve.
struct SolveReport {
  int iterations = 0;
  double relative_residual = 0;
  SolveMethod method = SolveMethod::SparseLU;
};

struct SolveResult {
  Vector x;
  SolveReport report;
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, Vector best, SolveReport report)
      : Error(what), best_(std::move(best)), report_(report) {}
  const Vector& best_iterate() const { return best_; }
  const SolveReport& report() const { return report_; }

 private:
  Vector best_;
  SolveReport report_;
};

double relative_residual(const SparseMatrix& a, const Vector& x, const Vector& b);

/// Jacobi-preconditioned conjugate gradients; audited dense LU fallback for n <= 2000.
SolveResult solve_spd(const SparseMatrix& a, const Vector& b, double tol = kDefaultSolverTolerance);

/// Jacobi-preconditioned BiCGSTAB for systems whose symmetric part is positive definite;
/// audited dense LU fallback for n <= 2000.
SolveResult solve_coercive(const SparseMatrix& a, const Vector& b,
                           double tol = kDefaultSolverTolerance);

/// Dense partial-pivoting LU. Used as the reference oracle.
SolveResult solve_dense(const SparseMatrix& a, const Vector& b);

/// A fixed operator solved against many right-hand sides (one per time step).
/// SparseLU factorizes once; the iterative methods restart from zero each call.
class LinearSolver {
 public:
  LinearSolver() = default;
  LinearSolver(SparseMatrix a, SolveMethod method, double tol = kDefaultSolverTolerance);

  SolveResult solve(const Vector& b) const;

  const SparseMatrix& matrix() const { return a_; }
  SolveMethod method() const { return method_; }
  double tolerance() const { return tol_; }

 private:
  SparseMatrix a_;
  SolveMethod method_ = SolveMethod::SparseLU;
  double tol_ = kDefaultSolverTolerance;
  std::shared_ptr<Eigen::SparseLU<SparseMatrix>> lu_;
};

}  // namespace fsiga

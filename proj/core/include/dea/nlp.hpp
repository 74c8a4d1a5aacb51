#pragma once

#include "dea/types.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace dea {

// A constrained nonlinear program
//   min f(x)  s.t.  c_E(x) = 0,  c_I(x) >= 0,  lb <= x <= ub,
// with deterministic evaluators and a declared (superset) Jacobian sparsity.
// Rows of c_E listed in complementarity_rows are bilinear complementarity
// products; the solver may relax them to -eps along a homotopy.
struct NlpProblem {
  Index n = 0;
  Index m_eq = 0;
  Index m_ineq = 0;

  VecX lb, ub;  // +-infinity where absent

  std::function<double(const VecX&)> objective;
  std::function<VecX(const VecX&)> objective_gradient;
  SpMat objective_hessian;  // constant PSD part used as the Hessian model

  std::function<VecX(const VecX&)> equality;
  std::function<VecX(const VecX&)> inequality;
  std::function<SpMat(const VecX&)> eq_jacobian;
  std::function<SpMat(const VecX&)> ineq_jacobian;

  std::vector<std::pair<Index, Index>> eq_pattern;    // declared nonzeros
  std::vector<std::pair<Index, Index>> ineq_pattern;
  std::vector<Index> complementarity_rows;

  static double inf() { return std::numeric_limits<double>::infinity(); }
};

struct SolverOptions {
  double tol_eq = 1e-6;
  double tol_ineq = 1e-8;
  double tol_comp = 1e-6;
  double tol_stat = 1e-5;
  int max_iter = 3000;
  double mu_init = 1e-2;
  std::vector<double> comp_homotopy = {1e-2, 1e-4, 1e-6, 0.0};
  double reg_primal_min = 1e-12;
  double reg_dual = 0.0;
  bool verbose = false;
};

struct SolverReport {
  enum class Status { Optimal, MaxIterations, Infeasible, LineSearchFailure };
  Status status = Status::MaxIterations;
  double objective = 0;
  double max_eq_violation = 0;
  double max_ineq_violation = 0;
  double complementarity = 0;
  double stationarity = 0;
  int iterations = 0;
  std::string message;

  bool optimal() const { return status == Status::Optimal; }
};

std::string to_string(SolverReport::Status s);

// Solver-agnostic interface; the bundled interior-point solver implements it
// and an external NLP solver can be adapted behind the same surface.
class NlpSolver {
 public:
  virtual ~NlpSolver() = default;
  virtual std::pair<VecX, SolverReport> solve(const NlpProblem& p, VecX x0,
                                              const SolverOptions& opts) = 0;
};

class InteriorPointSolver final : public NlpSolver {
 public:
  std::pair<VecX, SolverReport> solve(const NlpProblem& p, VecX x0,
                                      const SolverOptions& opts) override;
};

}  // namespace dea

#include <dea/nlp.hpp>

#include <doctest.h>

#include <cmath>

using namespace dea;

namespace {

SpMat diag_h(std::initializer_list<double> d) {
  SpMat H(int(d.size()), int(d.size()));
  int i = 0;
  for (double v : d) {
    if (v != 0.0) H.insert(i, i) = v;
    ++i;
  }
  H.makeCompressed();
  return H;
}

SpMat dense_to_sparse(const MatX& A) {
  SpMat S(int(A.rows()), int(A.cols()));
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      if (A(i, j) != 0.0) S.insert(i, j) = A(i, j);
  S.makeCompressed();
  return S;
}

NlpProblem base_problem(Index n) {
  NlpProblem p;
  p.n = n;
  p.lb = VecX::Constant(n, -NlpProblem::inf());
  p.ub = VecX::Constant(n, NlpProblem::inf());
  p.equality = [](const VecX&) { return VecX(); };
  p.inequality = [](const VecX&) { return VecX(); };
  p.eq_jacobian = [n](const VecX&) { return SpMat(0, int(n)); };
  p.ineq_jacobian = [n](const VecX&) { return SpMat(0, int(n)); };
  return p;
}

}  // namespace

TEST_CASE("unconstrained quadratic") {
  NlpProblem p = base_problem(1);
  p.objective = [](const VecX& x) { return (x[0] - 3) * (x[0] - 3); };
  p.objective_gradient = [](const VecX& x) {
    return VecX::Constant(1, 2 * (x[0] - 3)).eval();
  };
  p.objective_hessian = diag_h({2.0});

  InteriorPointSolver solver;
  auto [x, rep] = solver.solve(p, VecX::Zero(1), {});
  CHECK(rep.optimal());
  CHECK(x[0] == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("equality-constrained quadratic") {
  NlpProblem p = base_problem(2);
  p.m_eq = 1;
  p.objective = [](const VecX& x) { return x.squaredNorm(); };
  p.objective_gradient = [](const VecX& x) { return (2 * x).eval(); };
  p.objective_hessian = diag_h({2.0, 2.0});
  p.equality = [](const VecX& x) {
    return VecX::Constant(1, x[0] + x[1] - 2).eval();
  };
  p.eq_jacobian = [](const VecX&) {
    MatX J(1, 2);
    J << 1, 1;
    return dense_to_sparse(J);
  };
  p.eq_pattern = {{0, 0}, {0, 1}};

  InteriorPointSolver solver;
  auto [x, rep] = solver.solve(p, VecX::Zero(2), {});
  CHECK(rep.optimal());
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("nonlinear equality: projection onto the unit circle") {
  NlpProblem p = base_problem(2);
  p.m_eq = 1;
  p.objective = [](const VecX& x) {
    return (x[0] - 2) * (x[0] - 2) + x[1] * x[1];
  };
  p.objective_gradient = [](const VecX& x) {
    VecX g(2);
    g << 2 * (x[0] - 2), 2 * x[1];
    return g;
  };
  p.objective_hessian = diag_h({2.0, 2.0});
  p.equality = [](const VecX& x) {
    return VecX::Constant(1, x.squaredNorm() - 1).eval();
  };
  p.eq_jacobian = [](const VecX& x) {
    MatX J(1, 2);
    J << 2 * x[0], 2 * x[1];
    return dense_to_sparse(J);
  };
  p.eq_pattern = {{0, 0}, {0, 1}};

  InteriorPointSolver solver;
  auto [x, rep] = solver.solve(p, VecX::Constant(2, 0.5), {});
  CHECK(rep.optimal());
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(std::abs(x[1]) < 1e-5);
}

TEST_CASE("upper bound activates") {
  NlpProblem p = base_problem(1);
  p.ub[0] = 1.0;
  p.objective = [](const VecX& x) { return (x[0] - 2) * (x[0] - 2); };
  p.objective_gradient = [](const VecX& x) {
    return VecX::Constant(1, 2 * (x[0] - 2)).eval();
  };
  p.objective_hessian = diag_h({2.0});

  InteriorPointSolver solver;
  auto [x, rep] = solver.solve(p, VecX::Constant(1, -3.0), {});
  CHECK(rep.optimal());
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("inequality constraint: inactive and active cases") {
  for (double rhs : {1.0, 5.0}) {
    NlpProblem p = base_problem(2);
    p.m_ineq = 1;
    p.objective = [](const VecX& x) {
      return (x[0] - 2) * (x[0] - 2) + (x[1] - 2) * (x[1] - 2);
    };
    p.objective_gradient = [](const VecX& x) {
      VecX g(2);
      g << 2 * (x[0] - 2), 2 * (x[1] - 2);
      return g;
    };
    p.objective_hessian = diag_h({2.0, 2.0});
    p.inequality = [rhs](const VecX& x) {
      return VecX::Constant(1, x[0] + x[1] - rhs).eval();
    };
    p.ineq_jacobian = [](const VecX&) {
      MatX J(1, 2);
      J << 1, 1;
      return dense_to_sparse(J);
    };
    p.ineq_pattern = {{0, 0}, {0, 1}};

    InteriorPointSolver solver;
    auto [x, rep] = solver.solve(p, VecX::Zero(2), {});
    CHECK(rep.optimal());
    if (rhs == 1.0) {
      CHECK(x[0] == doctest::Approx(2.0).epsilon(1e-5));
      CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-5));
    } else {
      CHECK(x[0] == doctest::Approx(2.5).epsilon(1e-4));
      CHECK(x[0] + x[1] >= rhs - 1e-8);
    }
  }
}

TEST_CASE("bilinear complementarity pair resolves through the homotopy") {
  // variables (g, lam): g >= 0 via an inequality row, lam <= 0 via a bound,
  // g*lam = 0 as a relaxed equality row
  NlpProblem p = base_problem(2);
  p.m_eq = 1;
  p.m_ineq = 1;
  p.ub[1] = 0.0;
  p.objective = [](const VecX& x) {
    return (x[0] - 1) * (x[0] - 1) + (x[1] + 0.5) * (x[1] + 0.5);
  };
  p.objective_gradient = [](const VecX& x) {
    VecX g(2);
    g << 2 * (x[0] - 1), 2 * (x[1] + 0.5);
    return g;
  };
  p.objective_hessian = diag_h({2.0, 2.0});
  p.equality = [](const VecX& x) {
    return VecX::Constant(1, x[0] * x[1]).eval();
  };
  p.eq_jacobian = [](const VecX& x) {
    MatX J(1, 2);
    J << x[1], x[0];
    return dense_to_sparse(J);
  };
  p.eq_pattern = {{0, 0}, {0, 1}};
  p.complementarity_rows = {0};
  p.inequality = [](const VecX& x) { return VecX::Constant(1, x[0]).eval(); };
  p.ineq_jacobian = [](const VecX&) {
    MatX J(1, 2);
    J << 1, 0;
    return dense_to_sparse(J);
  };
  p.ineq_pattern = {{0, 0}};

  InteriorPointSolver solver;
  auto [x, rep] = solver.solve(p, VecX::Zero(2), {});
  CHECK(rep.optimal());
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(std::abs(x[1]) <= 1e-4);
  CHECK(std::abs(x[0] * x[1]) <= 1e-6);
}

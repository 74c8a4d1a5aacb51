#include "dea/nlp.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dea {

std::string to_string(SolverReport::Status s) {
  switch (s) {
    case SolverReport::Status::Optimal:
      return "optimal";
    case SolverReport::Status::MaxIterations:
      return "max-iterations";
    case SolverReport::Status::Infeasible:
      return "infeasible";
    case SolverReport::Status::LineSearchFailure:
      return "line-search-failure";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Iterate {
  VecX x, s;       // primal
  VecX yE, yI;     // equality / inequality multipliers
  VecX zs, zu, zl; // barrier duals for s >= 0, ub - x >= 0, x - lb >= 0
};

struct Work {
  const NlpProblem* p = nullptr;
  VecX row_scale;          // equality row scaling
  std::vector<Index> upper, lower;  // indices of bounded variables
  std::vector<char> is_comp;        // equality rows that are complementarity rows
  double eps = 0;                   // current complementarity relaxation

  VecX scaled_eq(const VecX& x) const {
    VecX c = p->equality(x);
    for (Index r : p->complementarity_rows) c[r] += eps;
    return row_scale.asDiagonal() * c;
  }
  SpMat scaled_eq_jac(const VecX& x) const {
    SpMat J = p->eq_jacobian(x);
    return row_scale.asDiagonal() * J;
  }
};

double merit(const Work& w, const Iterate& it, double mu, double nu,
             bool has_ineq, double* feas_out = nullptr) {
  const auto& p = *w.p;
  double phi = p.objective(it.x);
  double feas = w.scaled_eq(it.x).lpNorm<1>();
  if (has_ineq) {
    const VecX ri = p.inequality(it.x) - it.s;
    feas += ri.lpNorm<1>();
    for (Index i = 0; i < it.s.size(); ++i) phi -= mu * std::log(it.s[i]);
  }
  for (Index i : w.upper) phi -= mu * std::log(p.ub[i] - it.x[i]);
  for (Index i : w.lower) phi -= mu * std::log(it.x[i] - p.lb[i]);
  if (feas_out) *feas_out = feas;
  return phi + nu * feas;
}

}  // namespace

std::pair<VecX, SolverReport> InteriorPointSolver::solve(const NlpProblem& p,
                                                         VecX x0,
                                                         const SolverOptions& opts) {
  const Index n = p.n, mE = p.m_eq, mI = p.m_ineq;
  Work w;
  w.p = &p;
  w.is_comp.assign(size_t(mE), 0);
  for (Index r : p.complementarity_rows) w.is_comp[size_t(r)] = 1;
  for (Index i = 0; i < n; ++i) {
    if (p.ub[i] < kInf) w.upper.push_back(i);
    if (p.lb[i] > -kInf) w.lower.push_back(i);
  }
  const bool has_ineq = mI > 0;
  const bool has_barrier = has_ineq || !w.upper.empty() || !w.lower.empty();

  // homotopy stages for the complementarity rows
  std::vector<double> stages = opts.comp_homotopy;
  if (p.complementarity_rows.empty() || stages.empty()) stages = {0.0};
  size_t stage = 0;
  w.eps = stages[0];

  Iterate it;
  it.x = std::move(x0);
  for (Index i : w.upper) it.x[i] = std::min(it.x[i], p.ub[i] - 1e-3);
  for (Index i : w.lower) it.x[i] = std::max(it.x[i], p.lb[i] + 1e-3);

  double mu = has_barrier ? opts.mu_init : 0.0;
  if (has_ineq) {
    const VecX ci = p.inequality(it.x);
    it.s = ci.cwiseMax(1e-2);
    it.zs = VecX::Constant(mI, mu > 0 ? mu : 1e-2).cwiseQuotient(it.s);
  }
  it.yE = VecX::Zero(mE);
  it.yI = VecX::Zero(mI);
  it.zu = VecX::Zero(Index(w.upper.size()));
  it.zl = VecX::Zero(Index(w.lower.size()));
  for (size_t k = 0; k < w.upper.size(); ++k)
    it.zu[Index(k)] = std::max(mu, 1e-2) / (p.ub[w.upper[k]] - it.x[w.upper[k]]);
  for (size_t k = 0; k < w.lower.size(); ++k)
    it.zl[Index(k)] = std::max(mu, 1e-2) / (it.x[w.lower[k]] - p.lb[w.lower[k]]);

  // deterministic equality row scaling from the initial Jacobian
  {
    w.row_scale = VecX::Ones(mE);
    if (mE > 0) {
      const SpMat J0 = p.eq_jacobian(it.x);
      VecX rmax = VecX::Zero(mE);
      for (int k = 0; k < J0.outerSize(); ++k)
        for (SpMat::InnerIterator jt(J0, k); jt; ++jt)
          rmax[jt.row()] = std::max(rmax[jt.row()], std::abs(jt.value()));
      for (Index r = 0; r < mE; ++r)
        w.row_scale[r] = 1.0 / std::max(0.01, rmax[r]);
    }
  }

  SolverReport rep;
  double nu = 1.0;
  // Levenberg-style primal regularization: the Hessian model carries no
  // constraint curvature, so delta is adapted from the observed contraction
  // of the dual residual.
  double delta = 0.0;
  double prev_stat = kInf;
  bool adapt_delta = false;
  bool just_recentered = false;
  int noncontract_run = 0;
  double feas_best = kInf;
  int feas_stall = 0;
  double gamma = opts.reg_dual;
  const double tau = 0.995;
  const double mu_min = 1e-9;

  VecX best_x = it.x;
  double best_feas = kInf;

  auto true_report = [&](SolverReport& r) {
    const VecX cE = mE > 0 ? p.equality(it.x) : VecX();
    r.objective = p.objective(it.x);
    r.max_eq_violation = mE > 0 ? cE.lpNorm<Eigen::Infinity>() : 0.0;
    r.max_ineq_violation = 0.0;
    r.complementarity = 0.0;
    if (has_ineq) {
      const VecX ci = p.inequality(it.x);
      r.max_ineq_violation = std::max(0.0, -ci.minCoeff());
    }
    // complementarity of the relaxed rows, measured unrelaxed
    for (Index rr : p.complementarity_rows)
      r.complementarity = std::max(r.complementarity, std::abs(cE[rr]));
  };

  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    const VecX g = p.objective_gradient(it.x);
    const VecX cE = w.scaled_eq(it.x);
    const SpMat JE = w.scaled_eq_jac(it.x);
    VecX cI, rI;
    SpMat JI;
    if (has_ineq) {
      cI = p.inequality(it.x);
      rI = cI - it.s;
      JI = p.ineq_jacobian(it.x);
    }

    // dual residual
    VecX rd = g;
    if (mE > 0) rd += JE.transpose() * it.yE;
    if (has_ineq) rd += JI.transpose() * it.yI;
    for (size_t k = 0; k < w.upper.size(); ++k) rd[w.upper[k]] += it.zu[Index(k)];
    for (size_t k = 0; k < w.lower.size(); ++k) rd[w.lower[k]] -= it.zl[Index(k)];

    // IPOPT-style dual scaling of the stationarity measure
    double mult_sum = it.yE.lpNorm<1>() + it.yI.lpNorm<1>() + it.zs.lpNorm<1>() +
                      it.zu.lpNorm<1>() + it.zl.lpNorm<1>();
    const double mult_count =
        double(mE + mI + Index(w.upper.size()) + Index(w.lower.size()));
    const double sd =
        std::max(100.0, mult_count > 0 ? mult_sum / std::max(1.0, mult_count) : 0.0) /
        100.0;

    double comp_err = 0;   // centrality error of the mu-subproblem
    double comp0_err = 0;  // true complementarity of the barrier pairs
    auto pair_err = [&](double slack, double z) {
      comp_err = std::max(comp_err, std::abs(slack * z - mu));
      comp0_err = std::max(comp0_err, std::abs(slack * z));
    };
    if (has_ineq)
      for (Index i = 0; i < mI; ++i) pair_err(it.s[i], it.zs[i]);
    for (size_t k = 0; k < w.upper.size(); ++k)
      pair_err(p.ub[w.upper[k]] - it.x[w.upper[k]], it.zu[Index(k)]);
    for (size_t k = 0; k < w.lower.size(); ++k)
      pair_err(it.x[w.lower[k]] - p.lb[w.lower[k]], it.zl[Index(k)]);

    const double eq_err = mE > 0 ? cE.lpNorm<Eigen::Infinity>() : 0.0;
    double eq_raw = 0.0;
    for (Index r = 0; r < mE; ++r)
      eq_raw = std::max(eq_raw, std::abs(cE[r]) / w.row_scale[r]);
    const double ineq_err = has_ineq ? rI.lpNorm<Eigen::Infinity>() : 0.0;
    double rs_err = 0;  // KKT row -y_I - z_s = 0
    if (has_ineq) rs_err = (-it.yI - it.zs).lpNorm<Eigen::Infinity>();
    const double stat_err =
        std::max(rd.lpNorm<Eigen::Infinity>(), rs_err) / sd;
    const double barrier_err =
        std::max({stat_err, eq_err, ineq_err, comp_err});

    if (opts.verbose) {
      std::ostringstream line;
      line << "it " << iter << " mu " << mu << " eps " << w.eps << " eq "
           << eq_err << " stat " << stat_err << " comp " << comp_err
           << " comp0 " << comp0_err << " delta " << delta;
      std::fputs((line.str() + "\n").c_str(), stderr);
    }

    if (eq_err < best_feas) {
      best_feas = eq_err;
      best_x = it.x;
    }

    // convergence bookkeeping on the true (unscaled, unrelaxed) problem
    {
      SolverReport cand;
      true_report(cand);
      cand.stationarity = stat_err;
      cand.iterations = iter;
      const bool last_stage = stage + 1 == stages.size();
      if (last_stage && cand.max_eq_violation <= opts.tol_eq &&
          cand.max_ineq_violation <= opts.tol_ineq &&
          cand.complementarity <= opts.tol_comp &&
          comp0_err / sd <= opts.tol_comp && stat_err <= opts.tol_stat) {
        cand.status = SolverReport::Status::Optimal;
        rep = cand;
        return {it.x, rep};
      }
    }

    // barrier subproblem converged: tighten mu, then advance the homotopy
    if (barrier_err <= 10.0 * std::max(mu, mu_min)) {
      bool changed = false;
      if (has_barrier && mu > mu_min) {
        mu = std::max(mu_min, std::min(0.2 * mu, std::pow(mu, 1.5)));
        changed = true;
      } else if (stage + 1 < stages.size()) {
        ++stage;
        w.eps = stages[stage];
        if (has_barrier) mu = std::max(std::max(w.eps, mu_min), mu * 1.0);
        changed = true;
      }
      if (changed) {
        // recenter the barrier duals so the next direction aims at the new
        // central point instead of fighting stale multipliers
        if (has_ineq)
          for (Index i = 0; i < mI; ++i) it.zs[i] = mu / it.s[i];
        for (size_t k = 0; k < w.upper.size(); ++k)
          it.zu[Index(k)] = mu / (p.ub[w.upper[k]] - it.x[w.upper[k]]);
        for (size_t k = 0; k < w.lower.size(); ++k)
          it.zl[Index(k)] = mu / (it.x[w.lower[k]] - p.lb[w.lower[k]]);
        prev_stat = kInf;
        adapt_delta = false;
        continue;
      }
    }

    // Levenberg rescue: the Hessian model has no constraint curvature, so a
    // persistently non-contracting dual residual far from the solution gets
    // damped with extra primal regularization.  Single-step wobbles (dual
    // limit cycles, round-off) must not inflate delta.
    if (adapt_delta) {
      const double far = std::max(1e-3, 100.0 * opts.tol_stat);
      if (stat_err > far && prev_stat < kInf && stat_err > 0.8 * prev_stat) {
        if (++noncontract_run >= 3) {
          delta = std::min(1e6, std::max(4.0 * delta, 1e-6));
          noncontract_run = 0;
        }
      } else {
        noncontract_run = 0;
        if (stat_err < 0.5 * prev_stat || stat_err <= far)
          delta = std::max(opts.reg_primal_min, 0.25 * delta);
      }
      adapt_delta = false;
    }
    prev_stat = stat_err;

    // KKT assembly: [H 0 JE' JI'; 0 S 0 -I; JE 0 -gI 0; JI -I 0 -gI]
    const Index nS = has_ineq ? mI : 0;
    const Index dim = n + nS + mE + (has_ineq ? mI : 0);
    std::vector<Triplet> trips;
    trips.reserve(size_t(p.objective_hessian.nonZeros() + JE.nonZeros() * 2 +
                         (has_ineq ? JI.nonZeros() * 2 : 0) + dim + n));
    for (int k = 0; k < p.objective_hessian.outerSize(); ++k)
      for (SpMat::InnerIterator ht(p.objective_hessian, k); ht; ++ht)
        trips.emplace_back(ht.row(), ht.col(), ht.value());
    const double dreg = std::max(delta, opts.reg_primal_min);
    for (Index i = 0; i < n; ++i) trips.emplace_back(i, i, dreg);
    for (size_t k = 0; k < w.upper.size(); ++k)
      trips.emplace_back(w.upper[k], w.upper[k],
                         it.zu[Index(k)] / (p.ub[w.upper[k]] - it.x[w.upper[k]]));
    for (size_t k = 0; k < w.lower.size(); ++k)
      trips.emplace_back(w.lower[k], w.lower[k],
                         it.zl[Index(k)] / (it.x[w.lower[k]] - p.lb[w.lower[k]]));
    if (has_ineq)
      for (Index i = 0; i < mI; ++i)
        trips.emplace_back(n + i, n + i, it.zs[i] / it.s[i]);
    for (int k = 0; k < JE.outerSize(); ++k)
      for (SpMat::InnerIterator jt(JE, k); jt; ++jt) {
        trips.emplace_back(n + nS + jt.row(), jt.col(), jt.value());
        trips.emplace_back(jt.col(), n + nS + jt.row(), jt.value());
      }
    for (Index r = 0; r < mE; ++r)
      trips.emplace_back(n + nS + r, n + nS + r, -gamma);
    if (has_ineq) {
      for (int k = 0; k < JI.outerSize(); ++k)
        for (SpMat::InnerIterator jt(JI, k); jt; ++jt) {
          trips.emplace_back(n + nS + mE + jt.row(), jt.col(), jt.value());
          trips.emplace_back(jt.col(), n + nS + mE + jt.row(), jt.value());
        }
      for (Index i = 0; i < mI; ++i) {
        trips.emplace_back(n + i, n + nS + mE + i, -1.0);
        trips.emplace_back(n + nS + mE + i, n + i, -1.0);
        trips.emplace_back(n + nS + mE + i, n + nS + mE + i, -gamma);
      }
    }
    SpMat K(static_cast<int>(dim), static_cast<int>(dim));
    K.setFromTriplets(trips.begin(), trips.end());

    VecX rhs(dim);
    {
      VecX rd_mod = rd;
      for (size_t k = 0; k < w.upper.size(); ++k) {
        const double slack = p.ub[w.upper[k]] - it.x[w.upper[k]];
        rd_mod[w.upper[k]] -= (mu - slack * it.zu[Index(k)]) / slack;
      }
      for (size_t k = 0; k < w.lower.size(); ++k) {
        const double slack = it.x[w.lower[k]] - p.lb[w.lower[k]];
        rd_mod[w.lower[k]] += (mu - slack * it.zl[Index(k)]) / slack;
      }
      rhs.segment(0, n) = -rd_mod;
      if (has_ineq)
        for (Index i = 0; i < mI; ++i)
          rhs[n + i] = it.yI[i] + mu / it.s[i];  // -(-yI - mu/s)
      rhs.segment(n + nS, mE) = -cE;
      if (has_ineq) rhs.segment(n + nS + mE, mI) = -rI;
    }

    Eigen::SparseLU<SpMat> lu;
    lu.compute(K);
    VecX d;
    bool ok = lu.info() == Eigen::Success;
    if (ok) {
      d = lu.solve(rhs);
      ok = d.allFinite();
      if (ok) d += lu.solve(rhs - K * d);  // one step of iterative refinement
    }
    if (!ok) {
      delta = std::max(10.0 * std::max(delta, opts.reg_primal_min), 1e-8);
      gamma = std::max(10.0 * gamma, 1e-12);
      if (delta > 1e10) {
        rep.status = SolverReport::Status::LineSearchFailure;
        rep.message = "KKT factorization failed beyond regularization limits";
        break;
      }
      --iter;
      continue;
    }

    const VecX dx = d.segment(0, n);
    const VecX ds = has_ineq ? VecX(d.segment(n, mI)) : VecX();
    const VecX dyE = d.segment(n + nS, mE);
    const VecX dyI = has_ineq ? VecX(d.segment(n + nS + mE, mI)) : VecX();

    VecX dzs, dzu(Index(w.upper.size())), dzl(Index(w.lower.size()));
    if (has_ineq) {
      dzs.resize(mI);
      for (Index i = 0; i < mI; ++i)
        dzs[i] = (mu - it.s[i] * it.zs[i] - it.zs[i] * ds[i]) / it.s[i];
    }
    for (size_t k = 0; k < w.upper.size(); ++k) {
      const double slack = p.ub[w.upper[k]] - it.x[w.upper[k]];
      dzu[Index(k)] =
          (mu - slack * it.zu[Index(k)] + it.zu[Index(k)] * dx[w.upper[k]]) / slack;
    }
    for (size_t k = 0; k < w.lower.size(); ++k) {
      const double slack = it.x[w.lower[k]] - p.lb[w.lower[k]];
      dzl[Index(k)] =
          (mu - slack * it.zl[Index(k)] - it.zl[Index(k)] * dx[w.lower[k]]) / slack;
    }

    // fraction-to-boundary limits
    double a_primal = 1.0, a_dual = 1.0;
    if (has_ineq)
      for (Index i = 0; i < mI; ++i) {
        if (ds[i] < 0) a_primal = std::min(a_primal, -tau * it.s[i] / ds[i]);
        if (dzs[i] < 0) a_dual = std::min(a_dual, -tau * it.zs[i] / dzs[i]);
      }
    for (size_t k = 0; k < w.upper.size(); ++k) {
      const double slack = p.ub[w.upper[k]] - it.x[w.upper[k]];
      if (dx[w.upper[k]] > 0)
        a_primal = std::min(a_primal, tau * slack / dx[w.upper[k]]);
      if (dzu[Index(k)] < 0)
        a_dual = std::min(a_dual, -tau * it.zu[Index(k)] / dzu[Index(k)]);
    }
    for (size_t k = 0; k < w.lower.size(); ++k) {
      const double slack = it.x[w.lower[k]] - p.lb[w.lower[k]];
      if (dx[w.lower[k]] < 0)
        a_primal = std::min(a_primal, -tau * slack / dx[w.lower[k]]);
      if (dzl[Index(k)] < 0)
        a_dual = std::min(a_dual, -tau * it.zl[Index(k)] / dzl[Index(k)]);
    }

    // penalty parameter keeps the step a descent direction for the merit
    const double mult_inf =
        std::max((it.yE + dyE).lpNorm<Eigen::Infinity>(),
                 has_ineq ? (it.yI + dyI).lpNorm<Eigen::Infinity>() : 0.0);
    nu = std::max({nu, 1.2 * mult_inf + 0.1, 1.0});

    double feas0 = 0;
    const double phi0 = merit(w, it, mu, nu, has_ineq, &feas0);
    // merit directional derivative: objective + barrier terms + penalty
    double dphi = g.dot(dx) - nu * feas0;
    if (has_ineq)
      for (Index i = 0; i < mI; ++i) dphi -= mu * ds[i] / it.s[i];
    for (size_t k = 0; k < w.upper.size(); ++k)
      dphi += mu * dx[w.upper[k]] / (p.ub[w.upper[k]] - it.x[w.upper[k]]);
    for (size_t k = 0; k < w.lower.size(); ++k)
      dphi -= mu * dx[w.lower[k]] / (it.x[w.lower[k]] - p.lb[w.lower[k]]);

    bool accepted = false;
    double alpha = a_primal;
    Iterate trial = it;
    for (int bt = 0; bt < 40 && !accepted; ++bt) {
      trial.x = it.x + alpha * dx;
      if (has_ineq) trial.s = it.s + alpha * ds;
      double phi_t;
      try {
        phi_t = merit(w, trial, mu, nu, has_ineq);
      } catch (const std::exception&) {
        alpha *= 0.5;
        continue;
      }
      if (phi_t <= phi0 + 1e-4 * alpha * std::min(dphi, 0.0) ||
          phi_t < phi0 - 1e-14 * std::abs(phi0)) {
        accepted = true;
        break;
      }
      // second-order correction on the first rejection of the full step
      if (bt == 0 && alpha == a_primal) {
        VecX rhs2 = VecX::Zero(dim);
        try {
          rhs2.segment(n + nS, mE) = -w.scaled_eq(trial.x);
          if (has_ineq)
            rhs2.segment(n + nS + mE, mI) = -(p.inequality(trial.x) - trial.s);
          const VecX d2 = lu.solve(rhs2);
          if (d2.allFinite()) {
            Iterate soc = it;
            soc.x = it.x + alpha * dx + d2.segment(0, n);
            if (has_ineq) soc.s = it.s + alpha * ds + d2.segment(n, mI);
            bool in_bounds = true;
            if (has_ineq && (soc.s.array() <= 0).any()) in_bounds = false;
            for (size_t k = 0; k < w.upper.size() && in_bounds; ++k)
              if (soc.x[w.upper[k]] >= p.ub[w.upper[k]]) in_bounds = false;
            for (size_t k = 0; k < w.lower.size() && in_bounds; ++k)
              if (soc.x[w.lower[k]] <= p.lb[w.lower[k]]) in_bounds = false;
            if (in_bounds) {
              const double phi_soc = merit(w, soc, mu, nu, has_ineq);
              if (phi_soc <= phi0 + 1e-4 * alpha * std::min(dphi, 0.0) ||
                  phi_soc < phi0) {
                trial = soc;
                accepted = true;
                break;
              }
            }
          }
        } catch (const std::exception&) {
        }
      }
      alpha *= 0.5;
    }

    if (!accepted) {
      // The iterate may simply sit at the minimizer of the current barrier
      // merit: recenter the duals, then push the barrier down before
      // resorting to heavier regularization.
      auto recenter = [&] {
        if (has_ineq)
          for (Index i = 0; i < mI; ++i) it.zs[i] = std::max(mu, mu_min) / it.s[i];
        for (size_t k = 0; k < w.upper.size(); ++k)
          it.zu[Index(k)] =
              std::max(mu, mu_min) / (p.ub[w.upper[k]] - it.x[w.upper[k]]);
        for (size_t k = 0; k < w.lower.size(); ++k)
          it.zl[Index(k)] =
              std::max(mu, mu_min) / (it.x[w.lower[k]] - p.lb[w.lower[k]]);
      };
      // if still infeasible, the penalty weight is likely too small against
      // the objective: escalate before touching the barrier machinery
      if (eq_raw + ineq_err > 0.5 * opts.tol_eq && nu < 1e13) {
        nu = std::min(1e14, 10.0 * nu);
        prev_stat = kInf;
        continue;
      }
      if (has_barrier && !just_recentered) {
        recenter();
        just_recentered = true;
        prev_stat = kInf;
        continue;
      }
      if (has_barrier && mu > mu_min) {
        mu = std::max(mu_min, 0.2 * mu);
        recenter();
        prev_stat = kInf;
        continue;
      }
      if (stage + 1 < stages.size()) {
        ++stage;
        w.eps = stages[stage];
        recenter();
        prev_stat = kInf;
        continue;
      }
      if (delta < 1e-2) {
        delta = std::max(10.0 * std::max(delta, opts.reg_primal_min), 1e-6);
        prev_stat = kInf;
        continue;
      }
      SolverReport cand;
      true_report(cand);
      cand.stationarity = stat_err;
      cand.iterations = iter;
      cand.status = SolverReport::Status::LineSearchFailure;
      cand.message = "merit line search failed";
      rep = cand;
      return {it.x, rep};
    }
    just_recentered = false;

    it.x = trial.x;
    if (has_ineq) {
      it.s = trial.s;
      it.yI += a_dual * dyI;
      it.zs += a_dual * dzs;
      for (Index i = 0; i < mI; ++i)
        it.zs[i] = std::min(std::max(it.zs[i], 1e-12),
                            1e10 * std::max(1.0, mu / it.s[i]));
    }
    it.yE += a_dual * dyE;
    it.zu += a_dual * dzu;
    it.zl += a_dual * dzl;
    adapt_delta = true;

    // feasibility stall watch: escalate the penalty when the raw constraint
    // violation stops improving while still above tolerance
    if (eq_raw + ineq_err > 0.5 * opts.tol_eq) {
      if (eq_raw + ineq_err < 0.5 * feas_best) {
        feas_best = eq_raw + ineq_err;
        feas_stall = 0;
      } else if (++feas_stall >= 15 && nu < 1e13) {
        nu = std::min(1e14, 10.0 * nu);
        feas_stall = 0;
      }
    }


  }

  if (iter >= opts.max_iter) {
    true_report(rep);
    rep.iterations = iter;
    rep.status = SolverReport::Status::MaxIterations;
    rep.message = "iteration limit reached";
  }
  return {it.x, rep};
}

}  // namespace dea

#include "dea/integrator.hpp"

#include "dea/dual.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace dea {

namespace {

template <class S>
VecXT<S> step_residual_t(const StepProblem& sp, const VecXT<S>& q_next,
                         const VecXT<S>& lam_ext, const VecXT<S>& lam_c,
                         const std::vector<bool>& active) {
  const Model& m = *sp.model;
  const auto& L = m.layout;
  VecXT<S> r(L.r_full + L.n_int + L.n_ext + L.n_contacts);

  VecXT<S> mom;
  if (sp.initial) {
    mom = initial_momentum_residual(m, sp.p0_bar, sp.q_curr.cast<S>().eval(),
                                    q_next, lam_ext, lam_c,
                                    sp.Q_curr.cast<S>().eval(), sp.dt);
  } else {
    mom = momentum_match_residual(m, sp.q_prev.cast<S>().eval(),
                                  sp.q_curr.cast<S>().eval(), q_next, lam_ext,
                                  lam_c, sp.Q_prev.cast<S>().eval(),
                                  sp.Q_curr.cast<S>().eval(), sp.dt);
  }
  if (sp.prescribe_potentials) {
    // electrical balance rows give way to Dirichlet rows on the potentials
    for (Index k = 0; k < L.n_nodes(); ++k)
      for (Index c = 0; c < 3; ++c)
        mom[9 * k + 6 + c] =
            q_next[L.elec_index[size_t(3 * k + c)]] - sp.potentials[3 * k + c];
  } else {
    // The phi_o balance rows of one beam sum to zero identically (the energy
    // sees only potential gradients), so each beam carries a one-dimensional
    // potential gauge.  Charge schedules must be neutral per beam; the root
    // node's balance row is replaced by a gauge row that carries the mean
    // potential level, which is exactly the level a minimum-variation
    // optimal trajectory keeps.
    Index flat = 0;
    for (const auto& mesh : m.beams) {
      S gauge{0};
      for (int k = 0; k < mesh.n_nodes; ++k) {
        const Index e = mesh.node_q(k) + 12;
        gauge += q_next[e] - sp.q_curr[e];
      }
      mom[9 * flat + 6] = gauge;
      flat += mesh.n_nodes;
    }
  }
  r.segment(0, L.r_full) = mom;
  r.segment(L.r_full, L.n_int) = eval_g_int(m, q_next);
  if (L.n_ext > 0) r.segment(L.r_full + L.n_int, L.n_ext) = eval_g_ext(m, q_next);
  const Index c0 = L.r_full + L.n_int + L.n_ext;
  for (Index i = 0; i < L.n_contacts; ++i)
    r[c0 + i] = active[size_t(i)] ? contact_gap(m.contacts[size_t(i)], q_next)
                                  : lam_c[i];
  return r;
}

struct StepWork {
  VecX residual(const StepProblem& sp, const VecX& z,
                const std::vector<bool>& active) const {
    const Model& m = *sp.model;
    const Index nq = m.nq(), ne = m.layout.n_ext, nc = m.layout.n_contacts;
    const VecX q_next = z.segment(0, nq);
    const VecX lam_ext = z.segment(nq, ne);
    const VecX lam_c = z.segment(nq + ne, nc);
    return step_residual_t<double>(sp, q_next, lam_ext, lam_c, active);
  }

  MatX jacobian(const StepProblem& sp, const VecX& z,
                const std::vector<bool>& active) const {
    const Model& m = *sp.model;
    const Index nq = m.nq(), ne = m.layout.n_ext, nc = m.layout.n_contacts;
    const Index nz = z.size();
    VecXT<Dual> qd(nq), led(ne), lcd(nc);
    for (Index i = 0; i < nq; ++i) qd[i] = Dual::seeded(z[i], nz, i);
    for (Index i = 0; i < ne; ++i) led[i] = Dual::seeded(z[nq + i], nz, nq + i);
    for (Index i = 0; i < nc; ++i)
      lcd[i] = Dual::seeded(z[nq + ne + i], nz, nq + ne + i);
    const VecXT<Dual> r = step_residual_t<Dual>(sp, qd, led, lcd, active);
    MatX J = MatX::Zero(r.size(), nz);
    for (Index i = 0; i < r.size(); ++i)
      if (!r[i].constant()) J.row(i) = r[i].g.transpose();
    return J;
  }
};

VecX newton_solve(const StepProblem& sp, VecX z, const std::vector<bool>& active,
                  const StepOptions& opts, Index step_index, double* out_norm,
                  int* out_iters) {
  const StepWork work;
  VecX r = work.residual(sp, z, active);
  double rn = r.lpNorm<Eigen::Infinity>();
  int polish_left = opts.polish_iters;
  // chord iteration: the Jacobian is refreshed only when progress slows,
  // which typically halves the per-step cost at these step sizes
  Eigen::PartialPivLU<MatX> lu;
  bool have_jacobian = false;
  bool fresh_jacobian = false;
  for (int it = 0; it < opts.max_newton; ++it) {
    const bool converged = rn <= opts.newton_tol;
    if (converged && polish_left-- <= 0) break;
    if (!have_jacobian) {
      const MatX J = work.jacobian(sp, z, active);
      lu.compute(J);
      have_jacobian = true;
      fresh_jacobian = true;
    }
    const VecX dz = lu.solve(-r);
    if (!dz.allFinite()) {
      if (converged) break;
      std::ostringstream msg;
      msg << "singular Newton system in step " << step_index << " (residual "
          << rn << ")";
      throw SolveFailure(msg.str(), step_index);
    }
    double alpha = 1.0;
    bool accepted = false;
    for (int bt = 0; bt <= opts.max_backtrack; ++bt) {
      const VecX z_try = z + alpha * dz;
      const VecX r_try = work.residual(sp, z_try, active);
      const double rn_try = r_try.lpNorm<Eigen::Infinity>();
      if (rn_try < (1.0 - 1e-4 * alpha) * rn || rn_try < opts.newton_tol) {
        // refresh the Jacobian next time if contraction was poor
        if (rn_try > 0.2 * rn || alpha < 1.0) have_jacobian = false;
        z = z_try;
        r = r_try;
        rn = rn_try;
        accepted = true;
        break;
      }
      if (bt == 0 && !fresh_jacobian) {  // retry with a fresh Jacobian
        have_jacobian = false;
        break;
      }
      alpha *= 0.5;
    }
    fresh_jacobian = false;
    if (!accepted) {
      if (!have_jacobian) continue;
      if (rn <= opts.newton_tol) break;  // polishing stalled at round-off
      std::ostringstream msg;
      msg << "Newton line search failed in step " << step_index << " (residual "
          << rn << ")";
      throw SolveFailure(msg.str(), step_index);
    }
    if (out_iters) ++*out_iters;
  }
  if (rn > opts.newton_tol) {
    std::ostringstream msg;
    msg << "Newton did not converge in step " << step_index << " (residual "
        << rn << " > " << opts.newton_tol << ")";
    throw SolveFailure(msg.str(), step_index);
  }
  if (out_norm) *out_norm = rn;
  return z;
}

}  // namespace

VecX del_residual(const StepProblem& sp, const VecX& q_next, const VecX& lam_ext,
                  const VecX& lam_c, const std::vector<bool>& active) {
  return step_residual_t<double>(sp, q_next, lam_ext, lam_c, active);
}

StepResult solve_step(const StepProblem& sp, const VecX& q_guess,
                      const std::vector<bool>& active_guess,
                      const StepOptions& opts, Index step_index) {
  const Model& m = *sp.model;
  const Index nq = m.nq(), ne = m.layout.n_ext, nc = m.layout.n_contacts;
  std::vector<bool> active = active_guess;
  if (active.size() != size_t(nc)) active.assign(size_t(nc), false);

  VecX z = VecX::Zero(nq + ne + nc);
  z.segment(0, nq) = q_guess;

  StepResult res;
  for (int outer = 0; outer < opts.max_active_set; ++outer) {
    res.active_set_iters = outer + 1;
    int iters = 0;
    z = newton_solve(sp, z, active, opts, step_index, &res.residual_norm, &iters);
    res.newton_iters += iters;
    if (nc == 0) break;

    const VecX q_next = z.segment(0, nq);
    const VecX lam_c = z.segment(nq + ne, nc);
    const VecX gaps = eval_g_contact<double>(m, q_next);
    // Kuhn-Tucker check: activate the worst penetration, else release the
    // most positive multiplier; one change per outer iteration.
    Index worst_pen = -1, worst_lam = -1;
    double pen = -opts.comp_tol, lam = opts.comp_tol;
    for (Index i = 0; i < nc; ++i) {
      if (!active[size_t(i)] && gaps[i] < pen) {
        pen = gaps[i];
        worst_pen = i;
      }
      if (active[size_t(i)] && lam_c[i] > lam) {
        lam = lam_c[i];
        worst_lam = i;
      }
    }
    if (worst_pen >= 0) {
      active[size_t(worst_pen)] = true;
    } else if (worst_lam >= 0) {
      active[size_t(worst_lam)] = false;
      z[nq + ne + worst_lam] = 0.0;
    } else {
      break;
    }
    if (outer + 1 == opts.max_active_set)
      throw SolveFailure("contact active set did not settle", step_index);
  }

  res.q_next = z.segment(0, nq);
  res.lam_ext = z.segment(nq, ne);
  res.lam_c = z.segment(nq + ne, nc);
  for (Index i = 0; i < nc; ++i)
    if (!active[size_t(i)]) res.lam_c[i] = 0.0;
  return res;
}

namespace {

// Phase steps count time intervals.  When a simulation starts from a given
// state pair (q_0, q_1), the first interval of the first phase is already
// materialized: its charge column becomes Q_0 and zero multiplier blocks
// keep the per-node indexing aligned.
Trajectory run_phases(const Model& m, VecX q_prev, VecX q_curr, double dt,
                      const std::vector<SimPhase>& phases,
                      const StepOptions& opts, bool from_rest, const VecX& p0) {
  Trajectory tr;
  tr.dt = dt;
  const Index n_elec = m.layout.n_elec();
  std::vector<bool> active(size_t(m.layout.n_contacts), false);

  tr.q.push_back(from_rest ? q_curr : q_prev);
  if (!from_rest) tr.q.push_back(q_curr);

  Index global_step = 0;
  bool need_init = from_rest;
  bool skip_first = !from_rest;
  for (const auto& phase : phases) {
    for (int s = 0; s < phase.steps; ++s) {
      VecX Q_curr = VecX::Zero(n_elec);
      if (phase.charges.size() > 0) Q_curr = phase.charges.col(s);

      if (skip_first) {
        tr.charges.push_back(Q_curr);
        tr.lam_ext.push_back(VecX::Zero(m.layout.n_ext));
        tr.lam_c.push_back(VecX::Zero(m.layout.n_contacts));
        skip_first = false;
        ++global_step;
        continue;
      }

      StepProblem sp;
      sp.model = &m;
      sp.dt = dt;
      sp.prescribe_potentials = phase.prescribe_potentials;
      sp.potentials = phase.potentials;
      sp.Q_curr = Q_curr;
      VecX guess;
      if (need_init) {
        sp.initial = true;
        sp.q_curr = tr.q.back();
        sp.p0_bar = p0;
        guess = sp.q_curr;
        need_init = false;
      } else {
        sp.q_prev = tr.q[tr.q.size() - 2];
        sp.q_curr = tr.q.back();
        sp.Q_prev = tr.charges.empty() ? VecX::Zero(n_elec) : tr.charges.back();
        guess = 2.0 * sp.q_curr - sp.q_prev;  // linear extrapolation
      }
      StepResult st = solve_step(sp, guess, active, opts, global_step);
      for (Index i = 0; i < m.layout.n_contacts; ++i)
        active[size_t(i)] = st.lam_c[i] < 0.0;
      tr.q.push_back(st.q_next);
      tr.lam_ext.push_back(st.lam_ext);
      tr.lam_c.push_back(st.lam_c);
      tr.charges.push_back(Q_curr);
      ++global_step;
    }
  }
  return tr;
}

}  // namespace

Trajectory simulate(const Model& m, const VecX& q0, const VecX& q1, double dt,
                    const std::vector<SimPhase>& phases, const StepOptions& opts) {
  return run_phases(m, q0, q1, dt, phases, opts, false, VecX());
}

Trajectory simulate_from_rest(const Model& m, const VecX& q0, const VecX& p0,
                              double dt, const std::vector<SimPhase>& phases,
                              const StepOptions& opts) {
  return run_phases(m, VecX(), q0, dt, phases, opts, true, p0);
}

VecX trajectory_energy(const Model& m, const Trajectory& tr) {
  const Index N = tr.steps();
  VecX E(N);
  for (Index n = 0; n < N; ++n) {
    const VecX v = (tr.q[size_t(n + 1)] - tr.q[size_t(n)]) / tr.dt;
    const VecX mid = 0.5 * (tr.q[size_t(n)] + tr.q[size_t(n + 1)]);
    E[n] = kinetic_energy(m, v) + potential_energy<double>(m, mid);
  }
  return E;
}

Vec3 total_linear_momentum(const Model& m, const VecX& p) {
  Vec3 P = Vec3::Zero();
  for (Index off : m.layout.node_q) P += p.segment<3>(off);
  for (Index off : m.layout.body_q) P += p.segment<3>(off);
  return P;
}

double max_constraint_violation(const Model& m, const Trajectory& tr) {
  double worst = 0;
  for (size_t n = 1; n < tr.q.size(); ++n) {
    worst = std::max(worst,
                     eval_g_int<double>(m, tr.q[n]).lpNorm<Eigen::Infinity>());
    if (m.layout.n_ext > 0)
      worst = std::max(
          worst, eval_g_ext<double>(m, tr.q[n]).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

}  // namespace dea

#pragma once

#include "dea/model.hpp"

#include <functional>
#include <vector>

namespace dea {

// One forward step solves the projected discrete Euler-Lagrange equations
//   P(q_n)' [p_n^+ - p_n^-] = 0,   g(q_{n+1}) = 0,
// plus the Kuhn-Tucker contact conditions at q_{n+1}, for the unknowns
// (q_{n+1}, lam_n^ext, lam_n^c).

template <class S>
VecXT<S> momentum_match_residual(const Model& m, const VecXT<S>& qm1,
                                 const VecXT<S>& qn, const VecXT<S>& qn1,
                                 const VecXT<S>& lam_ext, const VecXT<S>& lam_c,
                                 const VecXT<S>& Qm1, const VecXT<S>& Qn,
                                 double dt) {
  const VecXT<S> pp = legendre_plus(m, qm1, qn, lam_ext, lam_c, Qm1, dt);
  const VecXT<S> pm = legendre_minus(m, qn, qn1, lam_ext, lam_c, Qn, dt);
  const VecXT<S> diff = pp - pm;
  return project_full(m, qn, diff);
}

// Initial momentum relation p0_bar - p_0^-(q_0, q_1, ...) = 0 projected at
// q_0; used to start a simulation from (q_0, p_0).
template <class S>
VecXT<S> initial_momentum_residual(const Model& m, const VecX& p0_bar,
                                   const VecXT<S>& q0, const VecXT<S>& q1,
                                   const VecXT<S>& lam_ext, const VecXT<S>& lam_c,
                                   const VecXT<S>& Q0, double dt) {
  const VecXT<S> pm = legendre_minus(m, q0, q1, lam_ext, lam_c, Q0, dt);
  VecXT<S> diff(pm.size());
  for (Index i = 0; i < pm.size(); ++i) diff[i] = p0_bar[i] - pm[i];
  return project_full(m, q0, diff);
}

struct StepOptions {
  double newton_tol = 1e-10;  // infinity norm of the step residual
  int max_newton = 50;
  int max_backtrack = 30;
  int polish_iters = 1;  // extra Newton steps after the tolerance is met
  int max_active_set = 20;
  double comp_tol = 1e-10;
};

// Unknowns and fixed data of one time step (the forward problem).
struct StepProblem {
  const Model* model = nullptr;
  double dt = 0;
  VecX q_prev;   // q_{n-1}; empty for the initial-momentum variant
  VecX q_curr;   // q_n (or q_0)
  VecX p0_bar;   // only for the initial variant
  VecX Q_prev;   // charges on the trailing interval
  VecX Q_curr;   // charges on the leading interval
  bool initial = false;
  bool prescribe_potentials = false;
  VecX potentials;  // n_elec targets when prescribed
};

/// Stacked step residual at (q_next, lam_ext, lam_c) with the given contact
/// active set; rows: projected momentum matching, g_int, g_ext, then per
/// contact either the gap (active) or the multiplier (inactive).
VecX del_residual(const StepProblem& sp, const VecX& q_next, const VecX& lam_ext,
                  const VecX& lam_c, const std::vector<bool>& active);

struct StepResult {
  VecX q_next;
  VecX lam_ext;
  VecX lam_c;
  int newton_iters = 0;
  int active_set_iters = 0;
  double residual_norm = 0;
};

/// Damped-Newton solve of one step including the active-set outer loop.
StepResult solve_step(const StepProblem& sp, const VecX& q_guess,
                      const std::vector<bool>& active_guess,
                      const StepOptions& opts, Index step_index);

struct Trajectory {
  double dt = 0;
  std::vector<VecX> q;        // N+1 configurations
  std::vector<VecX> lam_ext;  // N multiplier blocks (node n)
  std::vector<VecX> lam_c;    // N contact multiplier blocks
  std::vector<VecX> charges;  // N charge blocks

  Index steps() const { return Index(q.size()) - 1; }
};

struct SimPhase {
  int steps = 0;
  MatX charges;  // n_elec x steps; empty means zero charges
  bool prescribe_potentials = false;
  VecX potentials;  // n_elec values held fixed during the phase
};

/// Forward dynamics from a consistent state pair (q_0, q_1).
Trajectory simulate(const Model& m, const VecX& q0, const VecX& q1, double dt,
                    const std::vector<SimPhase>& phases,
                    const StepOptions& opts = {});

/// Forward dynamics from (q_0, p_0): q_1 is found from the discrete
/// Legendre relation before stepping.
Trajectory simulate_from_rest(const Model& m, const VecX& q0, const VecX& p0,
                              double dt, const std::vector<SimPhase>& phases,
                              const StepOptions& opts = {});

/// Discrete energy series E_{n+1/2} = T(v_n) + V(mid_n), n = 0..N-1.
VecX trajectory_energy(const Model& m, const Trajectory& tr);

/// Total linear momentum carried by a momentum covector.
Vec3 total_linear_momentum(const Model& m, const VecX& p);

/// Max infinity-norm of [g_int; g_ext] over all trajectory states.
double max_constraint_violation(const Model& m, const Trajectory& tr);

}  // namespace dea

#pragma once

#include "dea/dual.hpp"
#include "dea/integrator.hpp"
#include "dea/nlp.hpp"

#include <optional>
#include <string>

namespace dea {

// Decision vector x = [q_0..q_N, lam_0^ext..lam_M^ext, lam_0^c..lam_M^c,
// Q_0..Q_{N-1}] with M = N-1, or M = N when a final momentum condition is
// imposed (the final Legendre transform carries half-weighted multipliers
// at node N).
struct DecisionLayout {
  Index nq = 0, n_ext = 0, n_c = 0, nQ = 0;
  int N = 0;
  bool has_terminal_multipliers = false;

  int lam_blocks() const { return N + (has_terminal_multipliers ? 1 : 0); }
  Index q_off(int n) const { return nq * n; }
  Index lam_ext_off(int n) const { return nq * (N + 1) + n_ext * n; }
  Index lam_c_off(int n) const {
    return nq * (N + 1) + n_ext * lam_blocks() + n_c * n;
  }
  Index Q_off(int n) const {
    return nq * (N + 1) + (n_ext + n_c) * lam_blocks() + nQ * n;
  }
  Index total() const {
    return nq * (N + 1) + (n_ext + n_c) * lam_blocks() + nQ * N;
  }
};

struct BoundaryData {
  VecX q0;                 // full reference/initial configuration (mech rows used)
  VecX p0;                 // prescribed initial momentum covector (full dim)
  std::optional<VecX> qN_mech_full;  // full final configuration (mech rows used)
  std::vector<std::pair<Index, double>> qN_components;  // partial: (q index, value)
  std::optional<VecX> pN;  // final momentum; nullopt leaves it free
};

// One equality/inequality block: rows evaluated from a gathered slice of x.
struct ResidualBlock {
  std::string name;
  Index row = 0;
  Index rows = 0;
  std::vector<std::pair<Index, Index>> inputs;  // (x offset, length)
  std::function<VecX(const VecX&)> eval_d;
  std::function<VecXT<Dual>(const VecXT<Dual>&)> eval_ad;
  bool complementarity = false;

  Index input_size() const {
    Index s = 0;
    for (auto& [o, l] : inputs) s += l;
    return s;
  }
};

// Direct transcription of the optimal control problem over the variational
// integrator: shares its residual kernels with the forward stepper, so any
// root-found forward trajectory is a feasible point of the NLP.
struct Transcription {
  const Model* model = nullptr;
  DecisionLayout dl;
  double dt = 0;
  BoundaryData boundary;
  std::vector<ResidualBlock> eq_blocks;
  std::vector<ResidualBlock> ineq_blocks;
  Index m_eq = 0, m_ineq = 0;

  VecX eval_eq(const VecX& x) const;
  VecX eval_ineq(const VecX& x) const;
  SpMat eq_jacobian(const VecX& x) const;
  SpMat ineq_jacobian(const VecX& x) const;

  NlpProblem problem() const;
};

Transcription transcribe(const Model& m, int N, double dt,
                         const BoundaryData& boundary);

/// Objective: summed squared time increments of all electrical coordinates.
double ocp_objective(const Model& m, const DecisionLayout& dl, const VecX& x);
VecX ocp_objective_gradient(const Model& m, const DecisionLayout& dl,
                            const VecX& x);
SpMat ocp_objective_hessian(const Model& m, const DecisionLayout& dl);

// Alternating per-node electrical initialization pattern: triples for nodes
// 1,3,5,... and 2,4,6,... in 1-based counting, applied to slices 1..N.
struct InitPattern {
  Vec3 odd = Vec3::Zero();
  Vec3 even = Vec3::Zero();
  double scale = 1.0;
};

VecX initial_guess(const Model& m, const DecisionLayout& dl,
                   const BoundaryData& boundary, const VecX& q_target,
                   const InitPattern& pattern);

/// Trajectory -> decision vector (charges from the trajectory; multipliers
/// copied; electrical trajectory as simulated).
VecX pack_trajectory(const Model& m, const DecisionLayout& dl,
                     const Trajectory& tr);
Trajectory unpack_trajectory(const Model& m, const DecisionLayout& dl,
                             const VecX& x, double dt);

}  // namespace dea

#pragma once

#include "dea/state.hpp"

namespace dea {

// Pointwise kinematics and energetics of the coupled beam.  Everything here
// is a pure function of value types and is templated on the scalar so the
// same code path serves double evaluation and dual-number differentiation.

// Strain measures from a state and its arc-length derivative.  The component
// triples are objective:
//   Gamma_i = x_{,s} . d_i - delta_{i3}
//   K_j     = 1/2 eps_{jkl} d_{k,s} . d_l
//   Xi      = (-alpha, -beta, -phi_{o,s})      on the reference triad
//   Theta   = (-alpha_{,s}, -beta_{,s}, 0)
template <class S>
StrainStateT<S> strain_measures(const NodeStateT<S>& state,
                                const NodeStateT<S>& state_s) {
  StrainStateT<S> r;
  const Vec3T<S>& xs = state_s.centroid;
  r.Gamma[0] = xs.dot(state.d1);
  r.Gamma[1] = xs.dot(state.d2);
  r.Gamma[2] = xs.dot(state.d3) - 1.0;
  // 1/2 eps_{jkl} d_{k,s} . d_l
  r.K[0] = S{0.5} * (state_s.d2.dot(state.d3) - state_s.d3.dot(state.d2));
  r.K[1] = S{0.5} * (state_s.d3.dot(state.d1) - state_s.d1.dot(state.d3));
  r.K[2] = S{0.5} * (state_s.d1.dot(state.d2) - state_s.d2.dot(state.d1));
  r.Xi[0] = -state.alpha;
  r.Xi[1] = -state.beta;
  r.Xi[2] = -state_s.phi_o;
  r.Theta[0] = -state_s.alpha;
  r.Theta[1] = -state_s.beta;
  r.Theta[2] = S{0};
  return r;
}

/// Checked variant for node-level states; `reference` supplies the triad the
/// electrical components refer to and must be orthonormal as well.
StrainState compute_strains(const NodeState& state, const NodeState& state_s,
                            const NodeState& reference, double tol = 1e-6);

// Free energy density per unit arc-length (N).  Mechanical part is the
// Saint-Venant-Kirchhoff quadratic form with
//   D1 = diag(GA, GA, EA),  D2 = diag(EI1, EI2, GJ);
// the electrical part is the closed-form cross-section integral of the
// pointwise coupled energy over a doubly symmetric section.
template <class S>
S free_energy_density(const StrainStateT<S>& st, const CrossSection& cs,
                      const Material& mat) {
  const auto& G = st.Gamma;
  const auto& K = st.K;
  const auto& Xi = st.Xi;
  const auto& Th = st.Theta;
  const double cc = mat.c1 + mat.c2;
  const double c2 = mat.c2;

  S mech = S{0.5} * (mat.G * cs.A * (G[0] * G[0] + G[1] * G[1]) +
                     mat.E * cs.A * G[2] * G[2]) +
           S{0.5} * (mat.E * cs.I1 * K[0] * K[0] + mat.E * cs.I2 * K[1] * K[1] +
                     mat.G * cs.J * K[2] * K[2]);

  S elec = cc * (cs.A * (Xi[0] * Xi[0] + Xi[1] * Xi[1] + Xi[2] * Xi[2]) +
                 cs.I1 * Th[0] * Th[0] + cs.I2 * Th[1] * Th[1]);

  S coup_gamma =
      2.0 * c2 *
      (cs.A * (Xi[0] * Xi[2] * G[0] + Xi[1] * Xi[2] * G[1] + Xi[2] * Xi[2] * G[2]) +
       G[2] * (Th[0] * Th[0] * cs.I1 + Th[1] * Th[1] * cs.I2));

  S coup_k = 2.0 * c2 * K[2] * (Xi[1] * Th[0] * cs.I1 - Xi[0] * Th[1] * cs.I2) +
             4.0 * c2 * Xi[2] * (Th[1] * K[0] * cs.I2 - Th[0] * K[1] * cs.I1);

  return mech + elec + coup_gamma + coup_k;
}

// Analytic gradient of free_energy_density with respect to (Gamma, K, Xi, Theta).
template <class S>
BeamResultantsT<S> resultants(const StrainStateT<S>& st, const CrossSection& cs,
                              const Material& mat) {
  const auto& G = st.Gamma;
  const auto& K = st.K;
  const auto& Xi = st.Xi;
  const auto& Th = st.Theta;
  const double cc = mat.c1 + mat.c2;
  const double c2 = mat.c2;
  BeamResultantsT<S> r;

  r.n_Gamma[0] = mat.G * cs.A * G[0] + 2.0 * c2 * cs.A * Xi[0] * Xi[2];
  r.n_Gamma[1] = mat.G * cs.A * G[1] + 2.0 * c2 * cs.A * Xi[1] * Xi[2];
  r.n_Gamma[2] = mat.E * cs.A * G[2] + 2.0 * c2 * (cs.A * Xi[2] * Xi[2] +
                                                   Th[0] * Th[0] * cs.I1 +
                                                   Th[1] * Th[1] * cs.I2);

  r.m_K[0] = mat.E * cs.I1 * K[0] + 4.0 * c2 * Xi[2] * Th[1] * cs.I2;
  r.m_K[1] = mat.E * cs.I2 * K[1] - 4.0 * c2 * Xi[2] * Th[0] * cs.I1;
  r.m_K[2] = mat.G * cs.J * K[2] +
             2.0 * c2 * (Xi[1] * Th[0] * cs.I1 - Xi[0] * Th[1] * cs.I2);

  r.e_Xi[0] = 2.0 * cc * cs.A * Xi[0] + 2.0 * c2 * cs.A * Xi[2] * G[0] -
              2.0 * c2 * K[2] * Th[1] * cs.I2;
  r.e_Xi[1] = 2.0 * cc * cs.A * Xi[1] + 2.0 * c2 * cs.A * Xi[2] * G[1] +
              2.0 * c2 * K[2] * Th[0] * cs.I1;
  r.e_Xi[2] = 2.0 * cc * cs.A * Xi[2] +
              2.0 * c2 * cs.A * (Xi[0] * G[0] + Xi[1] * G[1] + 2.0 * Xi[2] * G[2]) +
              4.0 * c2 * (Th[1] * K[0] * cs.I2 - Th[0] * K[1] * cs.I1);

  r.e_Theta[0] = 2.0 * cc * cs.I1 * Th[0] + 4.0 * c2 * G[2] * Th[0] * cs.I1 +
                 2.0 * c2 * K[2] * Xi[1] * cs.I1 - 4.0 * c2 * Xi[2] * K[1] * cs.I1;
  r.e_Theta[1] = 2.0 * cc * cs.I2 * Th[1] + 4.0 * c2 * G[2] * Th[1] * cs.I2 -
                 2.0 * c2 * K[2] * Xi[0] * cs.I2 + 4.0 * c2 * Xi[2] * K[0] * cs.I2;
  r.e_Theta[2] = S{0};
  return r;
}

// Kelvin-Voigt viscous stress, M_v = D5 * dGamma/dt, N_v = D6 * dK/dt with
// D5 = D6 = eta * I.
template <class S>
void viscous_stress(const Vec3T<S>& gamma_rate, const Vec3T<S>& k_rate,
                    const Material& mat, Vec3T<S>& M_v, Vec3T<S>& N_v) {
  M_v = mat.eta * gamma_rate;
  N_v = mat.eta * k_rate;
}

}  // namespace dea

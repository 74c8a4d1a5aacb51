#pragma once

#include "dea/beam.hpp"

#include <array>
#include <utility>
#include <vector>

namespace dea {

// Mass per reference arc-length and the principal mass moments of the cross
// section.  Only d1 and d2 carry rotary inertia; the d3 rows of the beam
// mass are zero, positive definiteness holds on the null-space-projected
// mechanical coordinates.
struct MassModel {
  double A_rho = 0;   // g/mm
  double M1_rho = 0;  // g*mm
  double M2_rho = 0;  // g*mm

  static MassModel from(const Material& mat, const CrossSection& cs) {
    return {mat.rho * cs.A, mat.rho * cs.I1, mat.rho * cs.I2};
  }
};

struct Element {
  int a = 0;
  int b = 0;
  double L = 0;  // reference length (mm)
};

// Linear two-node discretization of one beam.  Nodes occupy contiguous
// 15-wide slots in the global configuration vector starting at q_offset.
struct BeamMesh {
  Index q_offset = 0;
  int n_nodes = 0;
  std::vector<Element> elements;
  CrossSection section;
  Material material;
  MassModel mass;
  int quadrature_order = 1;
  std::vector<NodeState> reference;

  Index node_q(int i) const { return q_offset + Index(NodeState::kSize) * i; }
  double length() const {
    double L = 0;
    for (const auto& e : elements) L += e.L;
    return L;
  }
  void validate() const;
};

struct QuadPoint {
  double xi;
  double w;  // weights sum to 1 on [0,1]
};
const std::vector<QuadPoint>& quadrature_rule(int order);

template <class S>
std::pair<NodeStateT<S>, NodeStateT<S>> interpolate_element(
    const BeamMesh& mesh, const Element& e, double xi, const VecXT<S>& q) {
  const auto qa = NodeStateT<S>::unpack(
      q.template segment<NodeState::kSize>(mesh.node_q(e.a)));
  const auto qb = NodeStateT<S>::unpack(
      q.template segment<NodeState::kSize>(mesh.node_q(e.b)));
  const double Na = 1.0 - xi, Nb = xi;
  NodeStateT<S> at, ds;
  at.centroid = Na * qa.centroid + Nb * qb.centroid;
  at.d1 = Na * qa.d1 + Nb * qb.d1;
  at.d2 = Na * qa.d2 + Nb * qb.d2;
  at.d3 = Na * qa.d3 + Nb * qb.d3;
  at.phi_o = Na * qa.phi_o + Nb * qb.phi_o;
  at.alpha = Na * qa.alpha + Nb * qb.alpha;
  at.beta = Na * qa.beta + Nb * qb.beta;
  const double inv = 1.0 / e.L;
  ds.centroid = inv * (qb.centroid - qa.centroid);
  ds.d1 = inv * (qb.d1 - qa.d1);
  ds.d2 = inv * (qb.d2 - qa.d2);
  ds.d3 = inv * (qb.d3 - qa.d3);
  ds.phi_o = inv * (qb.phi_o - qa.phi_o);
  ds.alpha = inv * (qb.alpha - qa.alpha);
  ds.beta = inv * (qb.beta - qa.beta);
  return {at, ds};
}

/// Checked element interpolation; throws std::domain_error for xi outside [0,1].
std::pair<NodeState, NodeState> interpolate(const BeamMesh& mesh,
                                            int element_index, double xi,
                                            const VecX& q);

/// Consistent mass triplets of one beam (global indices).  Electrical and d3
/// rows receive no entries.
void add_beam_mass(const BeamMesh& mesh, std::vector<Triplet>& out);

template <class S>
S beam_potential_energy(const BeamMesh& mesh, const VecXT<S>& q) {
  S V{0};
  const auto& rule = quadrature_rule(mesh.quadrature_order);
  for (const auto& e : mesh.elements) {
    for (const auto& qp : rule) {
      auto [at, ds] = interpolate_element(mesh, e, qp.xi, q);
      const auto st = strain_measures(at, ds);
      V += (qp.w * e.L) * free_energy_density(st, mesh.section, mesh.material);
    }
  }
  return V;
}

namespace detail {

// Scatters w * (conjugates . d strain/d q_e) into the two node slots of an
// element.  Shared by the internal-force and viscous-force assembly: the
// strain derivative structure is identical, only the conjugate pairs differ.
template <class S>
void scatter_strain_conjugates(const BeamMesh& mesh, const Element& e,
                               double xi, const NodeStateT<S>& at,
                               const NodeStateT<S>& ds, const Vec3T<S>& nG,
                               const Vec3T<S>& mK, const Vec3T<S>& eXi,
                               const Vec3T<S>& eTh, double w, VecXT<S>& out) {
  const double N[2] = {1.0 - xi, xi};
  const Index off[2] = {mesh.node_q(e.a), mesh.node_q(e.b)};
  const double invL = 1.0 / e.L;
  const Vec3T<S>* d[3] = {&at.d1, &at.d2, &at.d3};
  const Vec3T<S>* dss[3] = {&ds.d1, &ds.d2, &ds.d3};

  // Gamma_i = x_s . d_i - delta_i3
  for (int i = 0; i < 3; ++i) {
    const S c = w * nG[i];
    for (int J = 0; J < 2; ++J) {
      const double sgn = (J == 0) ? -invL : invL;
      out.template segment<3>(off[J] + 0) += (c * sgn) * (*d[i]);
      out.template segment<3>(off[J] + 3 + 3 * i) += (c * N[J]) * ds.centroid;
    }
  }

  // K_j = 1/2 eps_jkl d_{k,s} . d_l
  static constexpr std::array<std::array<int, 3>, 6> perms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}, {1, 0, 2}, {2, 0, 1}, {2, 1, 0}}};
  static constexpr std::array<double, 6> eps = {1, -1, 1, -1, 1, -1};
  for (int p = 0; p < 6; ++p) {
    const int j = perms[p][0], k = perms[p][1], l = perms[p][2];
    const S c = (0.5 * eps[p] * w) * mK[j];
    for (int J = 0; J < 2; ++J) {
      const double sgn = (J == 0) ? -invL : invL;
      out.template segment<3>(off[J] + 3 + 3 * k) += (c * sgn) * (*d[l]);
      out.template segment<3>(off[J] + 3 + 3 * l) += (c * N[J]) * (*dss[k]);
    }
  }

  // Xi = (-alpha, -beta, -phi_{o,s}); Theta = (-alpha_s, -beta_s, 0)
  for (int J = 0; J < 2; ++J) {
    const double sgn = (J == 0) ? -invL : invL;
    out[off[J] + 13] += w * (-N[J] * eXi[0] - sgn * eTh[0]);
    out[off[J] + 14] += w * (-N[J] * eXi[1] - sgn * eTh[1]);
    out[off[J] + 12] += w * (-sgn * eXi[2]);
  }
}

}  // namespace detail

// dV/dq of the assembled beam energy, accumulated into `out` (global size).
template <class S>
void add_beam_internal_forces(const BeamMesh& mesh, const VecXT<S>& q,
                              VecXT<S>& out) {
  const auto& rule = quadrature_rule(mesh.quadrature_order);
  for (const auto& e : mesh.elements) {
    for (const auto& qp : rule) {
      auto [at, ds] = interpolate_element(mesh, e, qp.xi, q);
      const auto st = strain_measures(at, ds);
      const auto r = resultants(st, mesh.section, mesh.material);
      detail::scatter_strain_conjugates(mesh, e, qp.xi, at, ds, r.n_Gamma, r.m_K,
                                        r.e_Xi, r.e_Theta, qp.w * e.L, out);
    }
  }
}

// Kelvin-Voigt force f_v = int (M_v dGamma/dq + N_v dK/dq) ds.  Note
// f_v . qdot >= 0; the equations of motion apply it with a negative sign.
template <class S>
void add_beam_viscous_forces(const BeamMesh& mesh, const VecXT<S>& q,
                             const VecXT<S>& qdot, VecXT<S>& out) {
  if (mesh.material.eta == 0.0) return;
  const auto& rule = quadrature_rule(mesh.quadrature_order);
  for (const auto& e : mesh.elements) {
    for (const auto& qp : rule) {
      auto [at, ds] = interpolate_element(mesh, e, qp.xi, q);
      auto [vat, vds] = interpolate_element(mesh, e, qp.xi, qdot);
      // objective strain rates at the quadrature point
      Vec3T<S> gamma_rate, k_rate;
      const Vec3T<S>* d[3] = {&at.d1, &at.d2, &at.d3};
      const Vec3T<S>* vd[3] = {&vat.d1, &vat.d2, &vat.d3};
      const Vec3T<S>* dss[3] = {&ds.d1, &ds.d2, &ds.d3};
      const Vec3T<S>* vdss[3] = {&vds.d1, &vds.d2, &vds.d3};
      for (int i = 0; i < 3; ++i)
        gamma_rate[i] = vds.centroid.dot(*d[i]) + ds.centroid.dot(*vd[i]);
      static constexpr std::array<std::array<int, 3>, 6> perms = {
          {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}, {1, 0, 2}, {2, 0, 1}, {2, 1, 0}}};
      static constexpr std::array<double, 6> eps = {1, -1, 1, -1, 1, -1};
      k_rate.setZero();
      for (int p = 0; p < 6; ++p) {
        const int j = perms[p][0], k = perms[p][1], l = perms[p][2];
        k_rate[j] += (0.5 * eps[p]) *
                     (vdss[k]->dot(*d[l]) + dss[k]->dot(*vd[l]));
      }
      Vec3T<S> Mv, Nv;
      viscous_stress(gamma_rate, k_rate, mesh.material, Mv, Nv);
      const Vec3T<S> zero = Vec3T<S>::Zero();
      detail::scatter_strain_conjugates(mesh, e, qp.xi, at, ds, Mv, Nv, zero,
                                        zero, qp.w * e.L, out);
    }
  }
}

// Six orthonormality residuals per director triad, ordered
// (11, 12, 13, 22, 23, 33).
template <class S>
void internal_constraints(const Vec3T<S>& d1, const Vec3T<S>& d2,
                          const Vec3T<S>& d3, Eigen::Ref<VecXT<S>> out) {
  out[0] = d1.dot(d1) - 1.0;
  out[1] = d1.dot(d2);
  out[2] = d1.dot(d3);
  out[3] = d2.dot(d2) - 1.0;
  out[4] = d2.dot(d3);
  out[5] = d3.dot(d3) - 1.0;
}

VecX internal_constraints(const NodeState& node);

// 12x6 mechanical null-space block: identity on the centroid rows and the
// skew maps -hat(d_i) on the director rows; admissible variations are
// (translation, rotation).  Electrical rows extend it by the identity.
Eigen::Matrix<double, 12, 6> internal_null_space(const NodeState& node,
                                                 double tol = 1e-6);

}  // namespace dea

#pragma once

#include "dea/multibody.hpp"

#include <optional>

namespace dea {

struct BeamSpec {
  Vec3 origin = Vec3::Zero();
  Vec3 axis = Vec3::UnitX();
  Vec3 d1 = Vec3::UnitY();
  double length = 10.0;
  double width = 2.0;
  int cells = 10;
  int elements_per_cell = 1;
  bool clamp_root = false;
};

struct BodySpec {
  RigidBody::Kind kind = RigidBody::Kind::Cube;
  Vec3 center = Vec3::Zero();
  double mass = 0;
  double half_edge = 1.0;
  double radius = 2.0;
  double height = 2.0;
  Vec3 inertia = Vec3::Zero();  // zero: derived from geometry
  bool fix_z = false;
  bool lock_rotation = false;
  bool friction_x = false;
};

struct ContactSpec {
  std::vector<int> beams;  // every node of these beams against `body`
  int body = 0;
};

struct Scenario {
  Material material;
  std::vector<BeamSpec> beams;
  std::vector<BodySpec> bodies;
  std::vector<Joint> joints;
  std::vector<ContactSpec> contacts;
  int quadrature_order = 1;
};

// The fully indexed constrained system: meshes, bodies, constraint blocks,
// constant mass matrix and the reference (= initial) configuration.
// Immutable after build_system; all evaluation kernels are reentrant.
struct Model {
  Scenario scenario;
  SystemLayout layout;
  std::vector<BeamMesh> beams;
  std::vector<RigidBody> bodies;
  std::vector<ExtBlock> ext_blocks;
  std::vector<Index> ext_row;  // starting row of each block
  std::vector<ContactPair> contacts;
  SpMat M;
  VecX q_ref;

  Index nq() const { return layout.n_q; }
  Index node_global(int beam, int node) const;
};

Model build_system(const Scenario& sc);

/// Total kinetic energy 1/2 v' M v.
double kinetic_energy(const Model& m, const VecX& v);

template <class S>
VecXT<S> mass_apply(const SpMat& M, const VecXT<S>& v) {
  VecXT<S> out = VecXT<S>::Zero(v.size());
  for (int k = 0; k < M.outerSize(); ++k)
    for (SpMat::InnerIterator it(M, k); it; ++it)
      out[it.row()] += it.value() * v[it.col()];
  return out;
}

template <class S>
S potential_energy(const Model& m, const VecXT<S>& q) {
  S V{0};
  for (const auto& mesh : m.beams) V += beam_potential_energy(mesh, q);
  return V;
}

template <class S>
VecXT<S> potential_gradient(const Model& m, const VecXT<S>& q) {
  VecXT<S> out = VecXT<S>::Zero(q.size());
  for (const auto& mesh : m.beams) add_beam_internal_forces(mesh, q, out);
  return out;
}

template <class S>
VecXT<S> eval_g_int(const Model& m, const VecXT<S>& q) {
  VecXT<S> g(m.layout.n_int);
  Index row = 0;
  for (Index off : m.layout.node_q) {
    internal_constraints<S>(q.template segment<3>(off + 3),
                            q.template segment<3>(off + 6),
                            q.template segment<3>(off + 9),
                            g.segment(row, 6));
    row += 6;
  }
  for (Index off : m.layout.body_q) {
    internal_constraints<S>(q.template segment<3>(off + 3),
                            q.template segment<3>(off + 6),
                            q.template segment<3>(off + 9),
                            g.segment(row, 6));
    row += 6;
  }
  return g;
}

template <class S>
VecXT<S> eval_g_ext(const Model& m, const VecXT<S>& q) {
  VecXT<S> g = VecXT<S>::Zero(m.layout.n_ext);
  for (size_t b = 0; b < m.ext_blocks.size(); ++b)
    eval_ext_block(m.ext_blocks[b], q, g, m.ext_row[b]);
  return g;
}

template <class S>
VecXT<S> eval_g_contact(const Model& m, const VecXT<S>& q) {
  VecXT<S> g(m.layout.n_contacts);
  for (size_t i = 0; i < m.contacts.size(); ++i)
    g[Index(i)] = contact_gap(m.contacts[i], q);
  return g;
}

// d/dq of lambda . g_ext(q), accumulated.
template <class S>
void add_ext_constraint_forces(const Model& m, const VecXT<S>& q,
                               const VecXT<S>& lambda, VecXT<S>& out) {
  for (size_t b = 0; b < m.ext_blocks.size(); ++b)
    add_ext_block_force(m.ext_blocks[b], q, lambda, m.ext_row[b], out);
}

template <class S>
void add_contact_constraint_forces(const Model& m, const VecXT<S>& q,
                                   const VecXT<S>& lambda, VecXT<S>& out) {
  for (size_t i = 0; i < m.contacts.size(); ++i)
    add_contact_force(m.contacts[i], q, lambda[Index(i)], out);
}

// External source term f_ext(q, v, Q): Kelvin-Voigt dissipation (entering
// with a negative sign), ground friction on flagged rigid bodies, and the
// electric charges on the electrical rows.
template <class S>
VecXT<S> external_source(const Model& m, const VecXT<S>& q, const VecXT<S>& v,
                         const VecXT<S>& Q) {
  VecXT<S> f = VecXT<S>::Zero(q.size());
  VecXT<S> fv = VecXT<S>::Zero(q.size());
  for (const auto& mesh : m.beams) add_beam_viscous_forces(mesh, q, v, fv);
  f -= fv;
  for (const auto& body : m.bodies)
    if (body.friction_x)
      f[body.q_offset] += friction_force_t(S{v[body.q_offset]});
  for (Index k = 0; k < m.layout.n_elec(); ++k)
    f[m.layout.elec_index[size_t(k)]] += Q[k];
  return f;
}

// Transpose action of the internal null-space matrix evaluated at q_at.
// Reduced ordering: per beam node (translation, rotation, electrical),
// then per body (translation, rotation).
template <class S>
VecXT<S> project_full(const Model& m, const VecXT<S>& q_at, const VecXT<S>& w) {
  VecXT<S> out(m.layout.r_full);
  Index r = 0;
  auto rot_rows = [&](Index off) {
    Vec3T<S> rot = Vec3T<S>::Zero();
    for (int i = 0; i < 3; ++i) {
      const Vec3T<S> d = q_at.template segment<3>(off + 3 + 3 * i);
      rot += d.cross(w.template segment<3>(off + 3 + 3 * i));
    }
    return rot;
  };
  for (Index off : m.layout.node_q) {
    out.template segment<3>(r) = w.template segment<3>(off);
    out.template segment<3>(r + 3) = rot_rows(off);
    out.template segment<3>(r + 6) = w.template segment<3>(off + 12);
    r += 9;
  }
  for (Index off : m.layout.body_q) {
    out.template segment<3>(r) = w.template segment<3>(off);
    out.template segment<3>(r + 3) = rot_rows(off);
    r += 6;
  }
  return out;
}

// Mechanical-only projection (no electrical rows), used by the boundary
// momentum conditions of the optimal control problem.
template <class S>
VecXT<S> project_mech(const Model& m, const VecXT<S>& q_at, const VecXT<S>& w) {
  VecXT<S> out(m.layout.r_mech);
  Index r = 0;
  auto rot_rows = [&](Index off) {
    Vec3T<S> rot = Vec3T<S>::Zero();
    for (int i = 0; i < 3; ++i) {
      const Vec3T<S> d = q_at.template segment<3>(off + 3 + 3 * i);
      rot += d.cross(w.template segment<3>(off + 3 + 3 * i));
    }
    return rot;
  };
  for (Index off : m.layout.node_q) {
    out.template segment<3>(r) = w.template segment<3>(off);
    out.template segment<3>(r + 3) = rot_rows(off);
    r += 6;
  }
  for (Index off : m.layout.body_q) {
    out.template segment<3>(r) = w.template segment<3>(off);
    out.template segment<3>(r + 3) = rot_rows(off);
    r += 6;
  }
  return out;
}

// Discrete Legendre transforms.  Both use the multiplier associated with
// time node n; external/contact multipliers are impulse-like (the time step
// is absorbed into them), external source terms carry dt/2.
//
//   p_n^- = M v_n + dt/2 dV(mid_n) + 1/2 G'(q_n) lam_n - dt/2 f_ext(mid_n, v_n)
//   p_n^+ = M v_{n-1} - dt/2 dV(mid_{n-1}) - 1/2 G'(q_n) lam_n
//           + dt/2 f_ext(mid_{n-1}, v_{n-1})
//
// so that p_n^+ - p_n^- = 0 is the discrete Euler-Lagrange equation at n.
template <class S>
VecXT<S> legendre_minus(const Model& m, const VecXT<S>& qn, const VecXT<S>& qn1,
                        const VecXT<S>& lam_ext, const VecXT<S>& lam_c,
                        const VecXT<S>& Qn, double dt) {
  const VecXT<S> v = (qn1 - qn) / dt;
  const VecXT<S> mid = 0.5 * (qn + qn1);
  VecXT<S> p = mass_apply<S>(m.M, v);
  p += (0.5 * dt) * potential_gradient(m, mid);
  VecXT<S> gf = VecXT<S>::Zero(qn.size());
  add_ext_constraint_forces(m, qn, lam_ext, gf);
  add_contact_constraint_forces(m, qn, lam_c, gf);
  p += 0.5 * gf;
  p -= (0.5 * dt) * external_source(m, mid, v, Qn);
  return p;
}

template <class S>
VecXT<S> legendre_plus(const Model& m, const VecXT<S>& qm1, const VecXT<S>& qn,
                       const VecXT<S>& lam_ext, const VecXT<S>& lam_c,
                       const VecXT<S>& Qm1, double dt) {
  const VecXT<S> v = (qn - qm1) / dt;
  const VecXT<S> mid = 0.5 * (qm1 + qn);
  VecXT<S> p = mass_apply<S>(m.M, v);
  p -= (0.5 * dt) * potential_gradient(m, mid);
  VecXT<S> gf = VecXT<S>::Zero(qn.size());
  add_ext_constraint_forces(m, qn, lam_ext, gf);
  add_contact_constraint_forces(m, qn, lam_c, gf);
  p -= 0.5 * gf;
  p += (0.5 * dt) * external_source(m, mid, v, Qm1);
  return p;
}

template <class S>
S discrete_lagrangian_t(const Model& m, const VecXT<S>& qn, const VecXT<S>& qn1,
                        double dt) {
  const VecXT<S> v = (qn1 - qn) / dt;
  const VecXT<S> mid = 0.5 * (qn + qn1);
  const VecXT<S> Mv = mass_apply<S>(m.M, v);
  S T{0};
  for (Index i = 0; i < v.size(); ++i) T += S{0.5} * v[i] * Mv[i];
  return dt * (T - potential_energy(m, mid));
}

double discrete_lagrangian(const Model& m, const VecX& qn, const VecX& qn1,
                           double dt);

/// Spec-facing wrappers over the templated kernels.
VecX external_constraints(const Model& m, const VecX& q);
VecX contact_gaps(const Model& m, const VecX& q);

}  // namespace dea

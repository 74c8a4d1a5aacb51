#include "dea/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace dea {

namespace {

std::vector<NodeState> straight_reference(const BeamSpec& bs, int n_nodes,
                                          double h) {
  const Vec3 d3 = bs.axis.normalized();
  Vec3 d1 = bs.d1 - bs.d1.dot(d3) * d3;
  if (d1.norm() < 1e-12)
    throw ConfigError("beam d1 must not be parallel to the axis", "beams.d1");
  d1.normalize();
  const Vec3 d2 = d3.cross(d1);
  std::vector<NodeState> ref(static_cast<size_t>(n_nodes));
  for (int i = 0; i < n_nodes; ++i) {
    auto& n = ref[size_t(i)];
    n.centroid = bs.origin + (h * i) * d3;
    n.d1 = d1;
    n.d2 = d2;
    n.d3 = d3;
  }
  return ref;
}

}  // namespace

Index Model::node_global(int beam, int node) const {
  Index idx = 0;
  for (int b = 0; b < beam; ++b) idx += beams[size_t(b)].n_nodes;
  return idx + node;
}

Model build_system(const Scenario& sc) {
  Model m;
  m.scenario = sc;
  sc.material.validate();

  // beams, laid out first in q, then the rigid bodies
  Index q = 0;
  for (const auto& bs : sc.beams) {
    if (bs.cells < 1 || bs.elements_per_cell < 1)
      throw ConfigError("beam needs at least one cell and one element per cell",
                        "beams.cells");
    BeamMesh mesh;
    const int n_el = bs.cells * bs.elements_per_cell;
    mesh.n_nodes = n_el + 1;
    mesh.q_offset = q;
    const double h = bs.length / n_el;
    for (int e = 0; e < n_el; ++e) mesh.elements.push_back({e, e + 1, h});
    mesh.section = CrossSection::square(bs.width);
    mesh.material = sc.material;
    mesh.mass = MassModel::from(sc.material, mesh.section);
    mesh.quadrature_order = sc.quadrature_order;
    mesh.reference = straight_reference(bs, mesh.n_nodes, h);
    mesh.validate();
    for (int i = 0; i < mesh.n_nodes; ++i)
      m.layout.node_q.push_back(mesh.node_q(i));
    q += Index(NodeState::kSize) * mesh.n_nodes;
    m.beams.push_back(std::move(mesh));
  }
  for (const auto& bsp : sc.bodies) {
    RigidBody body;
    body.kind = bsp.kind;
    body.mass = bsp.mass;
    body.inertia = bsp.inertia;
    body.half_edge = bsp.half_edge;
    body.radius = bsp.radius;
    body.height = bsp.height;
    body.fix_z = bsp.fix_z;
    body.lock_rotation = bsp.lock_rotation;
    body.friction_x = bsp.friction_x;
    if (!(body.mass > 0)) throw ConfigError("rigid body mass must be > 0", "bodies.mass");
    body.finalize_inertia();
    body.q_offset = q;
    m.layout.body_q.push_back(q);
    q += 12;
    m.bodies.push_back(body);
  }
  m.layout.n_q = q;

  // reference configuration
  m.q_ref = VecX::Zero(q);
  for (const auto& mesh : m.beams)
    for (int i = 0; i < mesh.n_nodes; ++i)
      m.q_ref.segment<NodeState::kSize>(mesh.node_q(i)) =
          mesh.reference[size_t(i)].pack();
  for (size_t b = 0; b < m.bodies.size(); ++b) {
    const Index off = m.bodies[b].q_offset;
    m.q_ref.segment<3>(off) = sc.bodies[b].center;
    m.q_ref.segment<3>(off + 3) = Vec3::UnitX();
    m.q_ref.segment<3>(off + 6) = Vec3::UnitY();
    m.q_ref.segment<3>(off + 9) = Vec3::UnitZ();
  }

  // index maps
  for (Index off : m.layout.node_q)
    for (Index k = 0; k < 3; ++k) m.layout.elec_index.push_back(off + 12 + k);
  {
    std::set<Index> elec(m.layout.elec_index.begin(), m.layout.elec_index.end());
    for (Index i = 0; i < q; ++i)
      if (!elec.count(i)) m.layout.mech_index.push_back(i);
  }
  m.layout.n_int = 6 * (m.layout.n_nodes() + m.layout.n_bodies());
  m.layout.r_full = 9 * m.layout.n_nodes() + 6 * m.layout.n_bodies();
  m.layout.r_mech = 6 * (m.layout.n_nodes() + m.layout.n_bodies());

  // external constraints: beam clamps, then per-body rows, then joints
  Index row = 0;
  auto push = [&](ExtBlock b) {
    m.ext_row.push_back(row);
    row += b.rows;
    m.ext_blocks.push_back(std::move(b));
  };
  for (size_t bi = 0; bi < sc.beams.size(); ++bi) {
    if (!sc.beams[bi].clamp_root) continue;
    const auto& mesh = m.beams[bi];
    const NodeState& root = mesh.reference[0];
    ExtBlock pos;
    pos.kind = ExtBlock::Kind::ClampPosition;
    pos.rows = 3;
    pos.frame_q = mesh.node_q(0);
    pos.p_ref = root.centroid;
    pos.label = "clamp.pos.beam" + std::to_string(bi);
    push(pos);
    ExtBlock rot;
    rot.kind = ExtBlock::Kind::ClampRotation;
    rot.rows = 3;
    rot.frame_q = mesh.node_q(0);
    rot.dirs_ref.col(0) = root.d1;
    rot.dirs_ref.col(1) = root.d2;
    rot.dirs_ref.col(2) = root.d3;
    rot.label = "clamp.rot.beam" + std::to_string(bi);
    push(rot);
  }
  for (size_t b = 0; b < m.bodies.size(); ++b) {
    const auto& body = m.bodies[b];
    if (body.fix_z) {
      ExtBlock h;
      h.kind = ExtBlock::Kind::Height;
      h.rows = 1;
      h.frame_q = body.q_offset;
      h.p_ref = sc.bodies[b].center;
      h.label = "height.body" + std::to_string(b);
      push(h);
    }
    if (body.lock_rotation) {
      ExtBlock rot;
      rot.kind = ExtBlock::Kind::ClampRotation;
      rot.rows = 3;
      rot.frame_q = body.q_offset;
      rot.dirs_ref = Mat3::Identity();
      rot.label = "rotlock.body" + std::to_string(b);
      push(rot);
    }
  }
  for (size_t j = 0; j < sc.joints.size(); ++j) {
    const auto& jt = sc.joints[j];
    if (jt.body < 0 || size_t(jt.body) >= m.bodies.size())
      throw ConfigError("joint references missing rigid body", "joints.body");
    if (jt.beam < 0 || size_t(jt.beam) >= m.beams.size())
      throw ConfigError("joint references missing beam", "joints.beam");
    const auto& mesh = m.beams[size_t(jt.beam)];
    if (jt.beam_node < 0 || jt.beam_node >= mesh.n_nodes)
      throw ConfigError("joint references missing beam node", "joints.beam_node");
    ExtBlock anchor;
    anchor.kind = ExtBlock::Kind::JointAnchor;
    anchor.rows = 3;
    anchor.frame_q = m.bodies[size_t(jt.body)].q_offset;
    anchor.other_q = mesh.node_q(jt.beam_node);
    anchor.anchor_a = jt.anchor_body;
    anchor.anchor_b = jt.anchor_node;
    anchor.label = "joint.anchor." + std::to_string(j);
    push(anchor);
    ExtBlock axis;
    axis.kind = ExtBlock::Kind::JointAxis;
    axis.rows = 2;
    axis.frame_q = anchor.frame_q;
    axis.other_q = anchor.other_q;
    axis.axis = jt.axis.normalized();
    // transverse node directors: the two with the smallest reference
    // projection onto the axis
    const NodeState& nref = mesh.reference[size_t(jt.beam_node)];
    std::array<std::pair<double, int>, 3> proj = {
        std::make_pair(std::abs(axis.axis.dot(nref.d1)), 0),
        std::make_pair(std::abs(axis.axis.dot(nref.d2)), 1),
        std::make_pair(std::abs(axis.axis.dot(nref.d3)), 2)};
    std::stable_sort(proj.begin(), proj.end(),
                     [](auto& a, auto& b) { return a.first < b.first; });
    axis.t1 = std::min(proj[0].second, proj[1].second);
    axis.t2 = std::max(proj[0].second, proj[1].second);
    axis.label = "joint.axis." + std::to_string(j);
    push(axis);
  }
  m.layout.n_ext = row;

  // contact pairs
  for (const auto& cs : sc.contacts) {
    if (cs.body < 0 || size_t(cs.body) >= m.bodies.size())
      throw ConfigError("contact references missing rigid body", "contacts.body");
    const auto& body = m.bodies[size_t(cs.body)];
    if (body.kind != RigidBody::Kind::Cylinder)
      throw ConfigError("contact pairs require a cylinder body", "contacts.body");
    for (int bi : cs.beams) {
      if (bi < 0 || size_t(bi) >= m.beams.size())
        throw ConfigError("contact references missing beam", "contacts.beams");
      const auto& mesh = m.beams[size_t(bi)];
      for (int n = 0; n < mesh.n_nodes; ++n) {
        ContactPair c;
        c.beam = bi;
        c.node = n;
        c.body = cs.body;
        c.node_q = mesh.node_q(n);
        c.body_q = body.q_offset;
        c.radius = body.radius;
        m.contacts.push_back(c);
      }
    }
  }
  m.layout.n_contacts = Index(m.contacts.size());

  // constant mass matrix
  std::vector<Triplet> trips;
  for (const auto& mesh : m.beams) add_beam_mass(mesh, trips);
  for (const auto& body : m.bodies) {
    for (int c = 0; c < 3; ++c)
      trips.emplace_back(body.q_offset + c, body.q_offset + c, body.mass);
    for (int i = 0; i < 3; ++i)
      for (int c = 0; c < 3; ++c)
        trips.emplace_back(body.q_offset + 3 + 3 * i + c,
                           body.q_offset + 3 + 3 * i + c, body.euler_inertia[i]);
  }
  m.M.resize(int(q), int(q));
  m.M.setFromTriplets(trips.begin(), trips.end());
  return m;
}

double kinetic_energy(const Model& m, const VecX& v) {
  return 0.5 * v.dot(m.M * v);
}

double discrete_lagrangian(const Model& m, const VecX& qn, const VecX& qn1,
                           double dt) {
  return discrete_lagrangian_t<double>(m, qn, qn1, dt);
}

VecX external_constraints(const Model& m, const VecX& q) {
  return eval_g_ext<double>(m, q);
}

VecX contact_gaps(const Model& m, const VecX& q) {
  return eval_g_contact<double>(m, q);
}

}  // namespace dea

#pragma once

#include "dea/fem.hpp"

#include <string>
#include <vector>

namespace dea {

// A 12-coordinate frame (position + director triad), the mechanical block
// shared by beam nodes and rigid bodies.
template <class S>
struct FrameT {
  Vec3T<S> x = Vec3T<S>::Zero();
  Vec3T<S> d1 = Vec3T<S>::Zero();
  Vec3T<S> d2 = Vec3T<S>::Zero();
  Vec3T<S> d3 = Vec3T<S>::Zero();

  template <class Derived>
  static FrameT unpack(const Eigen::MatrixBase<Derived>& q) {
    FrameT f;
    f.x = q.template segment<3>(0);
    f.d1 = q.template segment<3>(3);
    f.d2 = q.template segment<3>(6);
    f.d3 = q.template segment<3>(9);
    return f;
  }
  const Vec3T<S>& director(int i) const { return i == 0 ? d1 : (i == 1 ? d2 : d3); }
};

// Rigid bodies use the same director parametrization as beam nodes so the
// identical null-space and constraint machinery serves both.
struct RigidBody {
  enum class Kind { Cube, Cylinder };
  Kind kind = Kind::Cube;
  double mass = 0;        // g
  Vec3 inertia = Vec3::Zero();        // principal inertia about body axes, g*mm^2
  Vec3 euler_inertia = Vec3::Zero();  // director inertias E_i = (J_j + J_k - J_i)/2
  double half_edge = 0;   // cube
  double radius = 0;      // cylinder
  double height = 0;      // cylinder (inertia only)
  bool fix_z = false;          // Dirichlet row on the center z coordinate
  bool lock_rotation = false;  // triad pinned to its reference
  bool friction_x = false;     // ground friction force on the x translation
  Index q_offset = -1;

  void finalize_inertia();
};

struct Joint {  // revolute
  int body = 0;
  int beam = 0;
  int beam_node = 0;
  Vec3 axis = Vec3::UnitY();
  Vec3 anchor_body = Vec3::Zero();  // components on the body directors
  Vec3 anchor_node = Vec3::Zero();  // components on the node directors
};

struct ContactPair {  // beam node vs rigid cylinder, planar normal gap
  int beam = 0;
  int node = 0;       // node index within the beam
  int body = 0;
  Index node_q = -1;  // resolved global offsets
  Index body_q = -1;
  double radius = 0;
};

// One external constraint block; rows are concatenated in registration order.
// Encodings (count in parentheses):
//   ClampPosition (3): x - x_ref
//   ClampRotation (3): d1.dref2, d1.dref3, d2.dref3
//   JointAnchor   (3): x_b + a_i d_i^b - x_n - b_i d_i^n
//   JointAxis     (2): (axis_i d_i^b) . d_t^n for the two transverse t
//   Height        (1): x_z - z_ref
struct ExtBlock {
  enum class Kind { ClampPosition, ClampRotation, JointAnchor, JointAxis, Height };
  Kind kind;
  int rows = 0;
  Index frame_q = -1;   // primary frame (node or body)
  Index other_q = -1;   // second frame for joints (the beam node)
  Vec3 p_ref = Vec3::Zero();
  Mat3 dirs_ref = Mat3::Identity();  // columns are the reference directors
  Vec3 anchor_a = Vec3::Zero();      // on frame_q directors
  Vec3 anchor_b = Vec3::Zero();      // on other_q directors
  Vec3 axis = Vec3::Zero();
  int t1 = 1, t2 = 2;
  std::string label;
};

struct SystemLayout {
  Index n_q = 0;
  std::vector<Index> node_q;      // global offset of every beam node, beams in order
  std::vector<Index> body_q;      // global offset of every rigid body
  std::vector<Index> elec_index;  // 3 per beam node; also the charge ordering
  std::vector<Index> mech_index;
  Index n_int = 0;   // 6 per director frame
  Index n_ext = 0;
  Index n_contacts = 0;
  Index r_full = 0;  // 9 per beam node + 6 per body
  Index r_mech = 0;  // 6 per frame

  Index n_nodes() const { return Index(node_q.size()); }
  Index n_bodies() const { return Index(body_q.size()); }
  Index n_elec() const { return Index(elec_index.size()); }
};

/// Heaviside-type ground friction law; overflow-clamped logistic.
template <class S>
S friction_force_t(const S& v) {
  using std::exp;
  const double a = 20.0 * value(v);
  if (a > 700.0) return -20.0 * v;
  if (a < -700.0) return 1000.0 - 20.0 * v;
  return 1000.0 / (1.0 + exp(20.0 * v)) - 20.0 * v;
}

double friction_force(double v);

template <class S>
void eval_ext_block(const ExtBlock& b, const VecXT<S>& q, VecXT<S>& out,
                    Index row) {
  switch (b.kind) {
    case ExtBlock::Kind::ClampPosition: {
      out.template segment<3>(row) =
          q.template segment<3>(b.frame_q) - b.p_ref.cast<S>();
      break;
    }
    case ExtBlock::Kind::ClampRotation: {
      const auto f = FrameT<S>::unpack(q.template segment<12>(b.frame_q));
      const Vec3 r2 = b.dirs_ref.col(1), r3 = b.dirs_ref.col(2);
      out[row + 0] = f.d1.dot(r2.cast<S>());
      out[row + 1] = f.d1.dot(r3.cast<S>());
      out[row + 2] = f.d2.dot(r3.cast<S>());
      break;
    }
    case ExtBlock::Kind::JointAnchor: {
      const auto fb = FrameT<S>::unpack(q.template segment<12>(b.frame_q));
      const auto fn = FrameT<S>::unpack(q.template segment<12>(b.other_q));
      Vec3T<S> pa = fb.x, pb = fn.x;
      for (int i = 0; i < 3; ++i) {
        pa += b.anchor_a[i] * fb.director(i);
        pb += b.anchor_b[i] * fn.director(i);
      }
      out.template segment<3>(row) = pa - pb;
      break;
    }
    case ExtBlock::Kind::JointAxis: {
      const auto fb = FrameT<S>::unpack(q.template segment<12>(b.frame_q));
      const auto fn = FrameT<S>::unpack(q.template segment<12>(b.other_q));
      Vec3T<S> ab = b.axis[0] * fb.d1 + b.axis[1] * fb.d2 + b.axis[2] * fb.d3;
      out[row + 0] = ab.dot(fn.director(b.t1));
      out[row + 1] = ab.dot(fn.director(b.t2));
      break;
    }
    case ExtBlock::Kind::Height: {
      out[row] = q[b.frame_q + 2] - S{b.p_ref.z()};
      break;
    }
  }
}

// Accumulates d/dq (lambda . g_block) into `out`; lambda indexes the block rows.
template <class S>
void add_ext_block_force(const ExtBlock& b, const VecXT<S>& q,
                         const VecXT<S>& lambda, Index row, VecXT<S>& out) {
  switch (b.kind) {
    case ExtBlock::Kind::ClampPosition: {
      out.template segment<3>(b.frame_q) += lambda.template segment<3>(row);
      break;
    }
    case ExtBlock::Kind::ClampRotation: {
      const Vec3 r2 = b.dirs_ref.col(1), r3 = b.dirs_ref.col(2);
      out.template segment<3>(b.frame_q + 3) +=
          lambda[row] * r2.cast<S>() + lambda[row + 1] * r3.cast<S>();
      out.template segment<3>(b.frame_q + 6) += lambda[row + 2] * r3.cast<S>();
      break;
    }
    case ExtBlock::Kind::JointAnchor: {
      const auto lam = lambda.template segment<3>(row);
      out.template segment<3>(b.frame_q) += lam;
      out.template segment<3>(b.other_q) -= lam;
      for (int i = 0; i < 3; ++i) {
        if (b.anchor_a[i] != 0.0)
          out.template segment<3>(b.frame_q + 3 + 3 * i) += b.anchor_a[i] * lam;
        if (b.anchor_b[i] != 0.0)
          out.template segment<3>(b.other_q + 3 + 3 * i) -= b.anchor_b[i] * lam;
      }
      break;
    }
    case ExtBlock::Kind::JointAxis: {
      const auto fb = FrameT<S>::unpack(q.template segment<12>(b.frame_q));
      const auto fn = FrameT<S>::unpack(q.template segment<12>(b.other_q));
      Vec3T<S> ab = b.axis[0] * fb.d1 + b.axis[1] * fb.d2 + b.axis[2] * fb.d3;
      const int ts[2] = {b.t1, b.t2};
      for (int r = 0; r < 2; ++r) {
        const S& lam = lambda[row + r];
        const auto& dt = fn.director(ts[r]);
        for (int i = 0; i < 3; ++i)
          if (b.axis[i] != 0.0)
            out.template segment<3>(b.frame_q + 3 + 3 * i) +=
                (b.axis[i] * lam) * dt;
        out.template segment<3>(b.other_q + 3 + 3 * ts[r]) += lam * ab;
      }
      break;
    }
    case ExtBlock::Kind::Height: {
      out[b.frame_q + 2] += lambda[row];
      break;
    }
  }
}

// Planar normal gap between a beam node and a cylinder axis:
// g = |(x,y)_node - (x,y)_body| - R.  z is ignored.
template <class S>
S contact_gap(const ContactPair& c, const VecXT<S>& q) {
  const S dx = q[c.node_q + 0] - q[c.body_q + 0];
  const S dy = q[c.node_q + 1] - q[c.body_q + 1];
  const S r2 = dx * dx + dy * dy;
  if (value(r2) < 1e-24)
    throw SingularGap("contact gap undefined: node coincides with cylinder axis");
  using std::sqrt;
  return sqrt(r2) - c.radius;
}

template <class S>
void add_contact_force(const ContactPair& c, const VecXT<S>& q, const S& lambda,
                       VecXT<S>& out) {
  const S dx = q[c.node_q + 0] - q[c.body_q + 0];
  const S dy = q[c.node_q + 1] - q[c.body_q + 1];
  using std::sqrt;
  const S r = sqrt(dx * dx + dy * dy);
  const S nx = dx / r, ny = dy / r;
  out[c.node_q + 0] += lambda * nx;
  out[c.node_q + 1] += lambda * ny;
  out[c.body_q + 0] -= lambda * nx;
  out[c.body_q + 1] -= lambda * ny;
}

}  // namespace dea

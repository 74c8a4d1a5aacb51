#pragma once

#include "dea/types.hpp"

namespace dea {

// Per-node configuration of the electromechanically coupled beam: centroid
// position, director triad and the three electrical coordinates
// (potential phi_o plus the cross-section gradients alpha, beta).
// Packed order in global vectors: [x, d1, d2, d3, phi_o, alpha, beta].
template <class S>
struct NodeStateT {
  Vec3T<S> centroid = Vec3T<S>::Zero();
  Vec3T<S> d1 = Vec3T<S>::Zero();
  Vec3T<S> d2 = Vec3T<S>::Zero();
  Vec3T<S> d3 = Vec3T<S>::Zero();
  S phi_o{0};
  S alpha{0};
  S beta{0};

  static constexpr int kSize = 15;
  static constexpr int kMechSize = 12;

  template <class Derived>
  static NodeStateT unpack(const Eigen::MatrixBase<Derived>& q) {
    NodeStateT s;
    s.centroid = q.template segment<3>(0);
    s.d1 = q.template segment<3>(3);
    s.d2 = q.template segment<3>(6);
    s.d3 = q.template segment<3>(9);
    s.phi_o = q[12];
    s.alpha = q[13];
    s.beta = q[14];
    return s;
  }

  VecXT<S> pack() const {
    VecXT<S> q(kSize);
    q.template segment<3>(0) = centroid;
    q.template segment<3>(3) = d1;
    q.template segment<3>(6) = d2;
    q.template segment<3>(9) = d3;
    q[12] = phi_o;
    q[13] = alpha;
    q[14] = beta;
    return q;
  }

  const Vec3T<S>& director(int i) const {
    switch (i) {
      case 1:
        return d1;
      case 2:
        return d2;
      default:
        return d3;
    }
  }
};

using NodeState = NodeStateT<double>;

// Objective strain measures at one quadrature point.  Gamma: shear and
// elongation (dimensionless), K: bending and torsion (1/mm), Xi (V/mm)
// and Theta (V/mm^2): strain-like electrical variables, all expressed as
// component triples on the reference triad.
template <class S>
struct StrainStateT {
  Vec3T<S> Gamma = Vec3T<S>::Zero();
  Vec3T<S> K = Vec3T<S>::Zero();
  Vec3T<S> Xi = Vec3T<S>::Zero();
  Vec3T<S> Theta = Vec3T<S>::Zero();
};

using StrainState = StrainStateT<double>;

// Doubly symmetric cross-section.  J = I1 + I2 holds by construction.
struct CrossSection {
  double A = 0;   // mm^2
  double I1 = 0;  // mm^4
  double I2 = 0;  // mm^4
  double J = 0;   // mm^4
  double b = 0;   // mm, edge length for square sections

  static CrossSection square(double width);
  void validate() const;
};

struct Material {
  double rho = 0;  // g/mm^3
  double E = 0;    // MPa
  double G = 0;    // MPa
  double c1 = 0;   // N/V^2
  double c2 = 0;   // N/V^2
  double eta = 0;  // scales the Kelvin-Voigt tangents D5 = D6 = eta*I

  void validate() const;
};

// Work conjugates of (Gamma, K, Xi, Theta): the exact gradient of the beam
// free energy density at the same state.
template <class S>
struct BeamResultantsT {
  Vec3T<S> n_Gamma = Vec3T<S>::Zero();  // N
  Vec3T<S> m_K = Vec3T<S>::Zero();      // N*mm
  Vec3T<S> e_Xi = Vec3T<S>::Zero();
  Vec3T<S> e_Theta = Vec3T<S>::Zero();
};

using BeamResultants = BeamResultantsT<double>;

/// Max deviation of d_i . d_j from delta_ij over the six pairs.
double orthonormality_defect(const NodeState& s);

/// Throws ConstraintViolation if the triad is not orthonormal within tol.
void require_orthonormal(const NodeState& s, double tol, const char* where);

}  // namespace dea

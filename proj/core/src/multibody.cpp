#include "dea/multibody.hpp"

namespace dea {

double friction_force(double v) { return friction_force_t<double>(v); }

void RigidBody::finalize_inertia() {
  if (inertia.isZero()) {
    switch (kind) {
      case Kind::Cube: {
        const double s = 2.0 * half_edge;
        inertia.setConstant(mass * s * s / 6.0);
        break;
      }
      case Kind::Cylinder: {
        // principal axis of the cylinder along the body d3 direction
        const double Jp = mass * (3.0 * radius * radius + height * height) / 12.0;
        inertia = Vec3(Jp, Jp, 0.5 * mass * radius * radius);
        break;
      }
    }
  }
  // director inertias from the principal ones: E_i = (J_j + J_k - J_i)/2
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    euler_inertia[i] = 0.5 * (inertia[j] + inertia[k] - inertia[i]);
  }
}

}  // namespace dea

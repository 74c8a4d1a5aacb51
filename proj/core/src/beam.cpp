#include "dea/beam.hpp"

#include <cmath>
#include <sstream>

namespace dea {

CrossSection CrossSection::square(double width) {
  CrossSection cs;
  cs.b = width;
  cs.A = width * width;
  cs.I1 = std::pow(width, 4) / 12.0;
  cs.I2 = cs.I1;
  cs.J = cs.I1 + cs.I2;
  return cs;
}

void CrossSection::validate() const {
  if (!(A > 0) || !(I1 > 0) || !(I2 > 0))
    throw ConfigError("cross-section requires A, I1, I2 > 0", "beam.width");
  if (J != I1 + I2)
    throw ConfigError("polar moment must satisfy J = I1 + I2", "beam.width");
}

void Material::validate() const {
  if (!(E > 0)) throw ConfigError("material.E must be > 0", "material.E");
  if (!(G > 0)) throw ConfigError("material.G must be > 0", "material.G");
  if (!(rho > 0)) throw ConfigError("material.rho must be > 0", "material.rho");
  if (c1 < 0) throw ConfigError("material.c1 must be >= 0", "material.c1");
  if (c2 < 0) throw ConfigError("material.c2 must be >= 0", "material.c2");
  if (eta < 0) throw ConfigError("material.eta must be >= 0", "material.eta");
}

double orthonormality_defect(const NodeState& s) {
  const Vec3* d[3] = {&s.d1, &s.d2, &s.d3};
  double worst = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      const double target = (i == j) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(d[i]->dot(*d[j]) - target));
    }
  return worst;
}

void require_orthonormal(const NodeState& s, double tol, const char* where) {
  const double defect = orthonormality_defect(s);
  if (defect > tol) {
    std::ostringstream msg;
    msg << where << ": director triad violates orthonormality by " << defect
        << " (tol " << tol << ")";
    throw ConstraintViolation(msg.str());
  }
}

StrainState compute_strains(const NodeState& state, const NodeState& state_s,
                            const NodeState& reference, double tol) {
  require_orthonormal(state, tol, "compute_strains(state)");
  require_orthonormal(reference, tol, "compute_strains(reference)");
  return strain_measures(state, state_s);
}

}  // namespace dea

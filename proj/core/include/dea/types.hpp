#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/SparseCore>

#include <cstdint>
#include <stdexcept>
#include <string>

// Unit system throughout: g - mm - ms - V.  With these units forces come
// out in N (1 g*mm/ms^2 = 1 N), stresses in MPa and energies in N*mm.
namespace dea {

using Index = std::ptrdiff_t;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

template <class S>
using Vec3T = Eigen::Matrix<S, 3, 1>;
template <class S>
using VecXT = Eigen::Matrix<S, Eigen::Dynamic, 1>;

/// Violated kinematic contract (non-orthonormal directors, inconsistent state).
struct ConstraintViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Degenerate geometry in a gap evaluation (coincident points).
struct SingularGap : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Nonlinear solve did not converge.
struct SolveFailure : std::runtime_error {
  Index step = -1;
  SolveFailure(const std::string& what, Index step_index = -1)
      : std::runtime_error(what), step(step_index) {}
};

/// Configuration file errors; `field` names the offending entry.
struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(const std::string& what, std::string field_name = "")
      : std::runtime_error(what), field(std::move(field_name)) {}
};

/// Plain-double overload of the AD value accessor.
inline double value(double x) { return x; }

inline Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

}  // namespace dea

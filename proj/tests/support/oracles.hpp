#pragma once

// Test-only oracles, independent of the implementation paths they check:
// finite differences, cross-section quadrature of the pointwise coupled
// energy, and seeded random state generators.

#include <dea/beam.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

namespace oracles {

using dea::Mat3;
using dea::MatX;
using dea::Vec3;
using dea::VecX;

inline dea::Material table1() {
  dea::Material m;
  m.rho = 0.1;
  m.E = 654.9;
  m.G = 233.0;
  m.c1 = 5e-8;
  m.c2 = 1e-3;
  m.eta = 500.0;
  return m;
}

// Pointwise coupled energy density at cross-section point (X1, X2), written
// straight from the continuum form c1 E.E + c2 C_lin : (E x E); this is the
// integrand the closed-form beam density must reproduce after integration.
inline double pointwise_coupled_energy(const dea::StrainState& st,
                                       const dea::Material& mat, double X1,
                                       double X2) {
  const Vec3 a = st.Gamma + st.K.cross(Vec3(X1, X2, 0.0));
  const double E3 = st.Xi[2] + st.Theta[0] * X1 + st.Theta[1] * X2;
  const Vec3 E(st.Xi[0], st.Xi[1], E3);
  const double EE = E.squaredNorm();
  return mat.c1 * EE + mat.c2 * (EE + 2.0 * E3 * a.dot(E));
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(size_t(n), 0.0);
  w.assign(size_t(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) {
        x[size_t(i)] = t;
        w[size_t(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
        break;
      }
    }
  }
}

// 20x20 tensor quadrature of the pointwise energy over the square section.
inline double quadrature_coupled_energy(const dea::StrainState& st,
                                        const dea::Material& mat, double width) {
  std::vector<double> x, w;
  gauss_legendre(20, x, w);
  const double h = width / 2.0;
  double sum = 0.0;
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j)
      sum += w[i] * w[j] * pointwise_coupled_energy(st, mat, h * x[i], h * x[j]);
  return sum * h * h;
}

template <class F>
VecX fd_gradient(F&& f, const VecX& x, double h) {
  VecX g(x.size());
  VecX xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    const double fp = f(xp);
    xp[i] = x[i] - h;
    const double fm = f(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

template <class F>
MatX fd_jacobian(F&& f, const VecX& x, double h) {
  VecX xp = x;
  xp[0] += 0;  // probe output size
  const VecX f0 = f(x);
  MatX J(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    const VecX fp = f(xp);
    xp[i] = x[i] - h;
    const VecX fm = f(xp);
    xp[i] = x[i];
    J.col(i) = (fp - fm) / (2.0 * h);
  }
  return J;
}

inline Mat3 rotation(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

struct Rng {
  std::mt19937 gen;
  explicit Rng(unsigned seed) : gen(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  Vec3 vec3(double lo, double hi) {
    return Vec3(uniform(lo, hi), uniform(lo, hi), uniform(lo, hi));
  }
  Mat3 orthonormal_triad() {
    Mat3 A;
    for (int i = 0; i < 3; ++i) A.row(i) = vec3(-1, 1).transpose();
    Mat3 Q = Eigen::HouseholderQR<Mat3>(A).householderQ();
    if (Q.determinant() < 0) Q.col(2) *= -1.0;
    return Q;
  }
  dea::StrainState strain_state() {
    dea::StrainState st;
    st.Gamma = vec3(-0.3, 0.3);
    st.K = vec3(-0.3, 0.3);
    st.Xi = vec3(-5, 5);
    st.Theta = vec3(-5, 5);
    return st;
  }
};

}  // namespace oracles

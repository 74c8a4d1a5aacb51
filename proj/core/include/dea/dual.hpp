#pragma once

#include <Eigen/Core>

#include <cassert>
#include <cmath>

namespace dea {

// Forward-mode dual scalar with a dynamically sized derivative vector.
// An empty derivative vector means "structurally zero gradient"; constants
// stay cheap and only active variables carry allocations.  All residual
// evaluators in this project are templated on the scalar type, so seeding
// the inputs of a block with unit duals yields exact block Jacobians.
struct Dual {
  double v = 0.0;
  Eigen::VectorXd g;

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit by design
  Dual(double value, Eigen::VectorXd grad) : v(value), g(std::move(grad)) {}

  static Dual seeded(double value, Eigen::Index width, Eigen::Index slot) {
    Dual d(value, Eigen::VectorXd::Zero(width));
    d.g[slot] = 1.0;
    return d;
  }

  bool constant() const { return g.size() == 0; }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    if (!o.constant()) {
      if (constant())
        g = o.g;
      else
        g += o.g;
    }
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    if (!o.constant()) {
      if (constant())
        g = -o.g;
      else
        g -= o.g;
    }
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    if (!constant() && !o.constant()) {
      g = o.v * g + v * o.g;
    } else if (constant() && !o.constant()) {
      g = v * o.g;
    } else if (!constant()) {
      g *= o.v;
    }
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const double inv = 1.0 / o.v;
    if (!o.constant()) {
      if (constant())
        g = (-v * inv * inv) * o.g;
      else
        g = inv * g - (v * inv * inv) * o.g;
    } else if (!constant()) {
      g *= inv;
    }
    v *= inv;
    return *this;
  }

  Dual operator-() const { return constant() ? Dual(-v) : Dual(-v, -g); }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }

inline Dual operator+(Dual a, double b) { return a += Dual(b); }
inline Dual operator+(double a, Dual b) { return b += Dual(a); }
inline Dual operator-(Dual a, double b) { return a -= Dual(b); }
inline Dual operator-(double a, const Dual& b) { return Dual(a) - b; }
inline Dual operator*(Dual a, double b) { return a *= Dual(b); }
inline Dual operator*(double a, Dual b) { return b *= Dual(a); }
inline Dual operator/(Dual a, double b) { return a /= Dual(b); }
inline Dual operator/(double a, const Dual& b) { return Dual(a) / b; }

inline bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
inline bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
inline bool operator<=(const Dual& a, const Dual& b) { return a.v <= b.v; }
inline bool operator>=(const Dual& a, const Dual& b) { return a.v >= b.v; }
inline bool operator==(const Dual& a, const Dual& b) { return a.v == b.v; }
inline bool operator!=(const Dual& a, const Dual& b) { return a.v != b.v; }

inline Dual chain(double f, double dfdx, const Dual& x) {
  return x.constant() ? Dual(f) : Dual(f, dfdx * x.g);
}

inline Dual sqrt(const Dual& x) {
  const double s = std::sqrt(x.v);
  return chain(s, 0.5 / s, x);
}
inline Dual exp(const Dual& x) {
  const double e = std::exp(x.v);
  return chain(e, e, x);
}
inline Dual log(const Dual& x) { return chain(std::log(x.v), 1.0 / x.v, x); }
inline Dual sin(const Dual& x) { return chain(std::sin(x.v), std::cos(x.v), x); }
inline Dual cos(const Dual& x) { return chain(std::cos(x.v), -std::sin(x.v), x); }
inline Dual abs(const Dual& x) { return x.v < 0 ? -x : x; }
inline Dual pow(const Dual& x, double p) {
  return chain(std::pow(x.v, p), p * std::pow(x.v, p - 1.0), x);
}

inline double value(const Dual& x) { return x.v; }

// glue for Eigen expressions over Dual matrices
inline const Dual& conj(const Dual& x) { return x; }
inline const Dual& real(const Dual& x) { return x; }
inline double imag(const Dual&) { return 0.0; }
inline Dual abs2(const Dual& x) { return x * x; }

}  // namespace dea

namespace Eigen {

template <>
struct NumTraits<dea::Dual> : NumTraits<double> {
  using Real = dea::Dual;
  using NonInteger = dea::Dual;
  using Nested = dea::Dual;
  using Literal = double;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 16,
    MulCost = 32,
  };
};

template <typename BinaryOp>
struct ScalarBinaryOpTraits<dea::Dual, double, BinaryOp> {
  using ReturnType = dea::Dual;
};
template <typename BinaryOp>
struct ScalarBinaryOpTraits<double, dea::Dual, BinaryOp> {
  using ReturnType = dea::Dual;
};

}  // namespace Eigen

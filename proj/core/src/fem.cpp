#include "dea/fem.hpp"

#include <cmath>
#include <stdexcept>

namespace dea {

void BeamMesh::validate() const {
  if (n_nodes < 2) throw ConfigError("beam needs at least 2 nodes");
  for (const auto& e : elements) {
    if (!(e.L > 0)) throw ConfigError("element reference length must be > 0");
    if (e.a < 0 || e.b >= n_nodes || e.b != e.a + 1)
      throw ConfigError("element node indices must increase along the beam");
  }
  section.validate();
  material.validate();
}

const std::vector<QuadPoint>& quadrature_rule(int order) {
  // Gauss-Legendre on [0,1]
  static const std::vector<std::vector<QuadPoint>> rules = [] {
    std::vector<std::vector<QuadPoint>> r(6);
    r[1] = {{0.5, 1.0}};
    const double g2 = 0.5 / std::sqrt(3.0);
    r[2] = {{0.5 - g2, 0.5}, {0.5 + g2, 0.5}};
    const double g3 = 0.5 * std::sqrt(0.6);
    r[3] = {{0.5 - g3, 5.0 / 18.0}, {0.5, 8.0 / 18.0}, {0.5 + g3, 5.0 / 18.0}};
    const double a4 = 0.5 * std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(1.2));
    const double b4 = 0.5 * std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(1.2));
    const double wa = (18.0 + std::sqrt(30.0)) / 72.0;
    const double wb = (18.0 - std::sqrt(30.0)) / 72.0;
    r[4] = {{0.5 - b4, wb}, {0.5 - a4, wa}, {0.5 + a4, wa}, {0.5 + b4, wb}};
    const double a5 = 0.5 / 3.0 * std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0));
    const double b5 = 0.5 / 3.0 * std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0));
    const double w0 = 128.0 / 450.0;
    const double wA = (322.0 + 13.0 * std::sqrt(70.0)) / 1800.0;
    const double wB = (322.0 - 13.0 * std::sqrt(70.0)) / 1800.0;
    r[5] = {{0.5 - b5, wB}, {0.5 - a5, wA}, {0.5, w0}, {0.5 + a5, wA}, {0.5 + b5, wB}};
    return r;
  }();
  if (order < 1 || order > 5)
    throw std::domain_error("quadrature order must be in [1,5]");
  return rules[size_t(order)];
}

std::pair<NodeState, NodeState> interpolate(const BeamMesh& mesh,
                                            int element_index, double xi,
                                            const VecX& q) {
  if (xi < 0.0 || xi > 1.0)
    throw std::domain_error("interpolation coordinate must lie in [0,1]");
  const Element& e = mesh.elements.at(size_t(element_index));
  return interpolate_element(mesh, e, xi, q);
}

void add_beam_mass(const BeamMesh& mesh, std::vector<Triplet>& out) {
  // Consistent mass of linear shape functions: nodal pattern
  // L/6 * [2 1; 1 2] on the centroid, d1 and d2 blocks.
  for (const auto& e : mesh.elements) {
    const Index qa = mesh.node_q(e.a), qb = mesh.node_q(e.b);
    const double coeffs[3] = {mesh.mass.A_rho, mesh.mass.M1_rho,
                              mesh.mass.M2_rho};
    const Index offs[3] = {0, 3, 6};  // centroid, d1, d2; d3 rows are massless
    for (int blk = 0; blk < 3; ++blk) {
      const double m = coeffs[blk] * e.L / 6.0;
      if (m == 0.0) continue;
      for (int c = 0; c < 3; ++c) {
        const Index ia = qa + offs[blk] + c, ib = qb + offs[blk] + c;
        out.emplace_back(ia, ia, 2.0 * m);
        out.emplace_back(ib, ib, 2.0 * m);
        out.emplace_back(ia, ib, m);
        out.emplace_back(ib, ia, m);
      }
    }
  }
}

VecX internal_constraints(const NodeState& node) {
  VecX g(6);
  internal_constraints<double>(node.d1, node.d2, node.d3, g);
  return g;
}

Eigen::Matrix<double, 12, 6> internal_null_space(const NodeState& node,
                                                 double tol) {
  require_orthonormal(node, tol, "internal_null_space");
  Eigen::Matrix<double, 12, 6> P = Eigen::Matrix<double, 12, 6>::Zero();
  P.block<3, 3>(0, 0) = Mat3::Identity();
  P.block<3, 3>(3, 3) = -hat(node.d1);
  P.block<3, 3>(6, 3) = -hat(node.d2);
  P.block<3, 3>(9, 3) = -hat(node.d3);
  return P;
}

}  // namespace dea

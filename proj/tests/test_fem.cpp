#include <dea/dual.hpp>
#include <dea/fem.hpp>

#include "support/builders.hpp"
#include "support/oracles.hpp"

#include <Eigen/Dense>
#include <doctest.h>

using namespace dea;
using builders::make_mesh;
using oracles::Rng;

TEST_CASE("interpolation hits nodal values and is linear in between") {
  auto mesh = make_mesh(2);
  VecX q = builders::reference_q(mesh);
  q.segment<3>(mesh.node_q(0)) = Vec3(0, 0, 0);
  q.segment<3>(mesh.node_q(1)) = Vec3(0, 0, 1);

  auto [n0, d0] = interpolate(mesh, 0, 0.0, q);
  CHECK((n0.pack() - q.segment<15>(mesh.node_q(0))).norm() == 0.0);

  auto [nm, dm] = interpolate(mesh, 0, 0.5, q);
  CHECK((nm.centroid - Vec3(0, 0, 0.5)).norm() < 1e-15);
  CHECK((dm.centroid - Vec3(0, 0, 1.0) / mesh.elements[0].L).norm() < 1e-15);

  CHECK_THROWS_AS(interpolate(mesh, 0, 1.5, q), std::domain_error);
  CHECK_THROWS_AS(interpolate(mesh, 0, -0.1, q), std::domain_error);
}

TEST_CASE("interpolation partition of unity: constant fields stay constant") {
  auto mesh = make_mesh(3);
  Rng rng(11);
  VecX q = builders::reference_q(mesh);
  const VecX nodal = rng.vec3(-2, 2).replicate(5, 1);
  for (int i = 0; i < mesh.n_nodes; ++i) q.segment<15>(mesh.node_q(i)) = nodal;
  for (int t = 0; t < 50; ++t) {
    const double xi = rng.uniform(0, 1);
    auto [n, d] = interpolate(mesh, 1, xi, q);
    CHECK((n.pack() - nodal).lpNorm<Eigen::Infinity>() < 1e-14);
    CHECK(d.pack().lpNorm<Eigen::Infinity>() < 1e-14);
  }
}

namespace {

MatX dense_mass(const BeamMesh& mesh) {
  std::vector<Triplet> trips;
  add_beam_mass(mesh, trips);
  const Index n = Index(NodeState::kSize) * mesh.n_nodes;
  SpMat M(static_cast<int>(n), static_cast<int>(n));
  M.setFromTriplets(trips.begin(), trips.end());
  return MatX(M);
}

}  // namespace

TEST_CASE("single-element consistent mass reproduces the analytic block pattern") {
  auto mesh = make_mesh(1, 1.0, 1.0);
  mesh.mass = {1.0, 1.0, 1.0};  // unit data
  const MatX M = dense_mass(mesh);
  const double Le = mesh.elements[0].L;

  // centroid blocks: (A_rho*Le/6) * [2 1; 1 2] per component, verified
  // against 3-point quadrature of rho * N_I N_J
  const auto& rule = quadrature_rule(3);
  for (int I = 0; I < 2; ++I)
    for (int J = 0; J < 2; ++J) {
      double q3 = 0;
      for (const auto& qp : rule) {
        const double NI = I == 0 ? 1 - qp.xi : qp.xi;
        const double NJ = J == 0 ? 1 - qp.xi : qp.xi;
        q3 += qp.w * Le * NI * NJ;
      }
      const double expected = (I == J ? 2.0 : 1.0) * Le / 6.0;
      CHECK(q3 == doctest::Approx(expected).epsilon(1e-14));
      CHECK(M(15 * I, 15 * J) == doctest::Approx(expected).epsilon(1e-14));
    }

  // electrical sub-block identically zero
  for (int I = 0; I < 2; ++I)
    for (int c = 12; c < 15; ++c) {
      CHECK(M.row(15 * I + c).norm() == 0.0);
      CHECK(M.col(15 * I + c).norm() == 0.0);
    }
}

TEST_CASE("rigid translation recovers the total beam mass") {
  auto mesh = make_mesh(7, 10.0, 2.0);
  const MatX M = dense_mass(mesh);
  VecX u = VecX::Zero(M.rows());
  for (int i = 0; i < mesh.n_nodes; ++i)
    u.segment<3>(mesh.node_q(i)) = Vec3(1, 0, 0);
  const double total = u.dot(M * u);
  CHECK(total == doctest::Approx(mesh.mass.A_rho * mesh.length()).epsilon(1e-13));
}

TEST_CASE("mass matrix is PSD and positive definite on projected mechanical motions") {
  auto mesh = make_mesh(4);
  const MatX M = dense_mass(mesh);
  Eigen::SelfAdjointEigenSolver<MatX> es(M);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);

  // P' M P on one node block: translations and rotations see positive mass
  const NodeState node = mesh.reference[0];
  const auto P = internal_null_space(node);
  const MatX Mn = M.block<12, 12>(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> esp(
      P.transpose() * Mn * P);
  CHECK(esp.eigenvalues().minCoeff() > 1e-12);
}

TEST_CASE("internal forces vanish at the straight reference and any rigid rotation of it") {
  auto mesh = make_mesh(5);
  const VecX q0 = builders::reference_q(mesh);
  VecX f = VecX::Zero(q0.size());
  add_beam_internal_forces<double>(mesh, q0, f);
  CHECK(f.lpNorm<Eigen::Infinity>() < 1e-12);

  Rng rng(21);
  const Mat3 R = rng.orthonormal_triad();
  VecX qr = q0;
  for (int i = 0; i < mesh.n_nodes; ++i) {
    for (int blk = 0; blk < 4; ++blk)
      qr.segment<3>(mesh.node_q(i) + 3 * blk) =
          R * q0.segment<3>(mesh.node_q(i) + 3 * blk);
  }
  f.setZero();
  add_beam_internal_forces<double>(mesh, qr, f);
  CHECK(f.lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("assembled internal forces match finite differences of the assembled energy") {
  auto mesh = make_mesh(4);
  Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const VecX q = builders::random_admissible_q(mesh, rng);
    VecX f = VecX::Zero(q.size());
    add_beam_internal_forces<double>(mesh, q, f);
    const VecX fd = oracles::fd_gradient(
        [&](const VecX& x) { return beam_potential_energy<double>(mesh, x); }, q,
        1e-6);
    const double scale = std::max(1.0, fd.lpNorm<Eigen::Infinity>());
    CHECK((f - fd).lpNorm<Eigen::Infinity>() <= 1e-5 * scale);
  }
}

TEST_CASE("viscous forces: zero rate, rigid translation rate, and dissipation sign") {
  auto mesh = make_mesh(4);
  Rng rng(41);
  const VecX q = builders::random_admissible_q(mesh, rng);

  VecX f = VecX::Zero(q.size());
  add_beam_viscous_forces<double>(mesh, q, VecX::Zero(q.size()), f);
  CHECK(f.lpNorm<Eigen::Infinity>() == 0.0);

  VecX vtrans = VecX::Zero(q.size());
  for (int i = 0; i < mesh.n_nodes; ++i)
    vtrans.segment<3>(mesh.node_q(i)) = Vec3(0.3, -0.2, 0.9);
  f.setZero();
  add_beam_viscous_forces<double>(mesh, q, vtrans, f);
  CHECK(f.lpNorm<Eigen::Infinity>() < 1e-14);

  for (int trial = 0; trial < 20; ++trial) {
    VecX v(q.size());
    for (Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(-1, 1);
    f.setZero();
    add_beam_viscous_forces<double>(mesh, q, v, f);
    CHECK(f.dot(v) >= 0.0);
  }
}

TEST_CASE("viscous pairing equals the integrated quadratic dissipation rate") {
  auto mesh = make_mesh(3);
  Rng rng(51);
  const VecX q = builders::random_admissible_q(mesh, rng);
  VecX v(q.size());
  for (Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(-1, 1);
  VecX f = VecX::Zero(q.size());
  add_beam_viscous_forces<double>(mesh, q, v, f);

  // independent route: FD strain rates at the quadrature points
  const double h = 1e-7;
  double rate_sq = 0;
  const auto& rule = quadrature_rule(mesh.quadrature_order);
  const VecX qp_ = q + h * v, qm_ = q - h * v;
  for (const auto& e : mesh.elements) {
    for (const auto& qp : rule) {
      auto [ap, dp] = interpolate_element<double>(mesh, e, qp.xi, qp_);
      auto [am, dm] = interpolate_element<double>(mesh, e, qp.xi, qm_);
      const auto sp = strain_measures(ap, dp);
      const auto sm = strain_measures(am, dm);
      const Vec3 gr = (sp.Gamma - sm.Gamma) / (2 * h);
      const Vec3 kr = (sp.K - sm.K) / (2 * h);
      rate_sq += qp.w * e.L * mesh.material.eta *
                 (gr.squaredNorm() + kr.squaredNorm());
    }
  }
  CHECK(f.dot(v) == doctest::Approx(rate_sq).epsilon(1e-5));
}

TEST_CASE("internal constraints: values and ordering") {
  NodeState n = make_mesh(1).reference[0];
  CHECK(internal_constraints(n).lpNorm<Eigen::Infinity>() == 0.0);

  n.d1 *= 1.1;
  const VecX g = internal_constraints(n);
  CHECK(g[0] == doctest::Approx(0.21).epsilon(1e-12));
  for (int i = 1; i < 6; ++i) CHECK(std::abs(g[i]) < 1e-15);

  Rng rng(61);
  for (int t = 0; t < 30; ++t) {
    const Mat3 T = rng.orthonormal_triad();
    NodeState r;
    r.d1 = T.col(0);
    r.d2 = T.col(1);
    r.d3 = T.col(2);
    CHECK(internal_constraints(r).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("null space: identity-triad block, annihilation and rank") {
  auto mesh = make_mesh(1);
  const NodeState id = mesh.reference[0];  // d3 = e_x for this mesh
  const auto P = internal_null_space(id);
  CHECK((P.block<3, 3>(9, 3) + hat(id.d3)).norm() == 0.0);
  CHECK((P.block<3, 3>(0, 0) - Mat3::Identity()).norm() == 0.0);

  Rng rng(71);
  for (int t = 0; t < 30; ++t) {
    const Mat3 T = rng.orthonormal_triad();
    NodeState n;
    n.centroid = rng.vec3(-1, 1);
    n.d1 = T.col(0);
    n.d2 = T.col(1);
    n.d3 = T.col(2);

    // G_int of this node, by dual seeding of its 12 mechanical coordinates
    const VecX q12 = n.pack().head<12>();
    VecXT<Dual> qd(12);
    for (Index i = 0; i < 12; ++i) qd[i] = Dual::seeded(q12[i], 12, i);
    VecXT<Dual> g(6);
    internal_constraints<Dual>(qd.segment<3>(3), qd.segment<3>(6),
                               qd.segment<3>(9), g);
    MatX G = MatX::Zero(6, 12);
    for (Index i = 0; i < 6; ++i)
      if (!g[i].constant()) G.row(i) = g[i].g.transpose();

    const auto P2 = internal_null_space(n);
    CHECK((G * P2).lpNorm<Eigen::Infinity>() <= 1e-12);

    const MatX P2d = P2;
    Eigen::JacobiSVD<MatX> svd(P2d);
    CHECK(svd.singularValues()[5] > 1e-8);  // full column rank 6
  }

  NodeState bad = id;
  bad.d2 *= 2.0;
  CHECK_THROWS_AS(internal_null_space(bad), ConstraintViolation);
}

TEST_CASE("assembled energy converges to the analytic arc energy at rate >= 1") {
  const double kappa = 0.05;
  const double L = 10.0;
  const auto mat = oracles::table1();
  const auto cs = CrossSection::square(2.0);
  const double exact = 0.5 * mat.E * cs.I1 * kappa * kappa * L;
  std::vector<double> errs;
  for (int ne : {4, 8, 16, 32}) {
    auto mesh = make_mesh(ne, L, 2.0, mat);
    const VecX q = builders::arc_q(mesh, kappa);
    errs.push_back(std::abs(beam_potential_energy<double>(mesh, q) - exact));
  }
  for (size_t i = 0; i + 1 < errs.size(); ++i) {
    const double rate = std::log2(errs[i] / errs[i + 1]);
    CHECK(rate >= 1.0);
  }
}

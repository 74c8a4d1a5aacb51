#include <dea/beam.hpp>
#include <dea/dual.hpp>

#include "support/oracles.hpp"

#include <doctest.h>

using namespace dea;
using oracles::Rng;
using oracles::table1;

namespace {

NodeState identity_node() {
  NodeState n;
  n.d1 = Vec3::UnitX();
  n.d2 = Vec3::UnitY();
  n.d3 = Vec3::UnitZ();
  return n;
}

VecX pack_strains(const StrainState& st) {
  VecX x(12);
  x << st.Gamma, st.K, st.Xi, st.Theta;
  return x;
}

StrainState unpack_strains(const VecX& x) {
  StrainState st;
  st.Gamma = x.segment<3>(0);
  st.K = x.segment<3>(3);
  st.Xi = x.segment<3>(6);
  st.Theta = x.segment<3>(9);
  return st;
}

}  // namespace

TEST_CASE("dual numbers differentiate composite expressions") {
  const double x0 = 0.7, y0 = -1.3;
  const Dual x = Dual::seeded(x0, 2, 0);
  const Dual y = Dual::seeded(y0, 2, 1);
  const Dual f = sin(x * y) + exp(x) / (2.0 + y * y) - sqrt(x + 2.0);
  auto fval = [](double a, double b) {
    return std::sin(a * b) + std::exp(a) / (2.0 + b * b) - std::sqrt(a + 2.0);
  };
  CHECK(f.v == doctest::Approx(fval(x0, y0)).epsilon(1e-14));
  const double h = 1e-6;
  CHECK(f.g[0] ==
        doctest::Approx((fval(x0 + h, y0) - fval(x0 - h, y0)) / (2 * h))
            .epsilon(1e-8));
  CHECK(f.g[1] ==
        doctest::Approx((fval(x0, y0 + h) - fval(x0, y0 - h)) / (2 * h))
            .epsilon(1e-8));
}

TEST_CASE("strains vanish in the undeformed reference") {
  NodeState ref = identity_node();
  NodeState ds;  // all derivatives zero except the tangent
  ds.centroid = Vec3::UnitZ();
  const StrainState st = compute_strains(ref, ds, ref);
  CHECK(pack_strains(st).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("axial stretch shows up in Gamma_3 only") {
  NodeState ref = identity_node();
  NodeState ds;
  ds.centroid = Vec3(0, 0, 1.1);
  const StrainState st = compute_strains(ref, ds, ref);
  CHECK(st.Gamma[0] == 0.0);
  CHECK(st.Gamma[1] == 0.0);
  CHECK(st.Gamma[2] == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(st.K.norm() == 0.0);
}

TEST_CASE("constant-rate director rotation is recovered as K, against an FD oracle") {
  const double kappa = 0.37;
  const double s0 = 0.3, h = 1e-6;
  auto directors_at = [&](double s) {
    return oracles::rotation(Vec3::UnitX(), kappa * s);
  };
  NodeState st = identity_node();
  const Mat3 R = directors_at(s0);
  st.d1 = R.col(0);
  st.d2 = R.col(1);
  st.d3 = R.col(2);
  NodeState ds;
  const Mat3 Rp = directors_at(s0 + h), Rm = directors_at(s0 - h);
  ds.d1 = (Rp.col(0) - Rm.col(0)) / (2 * h);
  ds.d2 = (Rp.col(1) - Rm.col(1)) / (2 * h);
  ds.d3 = (Rp.col(2) - Rm.col(2)) / (2 * h);
  ds.centroid = st.d3;  // inextensible bend: tangent follows d3
  const StrainState out = compute_strains(st, ds, identity_node());
  CHECK(out.K[0] == doctest::Approx(kappa).epsilon(1e-9));
  CHECK(std::abs(out.K[1]) < 1e-9);
  CHECK(std::abs(out.K[2]) < 1e-9);
  CHECK(out.Gamma.lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("non-orthonormal directors are rejected") {
  NodeState bad = identity_node();
  bad.d1 *= 1.1;
  NodeState ds;
  ds.centroid = Vec3::UnitZ();
  CHECK_THROWS_AS(compute_strains(bad, ds, identity_node()),
                  ConstraintViolation);
}

TEST_CASE("free energy: reference minimum and pure elongation") {
  const auto cs = CrossSection::square(2.0);
  const auto mat = table1();
  StrainState st;
  CHECK(free_energy_density(st, cs, mat) == 0.0);

  const double eps = 1e-3;
  st.Gamma = Vec3(0, 0, eps);
  CHECK(free_energy_density(st, cs, mat) ==
        doctest::Approx(0.5 * mat.E * cs.A * eps * eps).epsilon(1e-14));
}

TEST_CASE("closed-form coupled energy equals 20x20 cross-section quadrature") {
  const auto cs = CrossSection::square(2.0);
  const auto mat = table1();
  Rng rng(101);
  for (int trial = 0; trial < 120; ++trial) {
    const StrainState st = rng.strain_state();
    StrainState mech_only = st;
    mech_only.Xi.setZero();
    mech_only.Theta.setZero();
    const double closed = free_energy_density(st, cs, mat) -
                          free_energy_density(mech_only, cs, mat);
    const double quad = oracles::quadrature_coupled_energy(st, mat, cs.b);
    CHECK(std::abs(closed - quad) <= 1e-10 * std::max(1.0, std::abs(quad)));
  }
}

TEST_CASE("resultants: trivial values") {
  const auto cs = CrossSection::square(2.0);
  const auto mat = table1();
  StrainState st;
  auto r = resultants(st, cs, mat);
  CHECK(r.n_Gamma.norm() == 0.0);
  CHECK(r.m_K.norm() == 0.0);
  CHECK(r.e_Xi.norm() == 0.0);
  CHECK(r.e_Theta.norm() == 0.0);

  const double eps = 2e-3;
  st.Gamma = Vec3(0, 0, eps);
  r = resultants(st, cs, mat);
  CHECK(r.n_Gamma[2] == doctest::Approx(mat.E * cs.A * eps).epsilon(1e-14));
  CHECK(r.n_Gamma.head<2>().norm() == 0.0);
  CHECK(r.m_K.norm() == 0.0);
}

TEST_CASE("resultants match finite differences of the energy") {
  const auto cs = CrossSection::square(2.0);
  const auto mat = table1();
  Rng rng(202);
  for (int trial = 0; trial < 120; ++trial) {
    const StrainState st = rng.strain_state();
    const VecX x0 = pack_strains(st);
    const VecX fd = oracles::fd_gradient(
        [&](const VecX& x) {
          return free_energy_density(unpack_strains(x), cs, mat);
        },
        x0, 1e-7);
    const auto r = resultants(st, cs, mat);
    VecX analytic(12);
    analytic << r.n_Gamma, r.m_K, r.e_Xi, r.e_Theta;
    for (int i = 0; i < 12; ++i) {
      const double scale = std::max(1.0, std::abs(analytic[i]));
      CHECK(std::abs(analytic[i] - fd[i]) <= 1e-5 * scale);
    }
  }
}

TEST_CASE("viscous stress: Kelvin-Voigt law") {
  auto mat = table1();
  Vec3 Mv, Nv;
  viscous_stress<double>(Vec3::Zero(), Vec3::Zero(), mat, Mv, Nv);
  CHECK(Mv.norm() == 0.0);
  CHECK(Nv.norm() == 0.0);

  viscous_stress<double>(Vec3(1, 0, 0), Vec3::Zero(), mat, Mv, Nv);
  CHECK(Mv == Vec3(500, 0, 0));

  mat.eta = 15.0;
  viscous_stress<double>(Vec3::Zero(), Vec3(0, 2, 0), mat, Mv, Nv);
  CHECK(Nv == Vec3(0, 30, 0));
}

TEST_CASE("objectivity: rigid rotation leaves strain components and energy unchanged") {
  const auto cs = CrossSection::square(2.0);
  const auto mat = table1();
  Rng rng(303);
  for (int trial = 0; trial < 40; ++trial) {
    NodeState st;
    const Mat3 T = rng.orthonormal_triad();
    st.d1 = T.col(0);
    st.d2 = T.col(1);
    st.d3 = T.col(2);
    st.alpha = rng.uniform(-2, 2);
    st.beta = rng.uniform(-2, 2);
    NodeState ds;
    ds.centroid = rng.vec3(-1, 1);
    ds.d1 = rng.vec3(-0.5, 0.5);
    ds.d2 = rng.vec3(-0.5, 0.5);
    ds.d3 = rng.vec3(-0.5, 0.5);
    ds.phi_o = rng.uniform(-3, 3);
    ds.alpha = rng.uniform(-3, 3);
    ds.beta = rng.uniform(-3, 3);

    const Mat3 R = rng.orthonormal_triad();
    NodeState st_r = st, ds_r = ds;
    st_r.d1 = R * st.d1;
    st_r.d2 = R * st.d2;
    st_r.d3 = R * st.d3;
    ds_r.centroid = R * ds.centroid;
    ds_r.d1 = R * ds.d1;
    ds_r.d2 = R * ds.d2;
    ds_r.d3 = R * ds.d3;

    const StrainState a = strain_measures(st, ds);
    const StrainState b = strain_measures(st_r, ds_r);
    CHECK((pack_strains(a) - pack_strains(b)).lpNorm<Eigen::Infinity>() <=
          1e-12);
    CHECK(std::abs(free_energy_density(a, cs, mat) -
                   free_energy_density(b, cs, mat)) <=
          1e-12 * std::max(1.0, std::abs(free_energy_density(a, cs, mat))));
  }
}

TEST_CASE("pure shear and pure bending receive no electrical actuation when Xi3 = 0") {
  const auto cs = CrossSection::square(2.0);
  const auto mat = table1();
  Rng rng(404);
  for (int trial = 0; trial < 50; ++trial) {
    StrainState st;  // zero mechanical strain
    st.Xi = Vec3(rng.uniform(-5, 5), rng.uniform(-5, 5), 0.0);
    st.Theta.setZero();
    const auto r = resultants(st, cs, mat);
    CHECK(std::abs(r.n_Gamma[0]) == 0.0);
    CHECK(std::abs(r.n_Gamma[1]) == 0.0);
    CHECK(std::abs(r.m_K[0]) == 0.0);
    CHECK(std::abs(r.m_K[1]) == 0.0);
  }
}

TEST_CASE("electromechanical decoupling at zero field reduces to Saint-Venant-Kirchhoff") {
  const auto cs = CrossSection::square(2.0);
  const auto mat = table1();
  Rng rng(505);
  for (int trial = 0; trial < 50; ++trial) {
    StrainState st = rng.strain_state();
    st.Xi.setZero();
    st.Theta.setZero();
    const double svk =
        0.5 * (mat.G * cs.A * (st.Gamma[0] * st.Gamma[0] + st.Gamma[1] * st.Gamma[1]) +
               mat.E * cs.A * st.Gamma[2] * st.Gamma[2]) +
        0.5 * (mat.E * cs.I1 * st.K[0] * st.K[0] +
               mat.E * cs.I2 * st.K[1] * st.K[1] +
               mat.G * cs.J * st.K[2] * st.K[2]);
    CHECK(free_energy_density(st, cs, mat) == doctest::Approx(svk).epsilon(1e-14));
  }
}

TEST_CASE("cross-section factory enforces the polar moment identity") {
  const auto cs = CrossSection::square(2.0);
  CHECK(cs.A == 4.0);
  CHECK(cs.I1 == doctest::Approx(16.0 / 12.0).epsilon(1e-15));
  CHECK(cs.J == cs.I1 + cs.I2);
  CHECK_NOTHROW(cs.validate());
}

#include "dea/ocp.hpp"

#include <algorithm>
#include <sstream>

namespace dea {

namespace {

template <class S>
VecXT<S> seg(const VecXT<S>& xin, Index pos, Index len) {
  return xin.segment(pos, len);
}

template <class F>
ResidualBlock make_block(std::string name, Index rows,
                         std::vector<std::pair<Index, Index>> inputs, F f) {
  ResidualBlock b;
  b.name = std::move(name);
  b.rows = rows;
  b.inputs = std::move(inputs);
  b.eval_d = [f](const VecX& xin) -> VecX { return f(xin); };
  b.eval_ad = [f](const VecXT<Dual>& xin) -> VecXT<Dual> { return f(xin); };
  return b;
}

VecX gather(const VecX& x, const ResidualBlock& b) {
  VecX xin(b.input_size());
  Index pos = 0;
  for (auto& [off, len] : b.inputs) {
    xin.segment(pos, len) = x.segment(off, len);
    pos += len;
  }
  return xin;
}

void block_jacobian(const ResidualBlock& b, const VecX& x,
                    std::vector<Triplet>& out) {
  const Index w = b.input_size();
  VecXT<Dual> xin(w);
  {
    Index pos = 0;
    for (auto& [off, len] : b.inputs) {
      for (Index k = 0; k < len; ++k)
        xin[pos + k] = Dual::seeded(x[off + k], w, pos + k);
      pos += len;
    }
  }
  const VecXT<Dual> r = b.eval_ad(xin);
  for (Index i = 0; i < r.size(); ++i) {
    if (r[i].constant()) continue;
    Index pos = 0;
    for (auto& [off, len] : b.inputs) {
      for (Index k = 0; k < len; ++k) {
        const double v = r[i].g[pos + k];
        if (v != 0.0) out.emplace_back(b.row + i, off + k, v);
      }
      pos += len;
    }
  }
}

}  // namespace

VecX Transcription::eval_eq(const VecX& x) const {
  VecX r(m_eq);
  for (const auto& b : eq_blocks) r.segment(b.row, b.rows) = b.eval_d(gather(x, b));
  return r;
}

VecX Transcription::eval_ineq(const VecX& x) const {
  VecX r(m_ineq);
  for (const auto& b : ineq_blocks)
    r.segment(b.row, b.rows) = b.eval_d(gather(x, b));
  return r;
}

SpMat Transcription::eq_jacobian(const VecX& x) const {
  std::vector<Triplet> trips;
  for (const auto& b : eq_blocks) block_jacobian(b, x, trips);
  SpMat J(int(m_eq), int(dl.total()));
  J.setFromTriplets(trips.begin(), trips.end());
  return J;
}

SpMat Transcription::ineq_jacobian(const VecX& x) const {
  std::vector<Triplet> trips;
  for (const auto& b : ineq_blocks) block_jacobian(b, x, trips);
  SpMat J(int(m_ineq), int(dl.total()));
  J.setFromTriplets(trips.begin(), trips.end());
  return J;
}

Transcription transcribe(const Model& m, int N, double dt,
                         const BoundaryData& boundary) {
  if (N < 2)
    throw ConfigError("horizon must have at least 2 steps", "horizon.steps");
  Transcription tr;
  tr.model = &m;
  tr.dt = dt;
  tr.boundary = boundary;
  const auto& L = m.layout;
  tr.dl.nq = L.n_q;
  tr.dl.n_ext = L.n_ext;
  tr.dl.n_c = L.n_contacts;
  tr.dl.nQ = L.n_elec();
  tr.dl.N = N;
  tr.dl.has_terminal_multipliers = boundary.pN.has_value();
  const auto& dl = tr.dl;
  const Model* mp = &m;

  const Index nq = dl.nq, n_ext = dl.n_ext, n_c = dl.n_c, nQ = dl.nQ;
  auto q_in = [&](int n) { return std::pair<Index, Index>{dl.q_off(n), nq}; };
  auto le_in = [&](int n) {
    return std::pair<Index, Index>{dl.lam_ext_off(n), n_ext};
  };
  auto lc_in = [&](int n) {
    return std::pair<Index, Index>{dl.lam_c_off(n), n_c};
  };
  auto Q_in = [&](int n) { return std::pair<Index, Index>{dl.Q_off(n), nQ}; };

  Index row = 0;
  auto push_eq = [&](ResidualBlock b) {
    b.row = row;
    row += b.rows;
    tr.eq_blocks.push_back(std::move(b));
  };

  // initial configuration: mechanical rows of q_0 pinned
  {
    const VecX q0bar = boundary.q0;
    const Index n_mech = Index(L.mech_index.size());
    push_eq(make_block(
        "init.config", n_mech, {q_in(0)}, [mp, q0bar](const auto& xin) {
          using S = typename std::decay_t<decltype(xin)>::Scalar;
          const auto& idx = mp->layout.mech_index;
          VecXT<S> out(Index(idx.size()));
          for (size_t i = 0; i < idx.size(); ++i)
            out[Index(i)] = xin[idx[i]] - q0bar[idx[i]];
          return out;
        }));
  }

  // initial momentum, projected onto the mechanical null-space rows
  {
    const VecX p0 = boundary.p0;
    const double h = dt;
    push_eq(make_block(
        "init.momentum", L.r_mech,
        {q_in(0), q_in(1), le_in(0), lc_in(0), Q_in(0)},
        [mp, p0, h, nq, n_ext, n_c, nQ](const auto& xin) {
          using S = typename std::decay_t<decltype(xin)>::Scalar;
          const VecXT<S> q0 = seg(xin, 0, nq);
          const VecXT<S> q1 = seg(xin, nq, nq);
          const VecXT<S> le = seg(xin, 2 * nq, n_ext);
          const VecXT<S> lc = seg(xin, 2 * nq + n_ext, n_c);
          const VecXT<S> Q0 = seg(xin, 2 * nq + n_ext + n_c, nQ);
          const VecXT<S> pm = legendre_minus(*mp, q0, q1, le, lc, Q0, h);
          VecXT<S> diff(pm.size());
          for (Index i = 0; i < pm.size(); ++i) diff[i] = p0[i] - pm[i];
          return project_mech(*mp, q0, diff);
        }));
  }

  // interior momentum matching: the projected discrete Euler-Lagrange rows
  for (int n = 1; n <= N - 1; ++n) {
    const double h = dt;
    push_eq(make_block(
        "momentum." + std::to_string(n), L.r_full,
        {q_in(n - 1), q_in(n), q_in(n + 1), le_in(n), lc_in(n), Q_in(n - 1),
         Q_in(n)},
        [mp, h, nq, n_ext, n_c, nQ](const auto& xin) {
          using S = typename std::decay_t<decltype(xin)>::Scalar;
          const VecXT<S> qm = seg(xin, 0, nq);
          const VecXT<S> qn = seg(xin, nq, nq);
          const VecXT<S> qp = seg(xin, 2 * nq, nq);
          const VecXT<S> le = seg(xin, 3 * nq, n_ext);
          const VecXT<S> lc = seg(xin, 3 * nq + n_ext, n_c);
          const VecXT<S> Qm = seg(xin, 3 * nq + n_ext + n_c, nQ);
          const VecXT<S> Qn = seg(xin, 3 * nq + n_ext + n_c + nQ, nQ);
          return momentum_match_residual(*mp, qm, qn, qp, le, lc, Qm, Qn, h);
        }));
  }

  // configuration constraints g(q_n) = 0 for n = 1..N.  When the final
  // configuration is fully prescribed, g(q_N) is implied by the terminal
  // condition; keeping both would make the equality Jacobian exactly
  // rank-deficient, so the implied block is dropped and the target is
  // validated instead.
  const bool full_final = boundary.qN_mech_full.has_value();
  if (full_final) {
    const VecX& qN = *boundary.qN_mech_full;
    if (eval_g_int<double>(m, qN).lpNorm<Eigen::Infinity>() > 1e-9 ||
        (L.n_ext > 0 &&
         eval_g_ext<double>(m, qN).lpNorm<Eigen::Infinity>() > 1e-9))
      throw ConfigError("terminal configuration violates the constraints",
                        "final_condition");
  }
  for (int n = 1; n <= (full_final ? N - 1 : N); ++n) {
    push_eq(make_block(
        "constraints." + std::to_string(n), L.n_int + L.n_ext, {q_in(n)},
        [mp](const auto& xin) {
          using S = typename std::decay_t<decltype(xin)>::Scalar;
          VecXT<S> out(mp->layout.n_int + mp->layout.n_ext);
          out.segment(0, mp->layout.n_int) = eval_g_int(*mp, xin);
          if (mp->layout.n_ext > 0)
            out.segment(mp->layout.n_int, mp->layout.n_ext) =
                eval_g_ext(*mp, xin);
          return out;
        }));
  }

  // contact complementarity g_c(q_{n+1}) .* lam_n = 0
  if (n_c > 0) {
    const int n_comp = dl.has_terminal_multipliers ? N + 1 : N;
    for (int n = 0; n < n_comp; ++n) {
      const int q_at = std::min(n + 1, N);
      ResidualBlock b = make_block(
          "complementarity." + std::to_string(n), n_c, {q_in(q_at), lc_in(n)},
          [mp, nq, n_c](const auto& xin) {
            using S = typename std::decay_t<decltype(xin)>::Scalar;
            const VecXT<S> q = seg(xin, 0, nq);
            const VecXT<S> lam = seg(xin, nq, n_c);
            VecXT<S> out = eval_g_contact(*mp, q);
            for (Index i = 0; i < out.size(); ++i) out[i] = out[i] * lam[i];
            return out;
          });
      b.complementarity = true;
      push_eq(std::move(b));
    }
  }

  // terminal momentum condition (mechanical rows), with its own multipliers
  if (boundary.pN.has_value()) {
    const VecX pN = *boundary.pN;
    const double h = dt;
    push_eq(make_block(
        "final.momentum", L.r_mech,
        {q_in(N - 1), q_in(N), le_in(N), lc_in(N), Q_in(N - 1)},
        [mp, pN, h, nq, n_ext, n_c, nQ](const auto& xin) {
          using S = typename std::decay_t<decltype(xin)>::Scalar;
          const VecXT<S> qm = seg(xin, 0, nq);
          const VecXT<S> qN = seg(xin, nq, nq);
          const VecXT<S> le = seg(xin, 2 * nq, n_ext);
          const VecXT<S> lc = seg(xin, 2 * nq + n_ext, n_c);
          const VecXT<S> Qm = seg(xin, 2 * nq + n_ext + n_c, nQ);
          VecXT<S> pp = legendre_plus(*mp, qm, qN, le, lc, Qm, h);
          for (Index i = 0; i < pp.size(); ++i) pp[i] -= pN[i];
          return project_mech(*mp, qN, pp);
        }));
  }

  // terminal configuration condition: full mechanical state or components
  if (boundary.qN_mech_full.has_value()) {
    const VecX qNbar = *boundary.qN_mech_full;
    const Index n_mech = Index(L.mech_index.size());
    push_eq(make_block(
        "final.config", n_mech, {q_in(N)}, [mp, qNbar](const auto& xin) {
          using S = typename std::decay_t<decltype(xin)>::Scalar;
          const auto& idx = mp->layout.mech_index;
          VecXT<S> out(Index(idx.size()));
          for (size_t i = 0; i < idx.size(); ++i)
            out[Index(i)] = xin[idx[i]] - qNbar[idx[i]];
          return out;
        }));
  } else if (!boundary.qN_components.empty()) {
    const auto comps = boundary.qN_components;
    push_eq(make_block(
        "final.components", Index(comps.size()), {q_in(N)},
        [comps](const auto& xin) {
          using S = typename std::decay_t<decltype(xin)>::Scalar;
          VecXT<S> out(Index(comps.size()));
          for (size_t i = 0; i < comps.size(); ++i)
            out[Index(i)] = xin[comps[i].first] - comps[i].second;
          return out;
        }));
  }
  tr.m_eq = row;

  // inequality rows: gaps at n = 1..N
  Index irow = 0;
  for (int n = 1; n <= N && n_c > 0; ++n) {
    ResidualBlock b = make_block(
        "gap." + std::to_string(n), n_c, {q_in(n)}, [mp](const auto& xin) {
          using S = typename std::decay_t<decltype(xin)>::Scalar;
          (void)sizeof(S);
          return eval_g_contact(*mp, xin);
        });
    b.row = irow;
    irow += b.rows;
    tr.ineq_blocks.push_back(std::move(b));
  }
  tr.m_ineq = irow;
  return tr;
}

NlpProblem Transcription::problem() const {
  NlpProblem p;
  const Transcription* tp = this;
  p.n = dl.total();
  p.m_eq = m_eq;
  p.m_ineq = m_ineq;
  p.lb = VecX::Constant(p.n, -NlpProblem::inf());
  p.ub = VecX::Constant(p.n, NlpProblem::inf());
  for (int n = 0; n < dl.lam_blocks(); ++n)
    p.ub.segment(dl.lam_c_off(n), dl.n_c).setZero();  // lam_c <= 0

  const Model* mp = model;
  const DecisionLayout d = dl;
  p.objective = [mp, d](const VecX& x) { return ocp_objective(*mp, d, x); };
  p.objective_gradient = [mp, d](const VecX& x) {
    return ocp_objective_gradient(*mp, d, x);
  };
  p.objective_hessian = ocp_objective_hessian(*mp, d);
  p.equality = [tp](const VecX& x) { return tp->eval_eq(x); };
  p.inequality = [tp](const VecX& x) { return tp->eval_ineq(x); };
  p.eq_jacobian = [tp](const VecX& x) { return tp->eq_jacobian(x); };
  p.ineq_jacobian = [tp](const VecX& x) { return tp->ineq_jacobian(x); };

  for (const auto& b : eq_blocks) {
    for (Index i = 0; i < b.rows; ++i)
      for (auto& [off, len] : b.inputs)
        for (Index k = 0; k < len; ++k)
          p.eq_pattern.emplace_back(b.row + i, off + k);
    if (b.complementarity)
      for (Index i = 0; i < b.rows; ++i)
        p.complementarity_rows.push_back(b.row + i);
  }
  for (const auto& b : ineq_blocks)
    for (Index i = 0; i < b.rows; ++i)
      for (auto& [off, len] : b.inputs)
        for (Index k = 0; k < len; ++k)
          p.ineq_pattern.emplace_back(b.row + i, off + k);
  return p;
}

double ocp_objective(const Model& m, const DecisionLayout& dl, const VecX& x) {
  double J = 0;
  for (int n = 1; n <= dl.N; ++n)
    for (Index e : m.layout.elec_index) {
      const double d = x[dl.q_off(n) + e] - x[dl.q_off(n - 1) + e];
      J += d * d;
    }
  return J;
}

VecX ocp_objective_gradient(const Model& m, const DecisionLayout& dl,
                            const VecX& x) {
  VecX g = VecX::Zero(dl.total());
  for (int n = 1; n <= dl.N; ++n)
    for (Index e : m.layout.elec_index) {
      const double d = x[dl.q_off(n) + e] - x[dl.q_off(n - 1) + e];
      g[dl.q_off(n) + e] += 2.0 * d;
      g[dl.q_off(n - 1) + e] -= 2.0 * d;
    }
  return g;
}

SpMat ocp_objective_hessian(const Model& m, const DecisionLayout& dl) {
  std::vector<Triplet> trips;
  for (int n = 1; n <= dl.N; ++n)
    for (Index e : m.layout.elec_index) {
      const Index a = dl.q_off(n - 1) + e, b = dl.q_off(n) + e;
      trips.emplace_back(a, a, 2.0);
      trips.emplace_back(b, b, 2.0);
      trips.emplace_back(a, b, -2.0);
      trips.emplace_back(b, a, -2.0);
    }
  SpMat H(int(dl.total()), int(dl.total()));
  H.setFromTriplets(trips.begin(), trips.end());
  return H;
}

VecX initial_guess(const Model& m, const DecisionLayout& dl,
                   const BoundaryData& boundary, const VecX& q_target,
                   const InitPattern& pattern) {
  VecX x = VecX::Zero(dl.total());
  const auto& L = m.layout;
  x.segment(dl.q_off(0), dl.nq) = boundary.q0;
  for (int n = 1; n <= dl.N; ++n) {
    const double t = double(n) / dl.N;
    VecX q = boundary.q0;
    for (Index i : L.mech_index)
      q[i] = (1.0 - t) * boundary.q0[i] + t * q_target[i];
    for (Index node = 0; node < L.n_nodes(); ++node) {
      const bool odd = (node % 2) == 0;  // 1-based node numbering
      const Vec3 phi = pattern.scale * (odd ? pattern.odd : pattern.even);
      for (int c = 0; c < 3; ++c)
        q[L.elec_index[size_t(3 * node + c)]] = phi[c];
    }
    x.segment(dl.q_off(n), dl.nq) = q;
  }
  return x;  // multipliers and charges remain zero
}

VecX pack_trajectory(const Model& m, const DecisionLayout& dl,
                     const Trajectory& tr) {
  VecX x = VecX::Zero(dl.total());
  for (int n = 0; n <= dl.N; ++n)
    x.segment(dl.q_off(n), dl.nq) = tr.q.at(size_t(n));
  for (int n = 0; n < dl.N; ++n) {
    x.segment(dl.lam_ext_off(n), dl.n_ext) = tr.lam_ext.at(size_t(n));
    if (dl.n_c > 0) x.segment(dl.lam_c_off(n), dl.n_c) = tr.lam_c.at(size_t(n));
    x.segment(dl.Q_off(n), dl.nQ) = tr.charges.at(size_t(n));
  }
  return x;
}

Trajectory unpack_trajectory(const Model& m, const DecisionLayout& dl,
                             const VecX& x, double dt) {
  (void)m;
  Trajectory tr;
  tr.dt = dt;
  for (int n = 0; n <= dl.N; ++n) tr.q.push_back(x.segment(dl.q_off(n), dl.nq));
  for (int n = 0; n < dl.N; ++n) {
    tr.lam_ext.push_back(x.segment(dl.lam_ext_off(n), dl.n_ext));
    tr.lam_c.push_back(x.segment(dl.lam_c_off(n), dl.n_c));
    tr.charges.push_back(x.segment(dl.Q_off(n), dl.nQ));
  }
  return tr;
}

}  // namespace dea

#include "speclab/dirac_point.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace speclab {

namespace {

// Inner products on the xi=pi fiber in the plane-wave basis e^{i(pi+2 pi m)x}:
// <f,g> = sum_m conj(f_m) g_m, conjugate-linear in the first slot.
cplx fiber_inner(const std::vector<cplx>& f, const std::vector<cplx>& g) {
  cplx s(0.0, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) s += std::conj(f[i]) * g[i];
  return s;
}

std::vector<cplx> apply_Dx(const std::vector<cplx>& f, int K) {
  std::vector<cplx> out(f.size());
  for (int m = -K; m <= K; ++m) out[m + K] = (kPi + 2.0 * kPi * m) * f[m + K];
  return out;
}

std::vector<cplx> apply_potential(const std::vector<cplx>& f, const PeriodicFunction& P, int K) {
  std::vector<cplx> out(f.size(), cplx(0.0, 0.0));
  const int bw = P.max_harmonic();
  for (int m = -K; m <= K; ++m) {
    cplx s(0.0, 0.0);
    for (int k = std::max(-K, m - bw); k <= std::min(K, m + bw); ++k)
      s += P.coeff(m - k) * f[k + K];
    out[m + K] = s;
  }
  return out;
}

// conj(phi_plus) in the same basis: coefficients d'_m = conj(d_{-m-1}).
std::vector<cplx> conjugate_in_basis(const std::vector<cplx>& d, int K) {
  std::vector<cplx> out(d.size(), cplx(0.0, 0.0));
  for (int m = -K; m <= K; ++m) {
    const int src = -m - 1;
    if (src >= -K && src <= K) out[m + K] = std::conj(d[src + K]);
  }
  return out;
}

}  // namespace

double DiracPoint::norm_error() const {
  double s = 0.0;
  for (const auto& d : phi_plus) s += std::norm(d);
  return std::abs(s - 1.0);
}

double DiracPoint::odd_support() const {
  double r = 0.0;
  for (int m = -K; m <= K; ++m)
    if (m % 2 != 0) r = std::max(r, std::abs(phi_plus[m + K]));
  return r;
}

double DiracPoint::eigen_residual(const PeriodicFunction& V) const {
  auto r = apply_Dx(apply_Dx(phi_plus, K), K);
  const auto vp = apply_potential(phi_plus, V, K);
  double s = 0.0;
  for (int i = 0; i < 2 * K + 1; ++i) s += std::norm(r[i] + vp[i] - E_star * phi_plus[i]);
  return std::sqrt(s);
}

std::vector<std::pair<double, int>> find_dirac_points(const PeriodicFunction& V, int K,
                                                      double max_energy, double degeneracy_tol) {
  if (V.parity() != Parity::EvenHarmonic)
    throw ValidationError("find_dirac_points: V must be even_harmonic");
  const auto ev = fiber_spectrum(assemble_fiber(V, PeriodicFunction::zero(), 0.0, kPi, K));

  std::vector<std::pair<double, int>> out;
  std::size_t i = 0;
  while (i < ev.size() && ev[i] < max_energy) {
    const double tol = degeneracy_tol * std::max(1.0, std::abs(ev[i]));
    if (i + 1 >= ev.size())
      throw NumericalError("find_dirac_points: truncation cut a candidate pair; raise K");
    const double pair_gap = ev[i + 1] - ev[i];
    if (pair_gap > tol) {
      throw NumericalError("find_dirac_points: ambiguous clustering at E=" +
                           std::to_string(ev[i]) + " (pair gap " + std::to_string(pair_gap) +
                           " vs tol " + std::to_string(tol) + "); adjust K or tolerance");
    }
    const double neighbor_gap = (i + 2 < ev.size()) ? ev[i + 2] - ev[i + 1] : 1e300;
    if (neighbor_gap <= 10.0 * tol)
      throw NumericalError("find_dirac_points: pair at E=" + std::to_string(ev[i]) +
                           " not separated from neighbors by the 10x margin");
    out.emplace_back(0.5 * (ev[i] + ev[i + 1]), static_cast<int>(i) + 1);
    i += 2;
  }
  return out;
}

DiracPoint dirac_eigenbasis(const PeriodicFunction& V, double E_star, int j_star, int K) {
  if (V.parity() != Parity::EvenHarmonic)
    throw ValidationError("dirac_eigenbasis: V must be even_harmonic");

  // Even-m plane waves: invariant under P_0(pi) since Vhat lives on even
  // harmonics. Indices m = -2q..2q stepping by 2.
  std::vector<int> ms;
  for (int m = -K; m <= K; ++m)
    if (m % 2 == 0) ms.push_back(m);
  const int n = static_cast<int>(ms.size());
  Eigen::MatrixXcd A(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      cplx v = V.coeff(ms[a] - ms[b]);
      if (a == b) {
        const double k = kPi + 2.0 * kPi * ms[a];
        v += k * k;
      }
      A(a, b) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
  if (es.info() != Eigen::Success)
    throw NumericalError("dirac_eigenbasis: eigensolver failed");

  int best = 0;
  double best_d = 1e300;
  for (int a = 0; a < n; ++a) {
    const double d = std::abs(es.eigenvalues()[a] - E_star);
    if (d < best_d) {
      best_d = d;
      best = a;
    }
  }
  const double scale = std::max(1.0, std::abs(E_star));
  if (best_d > 1e-8 * scale)
    throw NumericalError("dirac_eigenbasis: no even-subspace eigenvalue near E_star");
  for (int a = 0; a < n; ++a) {
    if (a != best && std::abs(es.eigenvalues()[a] - E_star) < 1e-6 * scale)
      throw NumericalError(
          "dirac_eigenbasis: E_star not simple within the even subspace (truncation failure)");
  }

  DiracPoint dp;
  dp.E_star = E_star;
  dp.j_star = j_star;
  dp.K = K;
  dp.phi_plus.assign(2 * K + 1, cplx(0.0, 0.0));
  for (int a = 0; a < n; ++a) dp.phi_plus[ms[a] + K] = es.eigenvectors()(a, best);

  // gauge: largest-magnitude coefficient (ties: smallest |m|, then smallest m)
  // is made real positive
  int pick = -K;
  double pick_mag = -1.0;
  for (int m = -K; m <= K; ++m) {
    const double mag = std::abs(dp.phi_plus[m + K]);
    const bool better =
        mag > pick_mag + 1e-14 ||
        (std::abs(mag - pick_mag) <= 1e-14 &&
         (std::abs(m) < std::abs(pick) || (std::abs(m) == std::abs(pick) && m < pick)));
    if (better) {
      pick_mag = mag;
      pick = m;
    }
  }
  const cplx ph = dp.phi_plus[pick + K] / pick_mag;
  for (auto& d : dp.phi_plus) d /= ph;

  double s = 0.0;
  for (const auto& d : dp.phi_plus) s += std::norm(d);
  const double inv = 1.0 / std::sqrt(s);
  for (auto& d : dp.phi_plus) d *= inv;
  return dp;
}

DiracPoint compute_invariants(DiracPoint dp, const PeriodicFunction& W) {
  if (W.parity() != Parity::OddHarmonic)
    throw ValidationError("compute_invariants: W must be odd_harmonic");

  double nu = 0.0;
  for (int m = -dp.K; m <= dp.K; ++m)
    nu += 2.0 * (kPi + 2.0 * kPi * m) * std::norm(dp.phi_plus[m + dp.K]);

  // theta = <phi+, W conj(phi+)> = sum_{m,m'} conj(d_m) conj(d_{m'}) What_{m+m'+1}
  cplx theta(0.0, 0.0);
  for (int m = -dp.K; m <= dp.K; ++m) {
    if (std::abs(dp.phi_plus[m + dp.K]) == 0.0) continue;
    for (int mp = -dp.K; mp <= dp.K; ++mp) {
      const cplx w = W.coeff(m + mp + 1);
      if (std::abs(w) == 0.0) continue;
      theta += std::conj(dp.phi_plus[m + dp.K]) * w * std::conj(dp.phi_plus[mp + dp.K]);
    }
  }

  dp.nu_star = nu;
  dp.theta_star = theta;
  dp.invariants_set = true;
  if (std::abs(nu) < 1e-8)
    throw NumericalError("compute_invariants: |nu_star| < 1e-8, crossing is not transverse");
  if (std::abs(theta) < 1e-8)
    throw NumericalError("compute_invariants: |theta_star| < 1e-8, gap does not open at O(delta)");
  return dp;
}

std::pair<double, double> pauli_identity_residuals(const DiracPoint& dp,
                                                   const PeriodicFunction& W) {
  if (!dp.invariants_set)
    throw ValidationError("pauli_identity_residuals: invariants not computed");
  const int K = dp.K;
  const auto& fp = dp.phi_plus;
  const auto fm = conjugate_in_basis(fp, K);

  const auto Dfp = apply_Dx(fp, K), Dfm = apply_Dx(fm, K);
  const auto Wfp = apply_potential(fp, W, K), Wfm = apply_potential(fm, W, K);

  // rows follow the identity's display: row 1 pairs against phi_+ in the
  // second slot, row 2 against phi_-
  std::array<std::array<cplx, 2>, 2> MD{}, MW{};
  MD[0][0] = fiber_inner(fp, Dfp);
  MD[0][1] = fiber_inner(fm, Dfp);
  MD[1][0] = fiber_inner(fp, Dfm);
  MD[1][1] = fiber_inner(fm, Dfm);
  MW[0][0] = fiber_inner(fp, Wfp);
  MW[0][1] = fiber_inner(fm, Wfp);
  MW[1][0] = fiber_inner(fp, Wfm);
  MW[1][1] = fiber_inner(fm, Wfm);

  const cplx th = dp.theta_star;
  std::array<std::array<cplx, 2>, 2> sig3{{{cplx(1, 0), cplx(0, 0)}, {cplx(0, 0), cplx(-1, 0)}}};
  std::array<std::array<cplx, 2>, 2> sigstar{
      {{cplx(0, 0), std::conj(th)}, {th, cplx(0, 0)}}};

  double rD = 0.0, rW = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      rD = std::max(rD, std::abs(2.0 * MD[a][b] - dp.nu_star * sig3[a][b]));
      rW = std::max(rW, std::abs(MW[a][b] - sigstar[a][b]));
    }
  }
  return {rD, rW};
}

double fermi_velocity_check(const BandStructure& bands, const DiracPoint& dp, double h_xi) {
  const auto& xi = bands.xi_grid;
  std::size_t ip = 0;
  double best = 1e300;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const double d = std::abs(xi[i] - kPi);
    if (d < best) {
      best = d;
      ip = i;
    }
  }
  if (ip == 0 || ip + 1 >= xi.size())
    throw ValidationError("fermi_velocity_check: grid does not straddle xi=pi");
  if (xi[ip + 1] - xi[ip] > h_xi * (1.0 + 1e-9) || xi[ip] - xi[ip - 1] > h_xi * (1.0 + 1e-9))
    throw ValidationError("fermi_velocity_check: grid spacing near pi exceeds h_xi");

  const auto& lo = bands.curves[dp.j_star - 1];
  const auto& hi = bands.curves[dp.j_star];
  const double nuF = std::abs(dp.nu_star);
  const double slopes[4] = {
      (lo[ip] - lo[ip - 1]) / (xi[ip] - xi[ip - 1]),   // lower, left:  +nuF
      (lo[ip + 1] - lo[ip]) / (xi[ip + 1] - xi[ip]),   // lower, right: -nuF
      (hi[ip] - hi[ip - 1]) / (xi[ip] - xi[ip - 1]),   // upper, left:  -nuF
      (hi[ip + 1] - hi[ip]) / (xi[ip + 1] - xi[ip]),   // upper, right: +nuF
  };
  double err = 0.0;
  for (double s : slopes) err = std::max(err, std::abs(std::abs(s) - nuF) / nuF);
  return err;
}

}  // namespace speclab

#include "speclab/bloch.hpp"

#include <algorithm>
#include <cmath>

namespace speclab {

double FiberMatrix::hermiticity_residual() const {
  return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

FiberMatrix assemble_fiber(const PeriodicFunction& V, const PeriodicFunction& W,
                           double delta, double xi, int K) {
  if (V.parity() != Parity::EvenHarmonic)
    throw ValidationError("assemble_fiber: V must be even_harmonic");
  if (!W.is_zero() && W.parity() != Parity::OddHarmonic)
    throw ValidationError("assemble_fiber: W must be odd_harmonic");
  const int bw = std::max(V.max_harmonic(), W.max_harmonic());
  if (K < 4 * bw)
    throw ValidationError("assemble_fiber: K=" + std::to_string(K) +
                          " too small relative to potential bandwidth " + std::to_string(bw));

  FiberMatrix M;
  M.xi = xi;
  M.delta = delta;
  M.K = K;
  const int n = 2 * K + 1;
  M.entries.resize(n, n);
  for (int m = -K; m <= K; ++m) {
    for (int mp = -K; mp <= K; ++mp) {
      cplx v = V.coeff(m - mp) + delta * W.coeff(m - mp);
      if (m == mp) {
        const double k = xi + 2.0 * kPi * m;
        v += k * k;
      }
      M.entries(m + K, mp + K) = v;
    }
  }
  return M;
}

std::vector<double> fiber_spectrum(const FiberMatrix& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M.entries, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("fiber_spectrum: eigensolver failed to converge");
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + M.entries.rows());
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<double> uniform_xi_grid(int n_points) {
  if (n_points < 2) throw ValidationError("xi grid needs at least 2 points");
  std::vector<double> g(n_points);
  for (int i = 0; i < n_points; ++i) g[i] = 2.0 * kPi * i / (n_points - 1);
  return g;
}

BandStructure band_structure(const PeriodicFunction& V, const PeriodicFunction& W,
                             double delta, const std::vector<double>& xi_grid, int K,
                             int n_bands, int threads) {
  if (!std::is_sorted(xi_grid.begin(), xi_grid.end()))
    throw ValidationError("band_structure: xi_grid must be sorted");
  if (xi_grid.empty() || xi_grid.front() < -1e-12 || xi_grid.back() > 2.0 * kPi + 1e-12)
    throw ValidationError("band_structure: xi_grid must lie in [0, 2 pi]");
  if (n_bands < 1 || n_bands > 2 * K + 1)
    throw ValidationError("band_structure: n_bands out of range");

  BandStructure bs;
  bs.xi_grid = xi_grid;
  bs.curves.assign(n_bands, std::vector<double>(xi_grid.size(), 0.0));
  parallel_for(xi_grid.size(), threads, [&](std::size_t i) {
    const auto ev = fiber_spectrum(assemble_fiber(V, W, delta, xi_grid[i], K));
    for (int j = 0; j < n_bands; ++j) bs.curves[j][i] = ev[j];
  });
  return bs;
}

SpectralGap essential_gap(const BandStructure& bands, int j_star) {
  if (j_star < 1 || static_cast<std::size_t>(j_star) + 1 > bands.n_bands())
    throw ValidationError("essential_gap: j_star out of range for computed bands");
  const auto& lo = bands.curves[j_star - 1];
  const auto& hi = bands.curves[j_star];
  SpectralGap g;
  g.j_star = j_star;
  g.lower_edge = *std::max_element(lo.begin(), lo.end());
  g.upper_edge = *std::min_element(hi.begin(), hi.end());
  if (!(g.lower_edge < g.upper_edge))
    throw NumericalError("essential_gap: no gap between bands " + std::to_string(j_star) +
                         " and " + std::to_string(j_star + 1));
  return g;
}

std::pair<double, double> two_band_model(double nu_star, cplx theta_star, double delta,
                                         double xi, double E_star) {
  const double s = xi - kPi;
  const double r = std::sqrt(std::norm(theta_star) * delta * delta + nu_star * nu_star * s * s);
  return {E_star - r, E_star + r};
}

}  // namespace speclab

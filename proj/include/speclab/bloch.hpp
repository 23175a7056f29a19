#pragma once

#include <Eigen/Dense>

#include "speclab/fourier.hpp"

namespace speclab {

// Floquet-Bloch fiber operator P_delta(xi) = D^2 + V + delta*W in the
// plane-wave basis e^{i(xi+2 pi m)x}, |m| <= K. Entry (m,m') =
// (xi+2 pi m)^2 [m=m'] + Vhat_{m-m'} + delta*What_{m-m'}.
struct FiberMatrix {
  double xi = 0.0;
  double delta = 0.0;
  int K = 0;  // dimension n = 2K+1, row/col index m+K for m in [-K, K]
  Eigen::MatrixXcd entries;

  double hermiticity_residual() const;
};

struct BandStructure {
  std::vector<double> xi_grid;
  // curves[j][i] = lambda_{delta, j+1}(xi_grid[i]); bands sorted ascending
  // with multiplicity at each grid point (j is 0-based here, band index j+1).
  std::vector<std::vector<double>> curves;

  std::size_t n_bands() const { return curves.size(); }
};

// Essential spectral gap between bands j_star and j_star+1 (1-based).
struct SpectralGap {
  double lower_edge = 0.0;
  double upper_edge = 0.0;
  int j_star = 0;

  double width() const { return upper_edge - lower_edge; }
  double center() const { return 0.5 * (lower_edge + upper_edge); }
};

FiberMatrix assemble_fiber(const PeriodicFunction& V, const PeriodicFunction& W,
                           double delta, double xi, int K);

// Ascending eigenvalues of the truncated fiber matrix.
std::vector<double> fiber_spectrum(const FiberMatrix& M);

std::vector<double> uniform_xi_grid(int n_points);  // n_points on [0, 2 pi]

BandStructure band_structure(const PeriodicFunction& V, const PeriodicFunction& W,
                             double delta, const std::vector<double>& xi_grid, int K,
                             int n_bands, int threads = 1);

// lower = max_xi lambda_{j_star}, upper = min_xi lambda_{j_star+1}; throws
// NumericalError when the bands overlap (no gap).
SpectralGap essential_gap(const BandStructure& bands, int j_star);

// Eigenvalues E_star +- sqrt(|theta|^2 delta^2 + nu^2 (xi-pi)^2) of the
// two-band reduction; returned as (lower, upper).
std::pair<double, double> two_band_model(double nu_star, cplx theta_star, double delta,
                                         double xi, double E_star);

}  // namespace speclab

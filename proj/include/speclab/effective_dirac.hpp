#pragma once

#include <array>

#include "speclab/common.hpp"
#include "speclab/tridiag.hpp"

namespace speclab {

// Domain-wall profile kappa: -1 at -infinity, +1 at +infinity, odd.
struct DomainWall {
  enum class Shape { Tanh, Smoothstep };

  Shape shape = Shape::Tanh;
  double scale = 1.0;  // w for tanh(y/w); L for the C^2 polynomial ramp on [-L, L]

  static DomainWall tanh_wall(double w);
  static DomainWall smoothstep_wall(double L);

  double operator()(double y) const;
  double slope(double y) const;           // kappa'(y)
  double antiderivative(double y) const;  // int_0^y kappa, closed form
  // |kappa(y)| >= 1 - tol for |y| >= saturation_length(tol)
  double saturation_length(double tol = 1e-10) const;
};

// D = nu sigma3 D_y + sigma_star kappa(y), sigma_star = [[0, conj(theta)], [theta, 0]].
struct EffectiveDiracOperator {
  double nu = 1.0;
  cplx theta = cplx(1.0, 0.0);
  DomainWall wall;

  EffectiveDiracOperator(double nu_star, cplx theta_star, DomainWall w);
  double theta_abs() const { return std::abs(theta); }
};

// Asymptotic data of the first-order systems at spectral parameter z.
// f_plus is the decaying-direction right eigenvector of A_+(z) at mu(z) and
// g_minus the left eigenvector of A_-(z) at mu(z); g_plus / f_minus are their
// biorthogonal partners at the same eigenvalue, scaled so that
// g_plus . f_plus = g_minus . f_minus = 1. zeta_plus / eta_minus hold the
// integrated solutions at the checkpoint positions.
struct EvansState {
  cplx z;
  cplx mu;  // i sqrt(|theta|^2 - z^2), principal branch
  std::array<cplx, 2> f_plus, f_minus;
  std::array<cplx, 2> g_plus, g_minus;
  double X = 0.0;
  int n_steps = 0;
  std::vector<double> checkpoint_x;
  std::vector<std::array<cplx, 2>> zeta_plus;
  std::vector<std::array<cplx, 2>> eta_minus;
  cplx D;                              // eta_-(0) . zeta_+(0)
  double conservation_residual = 0.0;  // relative, over all checkpoints
};

// Shooting evaluation of the Evans function on [-X, X] (physical y units;
// the nu=1 rescaling is internal). Preconditions: wall saturated at +-X to
// 1e-10 and z at distance >= 1e-6 |theta| from the branch points.
EvansState evans_state(const EffectiveDiracOperator& op, cplx z, double X, int n_steps);

struct EvansResult {
  cplx value;
  double conservation_residual;
};
EvansResult evans_function(const EffectiveDiracOperator& op, cplx z, double X, int n_steps);

// Two-component profile on a y-grid, discrete-L2 normalized.
struct SpinorProfile {
  std::vector<double> y;
  std::vector<cplx> up, dn;
};

struct DiracSpectrum {
  std::vector<double> thetas;  // ascending
  std::vector<SpinorProfile> eigenvectors;  // parallel to thetas (grid route only)
  double theta_star_abs = 0.0;
};

// Point spectrum in (-|theta|, |theta|) by scanning |D(z)|^2 and refining each
// local minimum to |dz| <= 1e-10 |theta|; asserts simplicity of every root.
DiracSpectrum dirac_spectrum_evans(const EffectiveDiracOperator& op, double X, int n_steps,
                                   int scan_points, int threads = 1);

// Independent oracle: central-difference discretization of the squared
// operator D^2 - |theta|^2 = nu^2 D_y^2 + M0 on [-Y, Y] with Dirichlet ends.
// M0 = |theta|^2 (kappa^2 - 1) + nu kappa' H0 with H0 = -i sigma3 sigma_star a
// constant Hermitian matrix; the constant spinor rotation diagonalizing H0
// splits the problem into two real tridiagonal channels (exactly unitarily
// equivalent to the 2n x 2n Hermitian discretization). Negative eigenvalues
// map to |z| = sqrt(lambda + |theta|^2); +-z eigenvectors are reconstructed by
// projection (D_h +- z)u and validated to residual 10 h.
DiracSpectrum dirac_spectrum_grid(const EffectiveDiracOperator& op, double Y, int n);

// alpha0(y) = exp(-(|theta|/nu) int_0^y kappa) w, w the sigma3 sigma_star
// eigenvector at -i|theta|; composite Simpson for the integral, L2-normalized.
SpinorProfile zero_mode(const EffectiveDiracOperator& op, const std::vector<double>& y_grid);

// ||D alpha0|| / ||alpha0|| with a 6th-order central-difference derivative on
// a fine uniform grid (n points on [-Y, Y]).
double zero_mode_residual(const EffectiveDiracOperator& op, double Y, int n);

// Apply the first-order operator by central differences on a uniform grid
// (Dirichlet just outside the ends); used for sign recovery and residuals.
void apply_dirac_fd(const EffectiveDiracOperator& op, const SpinorProfile& u,
                    std::vector<cplx>& out_up, std::vector<cplx>& out_dn);

double profile_overlap(const SpinorProfile& a, const SpinorProfile& b);  // |<a,b>|, same grid

}  // namespace speclab

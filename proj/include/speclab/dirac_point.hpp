#pragma once

#include "speclab/bloch.hpp"

namespace speclab {

// Quasimomentum-pi band crossing of P_0 with its symmetry-adapted eigenbasis
// and the two coefficients that drive the effective model. phi_plus holds the
// coefficients d_m of phi on the basis e^{i(pi+2 pi m)x}, m in [-K, K]; even-m
// support encodes membership in the half-shift eigenspace with eigenvalue +i.
// phi_minus is conj(phi_plus) and is never stored.
struct DiracPoint {
  double E_star = 0.0;
  int j_star = 0;  // 1-based band index: lambda_{j*}(pi) = lambda_{j*+1}(pi) = E*
  int K = 0;
  std::vector<cplx> phi_plus;  // size 2K+1, index m+K

  double nu_star = 0.0;   // 2 <phi+, D_x phi+>
  cplx theta_star = 0.0;  // <phi+, W phi->
  bool invariants_set = false;

  double norm_error() const;          // | sum |d_m|^2 - 1 |
  double odd_support() const;         // max |d_m| over odd m
  double eigen_residual(const PeriodicFunction& V) const;  // ||(P0(pi)-E*)phi|| truncated
};

// All degenerate pairs of P_0(pi) below max_energy. Returns (E_star, j_star)
// per pair. degeneracy_tol is applied relative to max(1, |E|); clustering that
// is ambiguous at the 10x margin raises NumericalError.
std::vector<std::pair<double, int>> find_dirac_points(const PeriodicFunction& V, int K,
                                                      double max_energy,
                                                      double degeneracy_tol = 1e-9);

// Eigenvector of P_0(pi) restricted to the even-m subspace at E_star, with the
// phase pinned: the largest-magnitude coefficient (ties: smallest |m|, then
// smallest m) is made real positive.
DiracPoint dirac_eigenbasis(const PeriodicFunction& V, double E_star, int j_star, int K);

// Fills nu_star and theta_star. Flags hypothesis failure when either is below
// 1e-8 in magnitude.
DiracPoint compute_invariants(DiracPoint dp, const PeriodicFunction& W);

// Max-norm residuals of the two 2x2 identities: ||2 M_D - nu* sigma3||
// and ||M_W - sigma*||, entries <phi_s, D_x phi_t> and <phi_s, W phi_t>.
std::pair<double, double> pauli_identity_residuals(const DiracPoint& dp,
                                                   const PeriodicFunction& W);

// One-sided difference quotients of the two crossing bands at xi=pi compared
// with |nu_star|; returns the max relative slope error (expected O(h_xi)).
double fermi_velocity_check(const BandStructure& bands, const DiracPoint& dp, double h_xi);

}  // namespace speclab

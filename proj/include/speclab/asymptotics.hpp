#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "speclab/dirac_point.hpp"
#include "speclab/dislocated.hpp"

namespace speclab {

// Two-scale leading-order quasimode sampled on the dislocated grid:
// v(x_i) = alpha_+(delta x_i) phi_+(x_i) + alpha_-(delta x_i) phi_-(x_i),
// discrete-L2 normalized. Target energy E = E* + theta_j delta.
struct Quasimode {
  std::vector<cplx> values;
  double E = 0.0;
  int j = 0;
};

Quasimode build_quasimode(const DiracPoint& dp, const SpinorProfile& alpha, double theta_j,
                          double delta, const RealSpaceOperator& grid, int branch_j);

// ||(P_delta - E) v|| in the discrete L2 norm.
double quasimode_residual(const RealSpaceOperator& op, const Quasimode& q);

// Gapped-selfadjoint quasimode bound: a unit vector v with ||(T-E)v|| <= eps
// forces dist(E, spec(T)) <= eps.
bool quasimode_gap_bound(const std::vector<double>& spectrum, double E, double eps);

// Second part of the lemma: when [E - C eps, E + C eps] (C > 1) isolates a
// single eigenvalue, the eigenvector satisfies |v - <u,v>u| <= 1/C.
struct EigvecBound {
  bool applicable = false;
  bool holds = false;
  double distance = 0.0;
  double bound = 0.0;
};
EigvecBound quasimode_eigvec_bound(const Eigen::VectorXd& eigvals, const Eigen::MatrixXd& eigvecs,
                                   const Eigen::VectorXd& v, double E, double eps, double C);

// Least-squares fit E - E* = s delta + c delta^2 for one branch.
struct SlopeFit {
  double slope = 0.0;
  double curvature = 0.0;
  double slope_err = 0.0;  // |slope - theta_j|
};
SlopeFit fit_slope(const std::vector<double>& deltas, const std::vector<double>& energies,
                   double E_star, double theta_j);

// ---------------------------------------------------------------------------
// delta sweep
// ---------------------------------------------------------------------------

struct SweepNumerics {
  int K = 16;
  int xi_points = 257;
  double h = 1.0 / 64.0;
  int evans_steps = 1 << 14;
  int evans_scan = 2048;
  int grid_n = 1 << 13;
  double max_energy = 50.0;
  double margin = 0.02;
  int threads = 1;
  std::uint64_t seed = 0;
};

struct SweepConfig {
  std::vector<double> deltas;  // positive, decreasing
  double theta_sharp = 0.95;   // fraction of |theta*| delimiting the window
};

struct BranchSample {
  int j = 0;
  double theta_j = 0.0;
  double E = 0.0;
  double predicted = 0.0;
  double residual = 0.0;       // E - predicted
  double overlap = 0.0;        // |<v0, u>|
  double qm_residual = 0.0;    // ||(P - E_pred) v0||
  double boundary_amplitude = 0.0;
};

struct DeltaRecord {
  double delta = 0.0;
  double gap_lo = 0.0, gap_hi = 0.0;
  double window_lo = 0.0, window_hi = 0.0;
  int count_window = 0;
  int count_expected = 0;
  bool assignment_ok = false;
  bool skipped = false;  // gap below the 20-quanta resolution floor
  std::vector<BranchSample> branches;
};

struct BranchFit {
  int j = 0;
  double theta_j = 0.0;
  SlopeFit fit;
  bool consistent = false;  // >= 3 deltas with clean assignment
};

struct SweepReport {
  double E_star = 0.0;
  int j_star = 0;
  double nu_star = 0.0;
  cplx theta_star;
  std::vector<double> thetas;        // effective spectrum, Evans route
  std::vector<double> thetas_grid;   // oracle route
  double effective_max_discrepancy = 0.0;  // matched on |z| <= 0.95 |theta*|
  std::vector<DeltaRecord> records;
  std::vector<BranchFit> fits;
};

SweepReport run_sweep(const PeriodicFunction& V, const PeriodicFunction& W,
                      DomainWall::Shape wall_shape, double wall_scale_rel,
                      const SweepConfig& sweep, const SweepNumerics& num);

// Shared helpers for pipelines and acceptance: effective operator for a wall
// scaled in units of nu*/|theta*|, with Evans/grid resolution parameters that
// extend the reference values when the wall is wider than the reference.
struct EffectiveSetup {
  EffectiveDiracOperator op;
  double X_evans;
  int evans_steps;
  double Y_grid;
  int grid_n;
};
EffectiveSetup make_effective_setup(const DiracPoint& dp, DomainWall::Shape shape,
                                    double scale_rel, const SweepNumerics& num);

// max |evans - grid| over matched thetas with |z| <= 0.95 |theta*|; throws
// NumericalError when the counts in that window differ.
double cross_validate_thetas(const std::vector<double>& evans, const std::vector<double>& grid,
                             double theta_star_abs, double tol);

}  // namespace speclab

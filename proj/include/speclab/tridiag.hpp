#pragma once

#include <cstdint>
#include <functional>

#include "speclab/common.hpp"

namespace speclab {

// Real symmetric tridiagonal matrix with a constant off-diagonal entry.
// Both discretized operators in this project have this form: the diagonal
// carries 2/h^2 plus the sampled potential, the off-diagonal is -1/h^2
// times a constant coefficient.
struct SymTridiag {
  std::vector<double> diag;
  double off = 0.0;

  std::size_t size() const { return diag.size(); }
};

// Number of eigenvalues strictly below x (Sturm sequence with pivot guard).
int sturm_count_below(const SymTridiag& t, double x);

// Number of eigenvalues in (a, b); retries with a 1e-10-scale jitter when a
// shift lands on an exact pivot breakdown.
int count_in_interval(const SymTridiag& t, double a, double b);

// All eigenvalues in (a, b), each located by bisection to abs_tol.
std::vector<double> eigenvalues_in_interval(const SymTridiag& t, double a, double b,
                                            double abs_tol);

// Eigenvector by inverse iteration at shift E (two sweeps from a seeded random
// start, then a residual check ||(A-E)u|| <= res_tol ||u||). Throws
// NumericalError on stagnation.
std::vector<double> inverse_iteration(const SymTridiag& t, double E, std::uint64_t seed,
                                      double res_tol = 1e-8);

// ||(A-E)u|| / ||u||
double eigen_residual(const SymTridiag& t, double E, const std::vector<double>& u);

}  // namespace speclab

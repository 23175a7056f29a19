#include "speclab/tridiag.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace speclab {

namespace {

// Smallest admissible pivot magnitude, scaled like LAPACK's pivmin.
double pivmin_for(const SymTridiag& t) {
  const double b2 = t.off * t.off;
  return std::max(b2, 1.0) * std::numeric_limits<double>::min() * 64.0 + 1e-300;
}

// Sturm count with breakdown detection: *exact_hit is set when a pivot
// vanished, which signals the shift sits on an eigenvalue of a leading minor.
int sturm_raw(const SymTridiag& t, double x, bool* exact_hit) {
  const double b2 = t.off * t.off;
  const double pivmin = pivmin_for(t);
  int count = 0;
  double d = 1.0;
  *exact_hit = false;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    d = (t.diag[i] - x) - (i ? b2 / d : 0.0);
    if (d == 0.0) *exact_hit = true;
    if (std::abs(d) < pivmin) d = (d < 0.0) ? -pivmin : pivmin;
    if (d < 0.0) ++count;
  }
  return count;
}

}  // namespace

int sturm_count_below(const SymTridiag& t, double x) {
  bool hit = false;
  int c = sturm_raw(t, x, &hit);
  if (hit) {
    // retry with jitter; the count at x±eps brackets the true value
    const double eps = 1e-10 * std::max(1.0, std::abs(x));
    c = sturm_raw(t, x - eps, &hit);
  }
  return c;
}

int count_in_interval(const SymTridiag& t, double a, double b) {
  if (!(a < b)) throw ValidationError("count_in_interval: need a < b");
  return sturm_count_below(t, b) - sturm_count_below(t, a);
}

std::vector<double> eigenvalues_in_interval(const SymTridiag& t, double a, double b,
                                            double abs_tol) {
  const int k_lo = sturm_count_below(t, a);
  const int k_hi = sturm_count_below(t, b);
  std::vector<double> out;
  out.reserve(std::max(0, k_hi - k_lo));
  for (int k = k_lo + 1; k <= k_hi; ++k) {
    // bisect for the k-th smallest eigenvalue
    double lo = a, hi = b;
    while (hi - lo > abs_tol) {
      const double mid = 0.5 * (lo + hi);
      if (sturm_count_below(t, mid) >= k) hi = mid;
      else lo = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

std::vector<double> inverse_iteration(const SymTridiag& t, double E, std::uint64_t seed,
                                      double res_tol) {
  const std::size_t n = t.size();
  const double pivmin = pivmin_for(t);

  // LDL^T factors of A - E with pivot guard
  std::vector<double> d(n), u(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) u[i] = unif(rng);

  auto factor = [&](double shift) {
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double piv = (t.diag[i] - shift) - (i ? t.off * t.off / prev : 0.0);
      if (std::abs(piv) < pivmin) piv = (piv < 0.0) ? -pivmin : pivmin;
      d[i] = piv;
      prev = piv;
    }
  };
  auto solve_inplace = [&](std::vector<double>& x) {
    // forward: L y = x with L unit lower bidiagonal, L(i,i-1) = off/d(i-1)
    for (std::size_t i = 1; i < n; ++i) x[i] -= (t.off / d[i - 1]) * x[i - 1];
    for (std::size_t i = 0; i < n; ++i) x[i] /= d[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= (t.off / d[i]) * x[i + 1];
  };
  auto normalize = [&](std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    s = std::sqrt(s);
    if (s == 0.0) throw NumericalError("inverse iteration: zero vector");
    for (double& v : x) v /= s;
  };

  factor(E);
  normalize(u);
  for (int it = 0; it < 6; ++it) {
    solve_inplace(u);
    normalize(u);
    if (it >= 1 && eigen_residual(t, E, u) <= res_tol) return u;
  }
  if (eigen_residual(t, E, u) <= res_tol) return u;
  throw NumericalError("inverse iteration stagnated: residual " +
                       std::to_string(eigen_residual(t, E, u)) + " at E=" + std::to_string(E));
}

double eigen_residual(const SymTridiag& t, double E, const std::vector<double>& u) {
  const std::size_t n = t.size();
  double r2 = 0.0, n2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = (t.diag[i] - E) * u[i];
    if (i > 0) v += t.off * u[i - 1];
    if (i + 1 < n) v += t.off * u[i + 1];
    r2 += v * v;
    n2 += u[i] * u[i];
  }
  return std::sqrt(r2 / n2);
}

}  // namespace speclab

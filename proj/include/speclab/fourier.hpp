#pragma once

#include <map>

#include "speclab/common.hpp"

namespace speclab {

// Symmetry class of a 1-periodic potential under the half-shift
// u(x) -> u(x + 1/2): even harmonics only, odd harmonics only, or unrestricted.
enum class Parity { EvenHarmonic, OddHarmonic, None };

// Truncated Fourier representation of a real 1-periodic function,
//   f(x) = sum_{|m| <= K} c_m e^{2 pi i m x},  c_{-m} = conj(c_m).
// Immutable after construction; safe to share across threads.
class PeriodicFunction {
 public:
  static constexpr double kTol = 1e-12;

  // Validates parity and reality. A missing c_{-m} is filled as conj(c_m);
  // if both are present they must agree to kTol.
  static PeriodicFunction make(const std::map<int, cplx>& coeffs, Parity parity);

  // Zero potential.
  static PeriodicFunction zero();

  double evaluate(double x) const;

  // max over a 64-point grid of |f(x+1/2) - s f(x)|, s = +1 (even) / -1 (odd).
  // Parity::None reports min(even residual, odd residual).
  double half_shift_residual() const;

  cplx coeff(int m) const;  // 0 outside the stored range
  int max_harmonic() const;
  int truncation_order() const { return k_max_; }
  Parity parity() const { return parity_; }
  bool is_zero() const;
  double l1_norm() const;

  friend PeriodicFunction operator+(const PeriodicFunction& a, const PeriodicFunction& b);
  friend PeriodicFunction operator*(double s, const PeriodicFunction& f);

  // Pointwise product (coefficient convolution). odd*odd and even*even are
  // even_harmonic, even*odd is odd_harmonic, anything else Parity::None.
  friend PeriodicFunction product(const PeriodicFunction& a, const PeriodicFunction& b);

 private:
  PeriodicFunction(int k_max, std::vector<cplx> c, Parity parity)
      : k_max_(k_max), c_(std::move(c)), parity_(parity) {}

  int k_max_ = 0;
  std::vector<cplx> c_;  // c_[m + k_max_], m in [-k_max_, k_max_]
  Parity parity_ = Parity::None;
};

}  // namespace speclab

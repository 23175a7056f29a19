#include "speclab/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace speclab {

namespace {

bool parity_allows(Parity p, int m) {
  switch (p) {
    case Parity::EvenHarmonic: return m % 2 == 0;
    case Parity::OddHarmonic: return m % 2 != 0;
    case Parity::None: return true;
  }
  return true;
}

}  // namespace

PeriodicFunction PeriodicFunction::make(const std::map<int, cplx>& coeffs, Parity parity) {
  int k_max = 0;
  for (const auto& [m, c] : coeffs) {
    if (std::abs(c) > 0.0) k_max = std::max(k_max, std::abs(m));
  }
  std::vector<cplx> c(2 * k_max + 1, cplx(0.0, 0.0));
  auto at = [&](int m) -> cplx& { return c[m + k_max]; };

  for (const auto& [m, cm] : coeffs) {
    if (std::abs(cm) == 0.0) continue;
    if (!parity_allows(parity, m)) {
      std::ostringstream os;
      os << "parity violation: harmonic m=" << m << " is forbidden for the declared class";
      throw ValidationError(os.str());
    }
    at(m) = cm;
  }
  // reality: fill c_{-m} = conj(c_m) when absent, reject inconsistent pairs
  for (int m = 1; m <= k_max; ++m) {
    const bool has_p = coeffs.count(m) && std::abs(coeffs.at(m)) > 0.0;
    const bool has_n = coeffs.count(-m) && std::abs(coeffs.at(-m)) > 0.0;
    if (has_p && has_n) {
      if (std::abs(at(-m) - std::conj(at(m))) > kTol) {
        std::ostringstream os;
        os << "reality violation: c(" << -m << ") != conj(c(" << m << "))";
        throw ValidationError(os.str());
      }
      at(-m) = std::conj(at(m));
    } else if (has_p) {
      at(-m) = std::conj(at(m));
    } else if (has_n) {
      at(m) = std::conj(at(-m));
    }
  }
  if (std::abs(at(0).imag()) > kTol) {
    throw ValidationError("reality violation: c(0) must be real");
  }
  at(0) = cplx(at(0).real(), 0.0);
  return PeriodicFunction(k_max, std::move(c), parity);
}

PeriodicFunction PeriodicFunction::zero() {
  return make({}, Parity::EvenHarmonic);
}

double PeriodicFunction::evaluate(double x) const {
  cplx s(0.0, 0.0);
  for (int m = -k_max_; m <= k_max_; ++m) {
    const double ph = 2.0 * kPi * m * x;
    s += c_[m + k_max_] * cplx(std::cos(ph), std::sin(ph));
  }
  const double tol = kTol * std::max(1.0, l1_norm());
  if (std::abs(s.imag()) > tol) {
    throw NumericalError("evaluate: imaginary residue " + std::to_string(s.imag()) +
                         " exceeds tolerance; coefficient map corrupted");
  }
  return s.real();
}

double PeriodicFunction::half_shift_residual() const {
  double res_even = 0.0, res_odd = 0.0;
  for (int i = 0; i < 64; ++i) {
    const double x = i / 64.0;
    const double f = evaluate(x);
    const double g = evaluate(x + 0.5);
    res_even = std::max(res_even, std::abs(g - f));
    res_odd = std::max(res_odd, std::abs(g + f));
  }
  switch (parity_) {
    case Parity::EvenHarmonic: return res_even;
    case Parity::OddHarmonic: return res_odd;
    case Parity::None: return std::min(res_even, res_odd);
  }
  return 0.0;
}

cplx PeriodicFunction::coeff(int m) const {
  if (std::abs(m) > k_max_) return cplx(0.0, 0.0);
  return c_[m + k_max_];
}

int PeriodicFunction::max_harmonic() const {
  for (int m = k_max_; m >= 1; --m) {
    if (std::abs(c_[m + k_max_]) > 0.0 || std::abs(c_[-m + k_max_]) > 0.0) return m;
  }
  return 0;
}

bool PeriodicFunction::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](cplx v) { return std::abs(v) == 0.0; });
}

double PeriodicFunction::l1_norm() const {
  double s = 0.0;
  for (const auto& v : c_) s += std::abs(v);
  return s;
}

PeriodicFunction operator+(const PeriodicFunction& a, const PeriodicFunction& b) {
  std::map<int, cplx> m;
  const int k = std::max(a.k_max_, b.k_max_);
  for (int i = -k; i <= k; ++i) {
    const cplx v = a.coeff(i) + b.coeff(i);
    if (std::abs(v) > 0.0) m[i] = v;
  }
  const Parity p = (a.parity_ == b.parity_) ? a.parity_ : Parity::None;
  return PeriodicFunction::make(m, p);
}

PeriodicFunction operator*(double s, const PeriodicFunction& f) {
  std::map<int, cplx> m;
  for (int i = -f.k_max_; i <= f.k_max_; ++i) {
    const cplx v = s * f.coeff(i);
    if (std::abs(v) > 0.0) m[i] = v;
  }
  return PeriodicFunction::make(m, f.parity_);
}

PeriodicFunction product(const PeriodicFunction& a, const PeriodicFunction& b) {
  std::map<int, cplx> m;
  for (int i = -a.k_max_; i <= a.k_max_; ++i) {
    if (std::abs(a.coeff(i)) == 0.0) continue;
    for (int j = -b.k_max_; j <= b.k_max_; ++j) {
      if (std::abs(b.coeff(j)) == 0.0) continue;
      m[i + j] += a.coeff(i) * b.coeff(j);
    }
  }
  Parity p = Parity::None;
  if (a.parity_ != Parity::None && b.parity_ != Parity::None) {
    p = (a.parity_ == b.parity_) ? Parity::EvenHarmonic : Parity::OddHarmonic;
  }
  // drop numerically dead entries so parity validation is not tripped by noise
  for (auto it = m.begin(); it != m.end();) {
    if (std::abs(it->second) <= 1e-15) it = m.erase(it);
    else ++it;
  }
  return PeriodicFunction::make(m, p);
}

}  // namespace speclab

#include "speclab/dislocated.hpp"

#include <cmath>

namespace speclab {

double required_half_width(const DomainWall& wall, double delta, double nu_star,
                           double theta_star_abs) {
  return wall.saturation_length() / delta + 12.0 * std::abs(nu_star) / (theta_star_abs * delta);
}

RealSpaceOperator assemble_dislocated(const PeriodicFunction& V, const PeriodicFunction& W,
                                      const DomainWall& wall, double delta, double X, double h) {
  if (V.parity() != Parity::EvenHarmonic)
    throw ValidationError("assemble_dislocated: V must be even_harmonic");
  if (!W.is_zero() && W.parity() != Parity::OddHarmonic)
    throw ValidationError("assemble_dislocated: W must be odd_harmonic");
  if (!(delta >= 0.0)) throw ValidationError("assemble_dislocated: delta must be >= 0");
  if (!(h > 0.0) || h > 1.0 / 32.0 + 1e-15)
    throw ValidationError("assemble_dislocated: need h <= 1/32 (32 points per period)");
  if (!(X > 0.0)) throw ValidationError("assemble_dislocated: X must be positive");
  if (delta > 0.0) {
    const double sat = wall.saturation_length();
    if (delta * X < sat * (1.0 - 1e-12))
      throw ValidationError("assemble_dislocated: wall not saturated at +-delta*X; "
                            "increase X beyond " + std::to_string(sat / delta));
  }

  RealSpaceOperator op;
  op.delta = delta;
  op.X = X;
  op.h = h;
  const auto n = static_cast<std::size_t>(std::llround(2.0 * X / h)) - 1;
  op.potential.resize(n);
  op.matrix.diag.resize(n);
  op.matrix.off = -1.0 / (h * h);
  const double d0 = 2.0 / (h * h);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = op.node(i);
    double p = V.evaluate(x);
    if (delta > 0.0 && !W.is_zero()) p += delta * wall(delta * x) * W.evaluate(x);
    op.potential[i] = p;
    op.matrix.diag[i] = d0 + p;
  }
  return op;
}

double RealSpaceOperator::dispersion_shift() const {
  return kPi * kPi - 2.0 / (h * h) * (1.0 - std::cos(kPi * h));
}

int count_eigs(const RealSpaceOperator& op, double a, double b) {
  return count_in_interval(op.matrix, a, b);
}

void for_each_gap_eig(const RealSpaceOperator& op, double a, double b, std::uint64_t seed,
                      const std::function<void(const GapEigenpair&)>& fn) {
  const double S = op.dispersion_shift();
  const auto evs = eigenvalues_in_interval(op.matrix, a - S, b - S, 1e-11);
  GapEigenpair pair;
  int k = 0;
  for (double E : evs) {
    pair.E_raw = E;
    pair.E = E + S;
    pair.interval_index = 0;
    pair.vec = inverse_iteration(op.matrix, E, seed ^ (0x51ed9eb2b1c5a35dull + k));
    // discrete-L2 normalization
    const double s = 1.0 / std::sqrt(op.h);
    for (auto& v : pair.vec) v *= s;
    pair.boundary_amplitude =
        std::max(std::abs(pair.vec.front()), std::abs(pair.vec.back())) * std::sqrt(op.h);
    pair.residual = eigen_residual(op.matrix, pair.E_raw, pair.vec);
    if (pair.boundary_amplitude > 1e-6)
      throw NumericalError(
          "gap eigenvector does not decay at the boundary (amplitude " +
          std::to_string(pair.boundary_amplitude) + "); required X about " +
          std::to_string(op.X * 1.5));
    fn(pair);
    ++k;
  }
}

std::vector<GapEigenpair> gap_eigs(const RealSpaceOperator& op, const SpectralGap& gap,
                                   double margin, std::uint64_t seed) {
  if (!(margin >= 0.0 && margin < 0.5)) throw ValidationError("gap_eigs: margin out of range");
  const double w = gap.width();
  const double a = gap.lower_edge + margin * w;
  const double b = gap.upper_edge - margin * w;
  std::vector<GapEigenpair> out;
  for_each_gap_eig(op, a, b, seed, [&](const GapEigenpair& p) { out.push_back(p); });
  return out;
}

}  // namespace speclab

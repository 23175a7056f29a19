#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "speclab/dislocated.hpp"

using namespace speclab;

namespace {
const double pi2 = kPi * kPi;
const double unit = 2.0 * kPi;  // nu/|theta| for the reference model
PeriodicFunction V0() { return PeriodicFunction::zero(); }
PeriodicFunction Wsin() {
  return PeriodicFunction::make({{1, cplx(0, -1)}, {-1, cplx(0, 1)}}, Parity::OddHarmonic);
}
SpectralGap ref_gap(double delta) {
  const auto bs = band_structure(V0(), Wsin(), delta, uniform_xi_grid(257), 16, 2);
  return essential_gap(bs, 1);
}
}  // namespace

TEST_CASE("assembly validations") {
  const auto wall = DomainWall::tanh_wall(unit);
  CHECK_THROWS_AS(assemble_dislocated(V0(), Wsin(), wall, 0.1, 100.0, 1.0 / 16.0),
                  ValidationError);  // h too coarse
  CHECK_THROWS_AS(assemble_dislocated(V0(), Wsin(), wall, 0.1, 100.0, 1.0 / 64.0),
                  ValidationError);  // wall not saturated at delta X
}

TEST_CASE("delta = 0 reduces the sampled potential to V alone") {
  const auto V = PeriodicFunction::make({{2, cplx(0.7, 0)}, {-2, cplx(0.7, 0)}},
                                        Parity::EvenHarmonic);
  const auto op = assemble_dislocated(V, Wsin(), DomainWall::tanh_wall(unit), 0.0, 8.0,
                                      1.0 / 64.0);
  for (std::size_t i = 0; i < op.size(); i += 37)
    CHECK(op.potential[i] == doctest::Approx(V.evaluate(op.node(i))).epsilon(1e-13));
}

TEST_CASE("smoothstep plateau: potential equals V + delta W exactly past (L+1)/delta") {
  const double delta = 0.125;
  const double L = unit;  // smoothstep half-width
  const auto wall = DomainWall::smoothstep_wall(L);
  const double X = 512.0;  // > (L + 12 unit/|theta|) / delta
  const auto op = assemble_dislocated(V0(), Wsin(), wall, delta, X, 1.0 / 64.0);
  const double x_plateau = (L + 1.0) / delta;
  bool saw = false;
  for (std::size_t i = 0; i < op.size(); i += 11) {
    const double x = op.node(i);
    if (x < x_plateau) continue;
    saw = true;
    CHECK(op.potential[i] == doctest::Approx(delta * Wsin().evaluate(x)).epsilon(1e-12));
  }
  CHECK(saw);
}

TEST_CASE("flipping the wall sign matches reflection composed with the half-shift") {
  // with V = 0 and W odd about x = 0, the -kappa potential agrees with the
  // +kappa one at 1/2 - x up to the wall's delta/2 argument offset
  const double delta = 0.1, h = 1.0 / 64.0;
  const auto wall = DomainWall::tanh_wall(unit);
  const double X = 760.0;  // saturated: delta X > 11.9 unit
  const auto op_p = assemble_dislocated(V0(), Wsin(), wall, delta, X, h);
  const auto op_m = assemble_dislocated(V0(), -1.0 * Wsin(), wall, delta, X, h);
  const long shift = std::lround((0.5 + 2.0 * X) / h) - 2;
  const double tol = 1.2 * delta * delta * 0.5 * 2.0 / wall.scale;  // d/2 |k'| |W|
  double worst = 0.0;
  for (long i = 0; i < static_cast<long>(op_p.size()); i += 7) {
    const long j = shift - i;
    if (j < 0 || j >= static_cast<long>(op_p.size())) continue;
    worst = std::max(worst, std::abs(op_m.potential[i] - op_p.potential[j]));
  }
  CHECK(worst <= tol);
  CHECK(worst > 0.0);  // the offset is real, just second order
}

TEST_CASE("count_eigs totals and empty intervals") {
  const auto op = assemble_dislocated(V0(), Wsin(), DomainWall::tanh_wall(unit), 0.25, 380.0,
                                      1.0 / 64.0);
  CHECK(count_eigs(op, -1e9, 1e9) == static_cast<int>(op.size()));
  CHECK(count_eigs(op, -50.0, -1.0) == 0);  // below the spectrum
}

TEST_CASE("reference model at delta = 0.02: a single mid-gap defect eigenvalue") {
  const double delta = 0.02, h = 1.0 / 64.0;
  const auto wall = DomainWall::tanh_wall(unit);
  double X = required_half_width(wall, delta, unit, 1.0);
  X = std::ceil(X / h) * h;
  const auto op = assemble_dislocated(V0(), Wsin(), wall, delta, X, h);
  const auto gap = ref_gap(delta);

  // the matched effective operator has the zero mode only: 2N+1 = 1
  CHECK(count_eigs(op, gap.lower_edge + 0.02 * gap.width(), gap.upper_edge - 0.02 * gap.width()) ==
        1);

  const auto pairs = gap_eigs(op, gap, 0.02, 0);
  REQUIRE(pairs.size() == 1);
  CHECK(std::abs(pairs[0].E - pi2) <= 0.2 * delta);  // the zero-mode child
  CHECK(pairs[0].boundary_amplitude <= 1e-6);
  CHECK(pairs[0].residual <= 1e-8);
  // count stability: census over the search window equals the list length
  CHECK(count_eigs(op, gap.lower_edge + 0.02 * gap.width(), gap.upper_edge - 0.02 * gap.width()) ==
        static_cast<int>(pairs.size()));
}

TEST_CASE("grid and domain convergence of the gap eigenvalue") {
  const double delta = 0.04;
  const auto wall = DomainWall::tanh_wall(unit);
  const auto gap = ref_gap(delta);
  auto solve = [&](double h, double Xmul) {
    double X = required_half_width(wall, delta, unit, 1.0) * Xmul;
    X = std::ceil(X / h) * h;
    const auto op = assemble_dislocated(V0(), Wsin(), wall, delta, X, h);
    const auto pairs = gap_eigs(op, gap, 0.02, 0);
    REQUIRE(pairs.size() == 1);
    return pairs[0].E;
  };
  const double e1 = solve(1.0 / 32.0, 1.0);
  const double e2 = solve(1.0 / 64.0, 1.0);
  const double e3 = solve(1.0 / 128.0, 1.0);
  const double ratio = (e1 - e2) / (e2 - e3);
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);

  // extending the domain by 25% moves the eigenvalue below 1e-9
  const double e_ext = solve(1.0 / 64.0, 1.25);
  CHECK(std::abs(e_ext - e2) <= 1e-9);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "speclab/bloch.hpp"

using namespace speclab;

namespace {
const double pi2 = kPi * kPi;
PeriodicFunction V0() { return PeriodicFunction::zero(); }
PeriodicFunction Vcos() {
  return PeriodicFunction::make({{2, cplx(1, 0)}, {-2, cplx(1, 0)}}, Parity::EvenHarmonic);
}
PeriodicFunction Wsin() {
  return PeriodicFunction::make({{1, cplx(0, -1)}, {-1, cplx(0, 1)}}, Parity::OddHarmonic);
}
}  // namespace

TEST_CASE("free fiber matrix at xi=pi, K=1 is diag(pi^2, pi^2, 9 pi^2)") {
  const auto M = assemble_fiber(V0(), PeriodicFunction::zero(), 0.0, kPi, 1);
  CHECK(std::abs(M.entries(0, 0) - pi2) < 1e-12);        // m = -1
  CHECK(std::abs(M.entries(1, 1) - pi2) < 1e-12);        // m = 0
  CHECK(std::abs(M.entries(2, 2) - 9.0 * pi2) < 1e-12);  // m = +1
  CHECK(std::abs(M.entries(0, 1)) < 1e-15);
  CHECK(M.hermiticity_residual() <= 1e-12);
}

TEST_CASE("coupling enters on the first off-diagonal: (m, m-1) = delta*What_1") {
  const auto M = assemble_fiber(V0(), Wsin(), 0.1, 0.7, 8);
  for (int m = -7; m <= 7; ++m) {
    CHECK(std::abs(M.entries(m + 8, m - 1 + 8) - cplx(0.0, -0.1)) < 1e-15);
    CHECK(std::abs(M.entries(m - 1 + 8, m + 8) - cplx(0.0, 0.1)) < 1e-15);
  }
  CHECK(M.hermiticity_residual() <= 1e-12);
}

TEST_CASE("K below four potential bandwidths is rejected") {
  CHECK_THROWS_AS(assemble_fiber(Vcos(), Wsin(), 0.1, kPi, 7), ValidationError);
}

TEST_CASE("free fiber spectrum and constant shift") {
  const auto ev = fiber_spectrum(assemble_fiber(V0(), Wsin(), 0.0, kPi, 16));
  CHECK(ev[0] == doctest::Approx(pi2).epsilon(1e-13));
  CHECK(ev[1] == doctest::Approx(pi2).epsilon(1e-13));
  CHECK(ev[2] == doctest::Approx(9.0 * pi2).epsilon(1e-13));
  CHECK(ev[3] == doctest::Approx(9.0 * pi2).epsilon(1e-13));

  const auto Vc = PeriodicFunction::make({{0, cplx(2.5, 0)}}, Parity::EvenHarmonic);
  const auto evc = fiber_spectrum(assemble_fiber(Vc, Wsin(), 0.0, kPi, 16));
  for (int j = 0; j < 6; ++j) CHECK(evc[j] == doctest::Approx(ev[j] + 2.5).epsilon(1e-13));
}

TEST_CASE("middle fiber eigenvalues track the two-band model") {
  // xi = pi: exact 2x2 reduction gives pi^2 +- delta; outer-band coupling
  // shifts both at O(delta^2)
  const double delta = 0.05;
  const auto ev = fiber_spectrum(assemble_fiber(V0(), Wsin(), delta, kPi, 16));
  const auto [lo, hi] = two_band_model(2.0 * kPi, cplx(0, -1), delta, kPi, pi2);
  CHECK(std::abs(ev[0] - lo) <= 2.0 * delta * delta);
  CHECK(std::abs(ev[1] - hi) <= 2.0 * delta * delta);

  // away from pi the claim holds with the (xi-pi)^2 allowance
  for (double s : {-0.2, -0.1, 0.05, 0.15}) {
    const auto e2 = fiber_spectrum(assemble_fiber(V0(), Wsin(), delta, kPi + s, 16));
    const auto tb = two_band_model(2.0 * kPi, cplx(0, -1), delta, kPi + s, pi2);
    const double tol = 2.0 * (delta * delta + s * s);
    CHECK(std::abs(e2[0] - tb.first) <= tol);
    CHECK(std::abs(e2[1] - tb.second) <= tol);
  }
}

TEST_CASE("two-band model closed forms") {
  const auto [lo, hi] = two_band_model(2.0 * kPi, cplx(0, -1), 0.03, kPi, pi2);
  CHECK(lo == doctest::Approx(pi2 - 0.03).epsilon(1e-15));
  CHECK(hi == doctest::Approx(pi2 + 0.03).epsilon(1e-15));
  const auto cone = two_band_model(2.0 * kPi, cplx(0, -1), 0.0, kPi + 0.1, pi2);
  CHECK(cone.second - cone.first == doctest::Approx(2.0 * 2.0 * kPi * 0.1).epsilon(1e-13));
}

TEST_CASE("free band structure is the folded parabola") {
  const auto grid = uniform_xi_grid(65);
  const auto bs = band_structure(V0(), Wsin(), 0.0, grid, 8, 2);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double xi = grid[i];
    const double expect = std::min(xi * xi, (xi - 2.0 * kPi) * (xi - 2.0 * kPi));
    CHECK(bs.curves[0][i] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("band stability in the perturbation strength is linear") {
  const auto grid = uniform_xi_grid(33);
  const auto b0 = band_structure(Vcos(), Wsin(), 0.0, grid, 12, 4);
  auto dev = [&](double d) {
    const auto b = band_structure(Vcos(), Wsin(), d, grid, 12, 4);
    double m = 0.0;
    for (int j = 0; j < 4; ++j)
      for (std::size_t i = 0; i < grid.size(); ++i)
        m = std::max(m, std::abs(b.curves[j][i] - b0.curves[j][i]));
    return m;
  };
  const double c1 = dev(1e-3) / 1e-3;
  const double c2 = dev(5e-4) / 5e-4;
  CHECK(c1 == doctest::Approx(c2).epsilon(0.3));  // measured Lipschitz constant stable
  CHECK(c1 < 10.0);                               // |W|_inf = 2, C(l) of modest size
}

TEST_CASE("lowest band of P_0 increases on [0, pi] for V = 2cos(4 pi x)") {
  const auto grid = uniform_xi_grid(257);
  const auto bs = band_structure(Vcos(), Wsin(), 0.0, grid, 16, 1);
  for (std::size_t i = 1; i < grid.size() && grid[i] <= kPi + 1e-12; ++i)
    CHECK(bs.curves[0][i] >= bs.curves[0][i - 1] - 1e-11);
}

TEST_CASE("essential gap obeys the linear width law") {
  const auto grid = uniform_xi_grid(257);
  const double delta = 0.02;
  const auto bs = band_structure(V0(), Wsin(), delta, grid, 16, 2);
  const auto gap = essential_gap(bs, 1);
  CHECK(std::abs(gap.width() - 2.0 * delta) <= 3.0 * delta * (2.0 * delta));
  CHECK(std::abs(gap.center() - pi2) <= 1e-3);

  // Richardson check of the linear law: width(delta)/width(delta/2) -> 2
  const auto bs2 = band_structure(V0(), Wsin(), delta / 2.0, grid, 16, 2);
  const auto gap2 = essential_gap(bs2, 1);
  CHECK(std::abs(gap.width() / gap2.width() - 2.0) <= 5.0 * delta);
}

TEST_CASE("delta = 0 has no gap at the Dirac crossing") {
  const auto grid = uniform_xi_grid(257);
  const auto bs = band_structure(V0(), Wsin(), 0.0, grid, 16, 2);
  CHECK_THROWS_AS(essential_gap(bs, 1), NumericalError);
}

TEST_CASE("spectra of P_delta and P_{-delta} coincide (half-shift conjugation)") {
  for (double xi : {0.3, kPi, 5.1}) {
    const auto ep = fiber_spectrum(assemble_fiber(Vcos(), Wsin(), 0.07, xi, 16));
    const auto em = fiber_spectrum(assemble_fiber(Vcos(), Wsin(), -0.07, xi, 16));
    for (int j = 0; j < 6; ++j) CHECK(std::abs(ep[j] - em[j]) <= 1e-10);
  }
}

TEST_CASE("doubling the truncation moves low bands by less than 1e-10") {
  for (double xi : {0.9, kPi}) {
    const auto e1 = fiber_spectrum(assemble_fiber(Vcos(), Wsin(), 0.05, xi, 16));
    const auto e2 = fiber_spectrum(assemble_fiber(Vcos(), Wsin(), 0.05, xi, 32));
    for (int j = 0; j < 4; ++j) CHECK(std::abs(e1[j] - e2[j]) <= 1e-10);
  }
}

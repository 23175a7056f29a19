#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "speclab/fourier.hpp"

using namespace speclab;

namespace {
PeriodicFunction ref_W() {
  // 2 sin(2 pi x) = -i e^{2 pi i x} + i e^{-2 pi i x}
  return PeriodicFunction::make({{1, cplx(0, -1)}, {-1, cplx(0, 1)}}, Parity::OddHarmonic);
}
PeriodicFunction ref_V() {
  // 2 cos(4 pi x)
  return PeriodicFunction::make({{2, cplx(1, 0)}, {-2, cplx(1, 0)}}, Parity::EvenHarmonic);
}
}  // namespace

TEST_CASE("make_potential validates and evaluates the reference potentials") {
  const auto W = ref_W();
  CHECK(W.evaluate(0.25) == doctest::Approx(2.0).epsilon(1e-14));
  const auto V = ref_V();
  CHECK(V.evaluate(0.0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("parity violation is rejected") {
  CHECK_THROWS_AS(PeriodicFunction::make({{1, cplx(1, 0)}, {-1, cplx(1, 0)}},
                                         Parity::EvenHarmonic),
                  ValidationError);
}

TEST_CASE("reality: missing partner filled, inconsistent partner rejected") {
  const auto f = PeriodicFunction::make({{1, cplx(0, -1)}}, Parity::OddHarmonic);
  CHECK(std::abs(f.coeff(-1) - cplx(0, 1)) < 1e-15);
  CHECK_THROWS_AS(
      PeriodicFunction::make({{1, cplx(0, -1)}, {-1, cplx(0.5, 0.5)}}, Parity::OddHarmonic),
      ValidationError);
}

TEST_CASE("evaluate is 1-periodic and real on random grids") {
  const auto f = ref_V() + ref_W();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    CHECK(f.evaluate(x) == doctest::Approx(f.evaluate(x + 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("half-shift residuals identify the symmetry classes") {
  CHECK(ref_V().half_shift_residual() <= 1e-12);
  CHECK(ref_W().half_shift_residual() <= 1e-12);
  const auto sum = ref_V() + ref_W();  // parity None
  CHECK(sum.parity() == Parity::None);
  // no symmetry asserted: reports the smaller of the two residuals
  CHECK(sum.half_shift_residual() > 1e-3);
}

TEST_CASE("parity classes close under addition and scaling") {
  const auto a = ref_W();
  const auto b = PeriodicFunction::make({{3, cplx(0.25, 0.1)}}, Parity::OddHarmonic);
  const auto s = a + b;
  CHECK(s.parity() == Parity::OddHarmonic);
  CHECK(s.half_shift_residual() <= 1e-12);
  CHECK((2.5 * s).half_shift_residual() <= 1e-12);
}

TEST_CASE("product of two odd-harmonic functions is even-harmonic") {
  const auto p = product(ref_W(), ref_W());
  CHECK(p.parity() == Parity::EvenHarmonic);
  CHECK(p.half_shift_residual() <= 1e-12);
  // 4 sin^2(2 pi x) = 2 - 2 cos(4 pi x)
  CHECK(p.evaluate(0.25) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(p.evaluate(0.0) == doctest::Approx(0.0).epsilon(1e-13));
}

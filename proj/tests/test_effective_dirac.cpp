#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "speclab/effective_dirac.hpp"

using namespace speclab;

namespace {

const double kNu = 2.0 * kPi;
const cplx kTheta(0.0, -1.0);
const double unit = kNu / 1.0;  // nu/|theta|, the envelope decay length

EffectiveDiracOperator ref_op(double w_rel) {
  return EffectiveDiracOperator(kNu, kTheta, DomainWall::tanh_wall(w_rel * unit));
}

// tanh walls give reflectionless channel potentials with closed-form bound
// states: with chi = |theta| w / nu, the nonzero eigenvalues are
// +- |theta| sqrt(1 - (1 - j/chi)^2), j = 1 .. ceil(chi)-1.
std::vector<double> closed_form_thetas(double w_rel) {
  const double chi = w_rel;
  std::vector<double> out{0.0};
  for (int j = 1; j < chi - 1e-12; ++j) {
    const double r = 1.0 - j / chi;
    const double t = std::sqrt(1.0 - r * r);
    out.push_back(t);
    out.push_back(-t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("wall shapes: limits, oddness, slope and antiderivative consistency") {
  for (const auto wall : {DomainWall::tanh_wall(2.0), DomainWall::smoothstep_wall(3.0)}) {
    CHECK(wall(1e9) == doctest::Approx(1.0));
    CHECK(wall(-1e9) == doctest::Approx(-1.0));
    for (double y : {0.1, 0.9, 2.7, 5.0}) {
      CHECK(wall(-y) == doctest::Approx(-wall(y)).epsilon(1e-14));
      CHECK(std::abs(wall(y)) <= 1.0 + 1e-15);
      // slope vs central difference
      const double fd = (wall(y + 1e-6) - wall(y - 1e-6)) / 2e-6;
      CHECK(wall.slope(y) == doctest::Approx(fd).epsilon(1e-7));
      // antiderivative vs fine trapezoid
      double acc = 0.0;
      const int n = 4000;
      for (int i = 0; i < n; ++i) {
        const double a = y * i / n, b = y * (i + 1) / n;
        acc += 0.5 * (b - a) * (wall(a) + wall(b));
      }
      CHECK(wall.antiderivative(y) == doctest::Approx(acc).epsilon(1e-7));
    }
    const double sat = wall.saturation_length(1e-10);
    CHECK(std::abs(wall(sat)) >= 1.0 - 1.0000001e-10);
  }
  // smoothstep saturates exactly at L
  const auto ss = DomainWall::smoothstep_wall(3.0);
  CHECK(ss(3.0) == 1.0);
  CHECK(ss(-3.0) == -1.0);
  CHECK(ss.slope(3.0) == 0.0);
}

TEST_CASE("operator construction validates nu and theta") {
  CHECK_THROWS_AS(EffectiveDiracOperator(-1.0, kTheta, DomainWall::tanh_wall(1.0)),
                  ValidationError);
  CHECK_THROWS_AS(EffectiveDiracOperator(1.0, cplx(0, 0), DomainWall::tanh_wall(1.0)),
                  ValidationError);
}

TEST_CASE("evans state: biorthogonal normalization and conservation law") {
  const auto op = ref_op(1.0);
  const double X = 12.0 * unit;
  const auto st = evans_state(op, cplx(0.3, 0.0), X, 1 << 14);
  const cplx pf = st.g_plus[0] * st.f_plus[0] + st.g_plus[1] * st.f_plus[1];
  const cplx mf = st.g_minus[0] * st.f_minus[0] + st.g_minus[1] * st.f_minus[1];
  CHECK(std::abs(pf - 1.0) <= 1e-12);
  CHECK(std::abs(mf - 1.0) <= 1e-12);
  // the product eta- . zeta+ is constant along the whole interval
  CHECK(st.conservation_residual <= 1e-9);
}

TEST_CASE("evans: branch-point guard and saturation guard") {
  const auto op = ref_op(1.0);
  CHECK_THROWS_AS(evans_function(op, cplx(1.0, 0.0), 12.0 * unit, 1 << 12), ValidationError);
  CHECK_THROWS_AS(evans_function(op, cplx(0.2, 0.0), 2.0 * unit, 1 << 12), ValidationError);
}

TEST_CASE("evans: D(0) vanishes relative to the scan scale (zero mode)") {
  const auto op = ref_op(1.0);
  const double X = 12.0 * unit;
  double sup = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double z = -0.999 + 2.0 * 0.999 * i / 40.0;
    sup = std::max(sup, std::abs(evans_function(op, z, X, 1 << 13).value));
  }
  const double d0 = std::abs(evans_function(op, cplx(0.0, 0.0), X, 1 << 13).value);
  CHECK(d0 <= 1e-8 * sup);
}

TEST_CASE("sharp wall: no root away from zero, |D| stays O(sup)") {
  const auto op = ref_op(0.05);
  const double X = 12.0 * unit;
  double sup = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double z = -0.999 + 2.0 * 0.999 * i / 40.0;
    sup = std::max(sup, std::abs(evans_function(op, z, X, 1 << 13).value));
  }
  for (double z : {-0.9, 0.9}) {
    CHECK(std::abs(evans_function(op, z, X, 1 << 13).value) > 0.1 * sup);
  }
}

TEST_CASE("evans spectrum: reference and sharp walls hold only the zero mode") {
  for (double w_rel : {1.0, 0.05}) {
    const auto op = ref_op(w_rel);
    const auto sp = dirac_spectrum_evans(op, 12.0 * unit, 1 << 13, 512, 2);
    REQUIRE(sp.thetas.size() == 1);
    CHECK(std::abs(sp.thetas[0]) <= 1e-8);
  }
}

TEST_CASE("wide wall: evans spectrum matches the closed-form bound states") {
  const auto op = ref_op(8.0);
  const double X = op.wall.saturation_length() * 1.0001;
  const auto sp = dirac_spectrum_evans(op, X, 1 << 15, 2048, 2);
  const auto exact = closed_form_thetas(8.0);
  // scan window (1-1e-3): all 15 closed-form values lie inside it
  REQUIRE(sp.thetas.size() == exact.size());
  for (std::size_t i = 0; i < exact.size(); ++i)
    CHECK(sp.thetas[i] == doctest::Approx(exact[i]).epsilon(1e-7));
  // symmetry theta_{-j} = -theta_j
  const std::size_t n = sp.thetas.size();
  for (std::size_t i = 0; i < n; ++i)
    CHECK(std::abs(sp.thetas[i] + sp.thetas[n - 1 - i]) <= 1e-8);
}

TEST_CASE("grid oracle: reference wall, zero mode and convergence") {
  const auto op = ref_op(1.0);
  const double Y = 24.0 * unit;
  const auto sp = dirac_spectrum_grid(op, Y, 1 << 13);
  const double h = 2.0 * Y / (1 << 13);
  REQUIRE(sp.thetas.size() == 1);
  CHECK(std::abs(sp.thetas[0]) <= 10.0 * h * h);
  REQUIRE(sp.eigenvectors.size() == 1);
  // profile is L2-normalized
  double n2 = 0.0;
  for (std::size_t i = 0; i < sp.eigenvectors[0].y.size(); ++i)
    n2 += std::norm(sp.eigenvectors[0].up[i]) + std::norm(sp.eigenvectors[0].dn[i]);
  CHECK(n2 * h == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("grid oracle: wide wall matches closed forms with O(h^2) convergence") {
  const auto op = ref_op(8.0);
  const double Y = op.wall.saturation_length() + 12.0 * unit;
  const auto exact = closed_form_thetas(8.0);

  const auto sp1 = dirac_spectrum_grid(op, Y, 1 << 16);
  const auto sp2 = dirac_spectrum_grid(op, Y, 1 << 17);
  REQUIRE(sp1.thetas.size() == exact.size());
  REQUIRE(sp2.thetas.size() == exact.size());
  const double h2 = 2.0 * Y / (1 << 17);
  for (std::size_t i = 0; i < exact.size(); ++i)
    CHECK(std::abs(sp2.thetas[i] - exact[i]) <= 10.0 * h2 * h2);

  // Richardson: halving h cuts the error on nonzero thetas by about 4
  for (std::size_t i = 0; i < exact.size(); ++i) {
    if (std::abs(exact[i]) < 0.1) continue;
    const double e1 = std::abs(sp1.thetas[i] - exact[i]);
    const double e2 = std::abs(sp2.thetas[i] - exact[i]);
    if (e1 > 1e-11) {
      CHECK(e1 / e2 >= 2.5);
      CHECK(e1 / e2 <= 6.0);
    }
  }
}

TEST_CASE("grid oracle: sigma3 sigma* conjugation maps eigenvectors to -theta") {
  const auto op = ref_op(8.0);
  const double Y = op.wall.saturation_length() + 12.0 * unit;
  const int n = 1 << 16;
  const auto sp = dirac_spectrum_grid(op, Y, n);
  const double h = 2.0 * Y / n;
  const cplx thc = std::conj(op.theta);
  for (std::size_t k = 0; k < sp.thetas.size(); ++k) {
    if (std::abs(sp.thetas[k]) < 0.1) continue;
    SpinorProfile v;
    v.y = sp.eigenvectors[k].y;
    v.up.resize(v.y.size());
    v.dn.resize(v.y.size());
    for (std::size_t i = 0; i < v.y.size(); ++i) {
      v.up[i] = thc * sp.eigenvectors[k].dn[i];      // sigma3 sigma* = [[0, conj th],[-th, 0]]
      v.dn[i] = -op.theta * sp.eigenvectors[k].up[i];
    }
    std::vector<cplx> du, dd;
    apply_dirac_fd(op, v, du, dd);
    double r2 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < v.y.size(); ++i) {
      r2 += std::norm(du[i] + sp.thetas[k] * v.up[i]) + std::norm(dd[i] + sp.thetas[k] * v.dn[i]);
      m2 += std::norm(v.up[i]) + std::norm(v.dn[i]);
    }
    CHECK(std::sqrt(r2 / m2) <= 10.0 * h);
  }
}

TEST_CASE("grid oracle: essential-threshold cluster structure") {
  // independent mini-oracle: rebuild the two channel matrices and look at the
  // census below and above the essential threshold
  const auto op = ref_op(1.0);
  const double Y = 24.0 * unit;
  const int n = 1 << 12;
  const double h = 2.0 * Y / n;
  int below[2] = {0, 0}, above[2] = {0, 0};
  for (int c = 0; c < 2; ++c) {
    SymTridiag tri;
    tri.off = -op.nu * op.nu / (h * h);
    tri.diag.resize(n - 1);
    for (int i = 0; i < n - 1; ++i) {
      const double y = -Y + (i + 1) * h;
      const double k = op.wall(y);
      tri.diag[i] = 2.0 * op.nu * op.nu / (h * h) + (k * k - 1.0) +
                    (c == 0 ? 1.0 : -1.0) * op.nu * op.wall.slope(y);
    }
    below[c] = count_in_interval(tri, -1.5, -10.0 * h * h);
    above[c] = count_in_interval(tri, 1e-9, 0.1);
  }
  CHECK(below[0] == 0);  // zero mode lives in exactly one channel
  CHECK(below[1] == 1);
  CHECK(above[0] >= 3);  // box-quantized continuum sets in right above the gap
  CHECK(above[1] >= 3);
}

TEST_CASE("evans and grid spectra agree on all three shipped walls") {
  for (double w_rel : {0.05, 1.0, 8.0}) {
    const auto op = ref_op(w_rel);
    const double X = std::max(12.0 * unit, op.wall.saturation_length() * 1.0001);
    const int steps = (w_rel > 4.0) ? (1 << 15) : (1 << 13);
    const auto spe = dirac_spectrum_evans(op, X, steps, (w_rel > 4.0) ? 2048 : 512, 2);
    const double Y = op.wall.saturation_length() + 12.0 * unit;
    const int n = (w_rel > 4.0) ? (1 << 16) : (1 << 13);
    const auto spg = dirac_spectrum_grid(op, Y, n);
    const double h = 2.0 * Y / n;

    std::vector<double> a, b;
    for (double t : spe.thetas)
      if (std::abs(t) <= 0.95) a.push_back(t);
    for (double t : spg.thetas)
      if (std::abs(t) <= 0.95) b.push_back(t);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(std::abs(a[i] - b[i]) <= std::max(1e-6, 10.0 * h * h));
  }
}

TEST_CASE("scaling covariance: (c nu, c theta) scales the spectrum by c") {
  const double w = 2.0 * unit;  // chi = 2: spectrum {0, +-sqrt(3)/2}
  const auto wall = DomainWall::tanh_wall(w);
  const EffectiveDiracOperator op1(kNu, kTheta, wall);
  const EffectiveDiracOperator op2(2.0 * kNu, 2.0 * kTheta, wall);
  const double Y = wall.saturation_length() + 12.0 * unit;
  const auto s1 = dirac_spectrum_grid(op1, Y, 1 << 14);
  const auto s2 = dirac_spectrum_grid(op2, Y, 1 << 14);
  REQUIRE(s1.thetas.size() == 3);
  REQUIRE(s2.thetas.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(std::abs(s2.thetas[i] - 2.0 * s1.thetas[i]) <= 1e-8);
  CHECK(std::abs(s1.thetas[2] - std::sqrt(3.0) / 2.0) < 1e-5);
}

TEST_CASE("zero mode: residual, plateau form, and grid-oracle overlap") {
  const auto op = ref_op(1.0);
  CHECK(zero_mode_residual(op, 24.0 * unit, 4096) <= 1e-8);

  // sharp wall: pure exponential on the plateau
  const auto sharp = ref_op(0.05);
  std::vector<double> y;
  for (int i = 0; i <= 2000; ++i) y.push_back(-12.0 * unit + 24.0 * unit * i / 2000.0);
  const auto a = zero_mode(sharp, y);
  const double L = sharp.wall.saturation_length();
  std::size_t i1 = 1400, i2 = 1700;  // both on the right plateau
  REQUIRE(y[i1] > L);
  const double expect = std::exp(-(1.0 / op.nu) * (y[i2] - y[i1]));
  CHECK(std::abs(a.up[i2] / a.up[i1]) == doctest::Approx(expect).epsilon(1e-6));

  // overlap with the grid-oracle zero eigenvector
  const double Y = 24.0 * unit;
  const int n = 1 << 13;
  const auto sp = dirac_spectrum_grid(op, Y, n);
  const double h = 2.0 * Y / n;
  const auto zm = zero_mode(op, sp.eigenvectors[0].y);
  CHECK(profile_overlap(zm, sp.eigenvectors[0]) >= 1.0 - 10.0 * h);
}

TEST_CASE("zero mode flags a non-decaying profile") {
  const auto op = ref_op(1.0);
  std::vector<double> y;
  for (int i = 0; i <= 100; ++i) y.push_back(-unit + 2.0 * unit * i / 100.0);  // far too short
  CHECK_THROWS_AS(zero_mode(op, y), NumericalError);
}

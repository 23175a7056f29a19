#include "speclab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace speclab {

namespace {

std::size_t nearest_index(const std::vector<double>& xs, double x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (std::abs(xs[i] - x) < std::abs(xs[best] - x)) best = i;
  return best;
}

cplx interp_profile(const std::vector<double>& y, const std::vector<cplx>& f, double yy) {
  if (yy <= y.front()) return f.front();
  if (yy >= y.back()) return f.back();
  const double h = y[1] - y[0];
  const auto i = static_cast<std::size_t>((yy - y.front()) / h);
  const std::size_t k = std::min(i, y.size() - 2);
  const double t = (yy - y[k]) / (y[k + 1] - y[k]);
  return (1.0 - t) * f[k] + t * f[k + 1];
}

// phi_+(x) = sum_m d_m e^{i(pi+2 pi m)x} by Horner in e^{2 pi i x}
cplx eval_phi_plus(const DiracPoint& dp, double x) {
  const cplx w = std::polar(1.0, 2.0 * kPi * x);
  cplx acc(0.0, 0.0);
  for (int m = dp.K; m >= -dp.K; --m) acc = acc * w + dp.phi_plus[m + dp.K];
  return acc * std::polar(1.0, (kPi - 2.0 * kPi * dp.K) * x);
}

}  // namespace

Quasimode build_quasimode(const DiracPoint& dp, const SpinorProfile& alpha, double theta_j,
                          double delta, const RealSpaceOperator& grid, int branch_j) {
  if (!dp.invariants_set) throw ValidationError("build_quasimode: Dirac invariants not set");
  if (alpha.y.size() < 2) throw ValidationError("build_quasimode: empty envelope profile");
  const double decay_len = dp.nu_star / std::abs(dp.theta_star);
  if (alpha.y[1] - alpha.y[0] > 0.05 * decay_len)
    throw ValidationError("build_quasimode: envelope grid too coarse (need >= 20 points "
                          "per decay length)");

  // The effective operator is written with the coupling matrix
  // [[0, conj(theta)], [theta, 0]]; the resonant projection of W against the
  // eigenbasis couples through <phi_+, W phi_-> = theta instead, so the lower
  // envelope picks up the relative phase conj(theta)^2/|theta|^2.
  const cplx phase = std::pow(std::conj(dp.theta_star) / std::abs(dp.theta_star), 2);

  Quasimode q;
  q.E = dp.E_star + theta_j * delta;
  q.j = branch_j;
  q.values.resize(grid.size());
  double n2 = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.node(i);
    const double y = delta * x;
    const cplx ap = interp_profile(alpha.y, alpha.up, y);
    const cplx am = interp_profile(alpha.y, alpha.dn, y);
    const cplx ph = eval_phi_plus(dp, x);
    q.values[i] = ap * ph + phase * am * std::conj(ph);
    n2 += std::norm(q.values[i]);
  }
  const double s = 1.0 / std::sqrt(n2 * grid.h);
  for (auto& v : q.values) v *= s;
  return q;
}

double quasimode_residual(const RealSpaceOperator& op, const Quasimode& q) {
  const std::size_t n = op.size();
  if (q.values.size() != n) throw ValidationError("quasimode_residual: grid mismatch");
  // the target energy lives in the continuum metric; the matrix carries the
  // pi-wavenumber dispersion bias
  const double E_h = q.E - op.dispersion_shift();
  double r2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cplx v = (op.matrix.diag[i] - E_h) * q.values[i];
    if (i > 0) v += op.matrix.off * q.values[i - 1];
    if (i + 1 < n) v += op.matrix.off * q.values[i + 1];
    r2 += std::norm(v);
  }
  return std::sqrt(r2 * op.h);
}

bool quasimode_gap_bound(const std::vector<double>& spectrum, double E, double eps) {
  if (spectrum.empty()) throw ValidationError("quasimode_gap_bound: empty spectrum");
  double d = 1e300;
  for (double s : spectrum) d = std::min(d, std::abs(s - E));
  return d <= eps * (1.0 + 1e-12) + 1e-300;
}

EigvecBound quasimode_eigvec_bound(const Eigen::VectorXd& eigvals, const Eigen::MatrixXd& eigvecs,
                                   const Eigen::VectorXd& v, double E, double eps, double C) {
  EigvecBound out;
  if (!(C > 1.0)) return out;
  int inside = -1;
  for (int i = 0; i < eigvals.size(); ++i) {
    if (std::abs(eigvals[i] - E) <= C * eps) {
      if (inside >= 0) return out;  // not isolated
      inside = i;
    }
  }
  if (inside < 0) return out;
  out.applicable = true;
  const Eigen::VectorXd u = eigvecs.col(inside);
  const double a = u.dot(v);
  out.distance = (v - a * u).norm();
  out.bound = 1.0 / C;
  out.holds = out.distance <= out.bound * (1.0 + 1e-12);
  return out;
}

SlopeFit fit_slope(const std::vector<double>& deltas, const std::vector<double>& energies,
                   double E_star, double theta_j) {
  if (deltas.size() != energies.size() || deltas.size() < 3)
    throw ValidationError("fit_slope: need at least 3 consistent samples");
  // normal equations for y = s d + c d^2
  double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const double d = deltas[i], y = energies[i] - E_star;
    s11 += d * d;
    s12 += d * d * d;
    s22 += d * d * d * d;
    b1 += d * y;
    b2 += d * d * y;
  }
  const double det = s11 * s22 - s12 * s12;
  if (std::abs(det) < 1e-30) throw NumericalError("fit_slope: degenerate design matrix");
  SlopeFit f;
  f.slope = (b1 * s22 - b2 * s12) / det;
  f.curvature = (s11 * b2 - s12 * b1) / det;
  f.slope_err = std::abs(f.slope - theta_j);
  return f;
}

// ---------------------------------------------------------------------------

EffectiveSetup make_effective_setup(const DiracPoint& dp, DomainWall::Shape shape,
                                    double scale_rel, const SweepNumerics& num) {
  if (!dp.invariants_set) throw ValidationError("make_effective_setup: invariants not set");
  const double ta = std::abs(dp.theta_star);
  const double unit = dp.nu_star / ta;
  const DomainWall wall = (shape == DomainWall::Shape::Tanh)
                              ? DomainWall::tanh_wall(scale_rel * unit)
                              : DomainWall::smoothstep_wall(scale_rel * unit);
  EffectiveSetup s{EffectiveDiracOperator(dp.nu_star, dp.theta_star, wall), 0.0, 0, 0.0, 0};

  const double x_ref = 12.0 * unit;
  s.X_evans = std::max(x_ref, wall.saturation_length() * 1.0001);
  // extended walls may run at up to 4x the reference step: the RK4 global
  // error stays ~1e-12, three orders below the conservation budget
  s.evans_steps = num.evans_steps;
  while (4.0 * s.evans_steps * x_ref < static_cast<double>(num.evans_steps) * s.X_evans)
    s.evans_steps *= 2;

  s.Y_grid = wall.saturation_length() + 12.0 * unit;
  s.grid_n = num.grid_n;
  while (static_cast<double>(s.grid_n) * x_ref < num.grid_n * s.Y_grid) s.grid_n *= 2;
  return s;
}

double cross_validate_thetas(const std::vector<double>& evans, const std::vector<double>& grid,
                             double theta_star_abs, double tol) {
  const double cut = 0.95 * theta_star_abs;
  std::vector<double> a, b;
  for (double t : evans)
    if (std::abs(t) <= cut) a.push_back(t);
  for (double t : grid)
    if (std::abs(t) <= cut) b.push_back(t);
  if (a.size() != b.size())
    throw NumericalError("effective spectra disagree in count: evans " +
                         std::to_string(a.size()) + " vs grid " + std::to_string(b.size()) +
                         " inside 0.95 |theta*|");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  if (worst > tol)
    throw NumericalError("effective spectra disagree: max |evans - grid| = " +
                         std::to_string(worst) + " > " + std::to_string(tol));
  return worst;
}

SweepReport run_sweep(const PeriodicFunction& V, const PeriodicFunction& W,
                      DomainWall::Shape wall_shape, double wall_scale_rel,
                      const SweepConfig& sweep, const SweepNumerics& num) {
  if (sweep.deltas.empty()) throw ValidationError("sweep: empty delta list");
  for (std::size_t i = 0; i + 1 < sweep.deltas.size(); ++i)
    if (!(sweep.deltas[i] > sweep.deltas[i + 1]) || !(sweep.deltas.back() > 0.0))
      throw ValidationError("sweep: deltas must be positive and decreasing");

  SweepReport rep;

  // Dirac point of the periodic background (lowest pair)
  const auto dps = find_dirac_points(V, num.K, num.max_energy);
  if (dps.empty()) throw NumericalError("sweep: no Dirac point below max_energy");
  DiracPoint dp = dirac_eigenbasis(V, dps[0].first, dps[0].second, num.K);
  dp = compute_invariants(dp, W);
  rep.E_star = dp.E_star;
  rep.j_star = dp.j_star;
  rep.nu_star = dp.nu_star;
  rep.theta_star = dp.theta_star;
  const double ta = std::abs(dp.theta_star);

  if (!(sweep.theta_sharp > 0.0 && sweep.theta_sharp < 1.0))
    throw ValidationError("sweep: theta_sharp must lie in (0, 1)");

  // effective spectrum, both routes
  const EffectiveSetup es = make_effective_setup(dp, wall_shape, wall_scale_rel, num);
  const DiracSpectrum sp_evans =
      dirac_spectrum_evans(es.op, es.X_evans, es.evans_steps, num.evans_scan, num.threads);
  const DiracSpectrum sp_grid = dirac_spectrum_grid(es.op, es.Y_grid, es.grid_n);
  rep.thetas = sp_evans.thetas;
  rep.thetas_grid = sp_grid.thetas;
  const double grid_h = 2.0 * es.Y_grid / es.grid_n;
  rep.effective_max_discrepancy = cross_validate_thetas(
      sp_evans.thetas, sp_grid.thetas, ta, std::max(1e-6, 10.0 * grid_h * grid_h));

  // zero branch = theta closest to 0
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < rep.thetas.size(); ++i)
    if (std::abs(rep.thetas[i]) < std::abs(rep.thetas[i0])) i0 = i;

  const auto xi_grid = uniform_xi_grid(num.xi_points);
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> fit_data;  // j -> (d, E)
  std::map<int, int> fit_breaks;

  for (double delta : sweep.deltas) {
    DeltaRecord rec;
    rec.delta = delta;

    const auto bands = band_structure(V, W, delta, xi_grid, num.K, dp.j_star + 1, num.threads);
    const SpectralGap gap = essential_gap(bands, dp.j_star);
    rec.gap_lo = gap.lower_edge;
    rec.gap_hi = gap.upper_edge;
    if (gap.width() <= 20.0 * num.h * num.h) {
      rec.skipped = true;
      rep.records.push_back(std::move(rec));
      continue;
    }

    const double half = sweep.theta_sharp * ta * delta;
    rec.window_lo = std::max(dp.E_star - half, gap.lower_edge + num.margin * gap.width());
    rec.window_hi = std::min(dp.E_star + half, gap.upper_edge - num.margin * gap.width());

    double X = required_half_width(es.op.wall, delta, dp.nu_star, ta);
    X = std::ceil(X / num.h) * num.h;
    const RealSpaceOperator op = assemble_dislocated(V, W, es.op.wall, delta, X, num.h);

    const double S = op.dispersion_shift();
    rec.count_window = count_eigs(op, rec.window_lo - S, rec.window_hi - S);
    std::vector<int> window_js;
    for (std::size_t i = 0; i < rep.thetas.size(); ++i)
      if (std::abs(rep.thetas[i]) < sweep.theta_sharp * ta)
        window_js.push_back(static_cast<int>(i));
    rec.count_expected = static_cast<int>(window_js.size());

    std::map<int, int> hits;  // theta index -> #assigned
    for_each_gap_eig(op, rec.window_lo, rec.window_hi, num.seed, [&](const GapEigenpair& p) {
      // nearest-prediction assignment
      int best = -1;
      double bd = 1e300;
      for (int idx : window_js) {
        const double d = std::abs(p.E - (dp.E_star + rep.thetas[idx] * delta));
        if (d < bd) {
          bd = d;
          best = idx;
        }
      }
      if (best < 0) return;
      ++hits[best];
      BranchSample bs;
      bs.j = best - static_cast<int>(i0);
      bs.theta_j = rep.thetas[best];
      bs.E = p.E;
      bs.predicted = dp.E_star + rep.thetas[best] * delta;
      bs.residual = p.E - bs.predicted;
      bs.boundary_amplitude = p.boundary_amplitude;

      const auto& alpha = sp_grid.eigenvectors[nearest_index(sp_grid.thetas, rep.thetas[best])];
      const Quasimode q = build_quasimode(dp, alpha, rep.thetas[best], delta, op, bs.j);
      cplx ov(0.0, 0.0);
      for (std::size_t i = 0; i < p.vec.size(); ++i) ov += std::conj(q.values[i]) * p.vec[i];
      bs.overlap = std::abs(ov) * op.h;
      bs.qm_residual = quasimode_residual(op, q);
      rec.branches.push_back(bs);
    });

    rec.assignment_ok = rec.count_window == rec.count_expected &&
                        static_cast<int>(hits.size()) == rec.count_expected;
    for (auto& [idx, c] : hits)
      if (c != 1) rec.assignment_ok = false;

    for (const auto& bs : rec.branches) {
      if (rec.assignment_ok) {
        fit_data[bs.j].first.push_back(delta);
        fit_data[bs.j].second.push_back(bs.E);
      } else {
        ++fit_breaks[bs.j];
      }
    }
    rep.records.push_back(std::move(rec));
  }

  for (auto& [j, de] : fit_data) {
    BranchFit bf;
    bf.j = j;
    bf.theta_j = rep.thetas[static_cast<std::size_t>(j + static_cast<int>(i0))];
    bf.consistent = de.first.size() >= 3 && fit_breaks[j] == 0;
    if (bf.consistent) bf.fit = fit_slope(de.first, de.second, dp.E_star, bf.theta_j);
    rep.fits.push_back(bf);
  }
  return rep;
}

}  // namespace speclab

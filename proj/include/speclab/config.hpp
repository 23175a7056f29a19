#pragma once

#include <cstdint>
#include <map>

#include "speclab/effective_dirac.hpp"
#include "speclab/fourier.hpp"

namespace speclab {

// Parsed run configuration. The document is a flat, sectioned key-value file:
// one `key = value` per line, `[section]` headers, arrays as comma lists,
// potentials as flattened (m, re, im) triples. Unknown keys are rejected.
struct RunConfig {
  std::uint64_t seed = 0;

  // [model]
  std::map<int, cplx> v_coeffs;
  std::map<int, cplx> w_coeffs;
  Parity v_parity = Parity::EvenHarmonic;
  Parity w_parity = Parity::OddHarmonic;
  DomainWall::Shape wall_shape = DomainWall::Shape::Tanh;
  double wall_scale_rel = 1.0;  // in units of nu*/|theta*|

  // [numerics]
  int K = 16;
  int xi_points = 257;
  double h = 1.0 / 64.0;
  int n_bands = 8;
  int evans_steps = 1 << 14;
  int evans_scan = 2048;
  int grid_n = 1 << 13;
  double max_energy = 50.0;
  double degeneracy_tol = 1e-9;
  double margin = 0.02;

  // [bands]
  double bands_delta = 0.0;

  // [dislocated]
  double dislocated_delta = 0.02;

  // [sweep]
  std::vector<double> deltas = {0.08, 0.04, 0.02, 0.01};
  double theta_sharp = 0.95;

  // [output]
  std::string out_dir = ".";
  std::vector<std::string> formats = {"json", "csv", "svg"};

  PeriodicFunction make_V() const;
  PeriodicFunction make_W() const;

  // Deterministic serialization of every field; hashed into output names.
  std::string canonical() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

std::string config_hash(const RunConfig& cfg);  // 16 hex chars, FNV-1a

}  // namespace speclab

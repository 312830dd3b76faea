#pragma once

#include <vector>

#include "east/ed.hpp"
#include "east/model.hpp"
#include "east/mps.hpp"

namespace eastsim {

/// Matrix product operator tensor: (wl x wr) grid of 2x2 site operators.
struct MpoTensor {
  int wl = 0, wr = 0;
  std::vector<Eigen::Matrix2cd> ops;  // row-major, wl*wr entries

  const Eigen::Matrix2cd& op(int a, int b) const { return ops[a * wr + b]; }
  Eigen::Matrix2cd& op(int a, int b) { return ops[a * wr + b]; }
};

/// MPO for the sum of nearest-neighbor bond terms; bond dimension
/// 2 + rank(h_r) <= 6.
std::vector<MpoTensor> build_mpo(const ModelSpec& spec);

struct DmrgParams {
  int max_sweeps = 30;
  double energy_tol = 1e-10;           // |dE| per full sweep
  std::vector<int> chi_schedule = {16, 32, 64};  // extended with last value
  double cutoff = 1e-10;
  PinMode pin = PinMode::None;
  int eig_max_iter = 200;
  double eig_tol = 1e-12;

  void validate() const;
  int chi_for_sweep(int sweep) const;
};

struct SweepRecord {
  int sweep = 0;
  double energy = 0.0;
  double delta_energy = 0.0;
  int max_chi = 0;
};

struct DmrgResult {
  double energy = 0.0;
  Mps state;
  std::vector<SweepRecord> log;
  bool converged = false;
};

/// Two-site ground-state search. Pinned boundary sites are frozen to the
/// occupied state via a projector inside the local eigensolver.
DmrgResult dmrg_ground(const ModelSpec& spec, const DmrgParams& params);

struct LocalizationFit {
  double xi = 0.0;         // localization length, -1/slope
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;   // rms of ln-profile fit residuals
  bool degenerate = false; // flat profile, xi unbounded
};

/// Least-squares line through (i, ln<n_i>) over the given 1-based
/// inclusive site window.
LocalizationFit fit_localization_length(const std::vector<double>& profile,
                                        int window_first, int window_last);

/// Default sector choice: left for East, right for West, both ends for a
/// heterojunction.
PinMode default_pin(ChainKind kind);

}  // namespace eastsim

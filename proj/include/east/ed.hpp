#pragma once

#include <vector>

#include "east/model.hpp"
#include "east/state.hpp"

namespace eastsim {

inline constexpr int kMaxExactSites = 14;

enum class PinMode { None, Left, Right, Both };

std::string to_string(PinMode pin);
PinMode pin_mode_from_string(const std::string& s);

/// Dense 2^L x 2^L Hamiltonian, sum over embedded bond terms. L <= 14.
Eigen::MatrixXcd assemble_dense(const ModelSpec& spec);

/// H|psi> without forming the dense matrix; O(L 2^L).
Eigen::VectorXcd apply_hamiltonian(const std::vector<BondTerm>& terms, int length,
                                   const Eigen::VectorXcd& psi);

/// Zeroes every amplitude whose pinned boundary site is unoccupied.
void apply_pin_projector(Eigen::VectorXcd& psi, int length, PinMode pin);

struct ExactGroundState {
  double energy = 0.0;
  Eigen::VectorXcd state;
};

/// Lowest eigenpair, optionally restricted to the sector with occupied
/// boundary site(s). Pinning is a projector, not an energetic penalty.
ExactGroundState ground_state_exact(const ModelSpec& spec,
                                    PinMode pin = PinMode::None);

/// |psi(t_k)> = exp(-i H t_k) |psi(0)> for each grid time, by Krylov
/// stepping with substep <= 0.1.
std::vector<Eigen::VectorXcd> evolve_exact(const Eigen::VectorXcd& state,
                                           const ModelSpec& spec,
                                           const std::vector<double>& times);

struct ExactObservables {
  std::vector<double> occupation;  // <n_i>, length L
  std::vector<double> entropy;     // S_r, natural log, length L-1
};

ExactObservables exact_observables(const Eigen::VectorXcd& state, int length);

double exact_energy(const std::vector<BondTerm>& terms, int length,
                    const Eigen::VectorXcd& psi);

}  // namespace eastsim

#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace eastsim {

using Complex = std::complex<double>;
using Matrix4c = Eigen::Matrix4cd;

enum class ChainKind { East, West, Heterojunction };

std::string to_string(ChainKind kind);
ChainKind chain_kind_from_string(const std::string& s);

/// Per-site chemical potentials. Sites are 1-based throughout the public
/// API. Entries that no Hamiltonian term touches carry an explicit
/// "unused" marker instead of a silent zero.
class PotentialProfile {
 public:
  PotentialProfile() = default;
  PotentialProfile(std::vector<std::optional<double>> mu, int drive_size,
                   double mu_drive, double mu_spacer);

  int length() const { return static_cast<int>(mu_.size()); }
  bool used(int site) const;
  /// Throws if the site carries no potential term.
  double at(int site) const;
  const std::vector<std::optional<double>>& raw() const { return mu_; }

  int drive_size() const { return drive_size_; }
  double mu_drive() const { return mu_drive_; }
  double mu_spacer() const { return mu_spacer_; }

  /// Replace the used entries wholesale (per-site override from configs).
  void override_mu(const std::vector<std::optional<double>>& mu);

 private:
  std::vector<std::optional<double>> mu_;
  int drive_size_ = 0;
  double mu_drive_ = 0.0;
  double mu_spacer_ = 0.0;
};

/// Drive/spacer layout: drive sites are 1..D, but the potential on site i
/// controls site i+1, so only sites 1..D-1 carry mu_drive and the last
/// drive site already carries mu_spacer. West profiles are the exact
/// mirror of the East ones under i <-> L+1-i.
PotentialProfile build_potential_profile(ChainKind kind, int length,
                                         int drive_size, double mu_drive,
                                         double mu_spacer);

struct ModelSpec {
  ChainKind kind = ChainKind::East;
  int length = 0;
  PotentialProfile profile;

  /// East half size N for a heterojunction (length = 2N).
  int junction() const { return length / 2; }
  void validate() const;
};

ModelSpec make_model(ChainKind kind, int length, int drive_size,
                     double mu_drive, double mu_spacer);

/// Heterojunction with different drive potentials on the two halves
/// (mu_drive of the stored profile reports the East value).
ModelSpec make_heterojunction(int length, int drive_size, double mu_drive_east,
                              double mu_drive_west, double mu_spacer);

/// One nearest-neighbor term of the Hamiltonian. The 4x4 matrix lives in
/// the ordered product basis {|00>, |01>, |10>, |11>} of sites (r, r+1),
/// with |1> the occupied state.
struct BondTerm {
  int bond = 0;  // couples sites (bond, bond+1), 1-based
  Matrix4c matrix = Matrix4c::Zero();
};

/// Exact decomposition H = sum_r BondTerm(r). Every one-site mu n term is
/// folded into exactly one bond, so Trotterization over bonds is exact at
/// the term level.
std::vector<BondTerm> compile_bond_terms(const ModelSpec& spec);

/// Weighted basis states, the image of a bond term on a product state.
using BasisExpansion = std::vector<std::pair<std::string, Complex>>;

/// Applies a single bond term to an occupation bit-string ('0'/'1',
/// site 1 leftmost). Exact; used as the oracle for the facilitation and
/// inhibition branches.
BasisExpansion apply_bond_term(const BondTerm& term,
                               const std::string& basis_state);

namespace pauli {
Eigen::Matrix2cd identity();
Eigen::Matrix2cd sigma_x();
Eigen::Matrix2cd sigma_z();
Eigen::Matrix2cd number();  // n = (1 - sigma_z)/2 = |1><1|
}  // namespace pauli

}  // namespace eastsim

#pragma once

#include <array>
#include <string>
#include <vector>

#include "east/model.hpp"
#include "east/state.hpp"

namespace eastsim {

struct TruncationReport {
  double discarded = 0.0;  // sum of dropped Schmidt weights lambda^2
  int max_dim = 1;         // largest bond dimension reached

  void merge(const TruncationReport& other) {
    discarded += other.discarded;
    max_dim = std::max(max_dim, other.max_dim);
  }
};

/// Which side keeps the singular values after a two-site split.
enum class SplitSide { Left, Right };

/// Open-boundary MPS in mixed canonical form. Site tensors are pairs of
/// (left-dim x right-dim) matrices indexed by the physical occupation.
/// Sites and bonds are 1-based; bond r sits between sites r and r+1.
class Mps {
 public:
  using SiteTensor = std::array<Eigen::MatrixXcd, 2>;

  Mps() = default;  // empty; fill via from_product or load

  static Mps from_product(const ProductStateSpec& spec);

  int length() const { return static_cast<int>(sites_.size()); }
  int center() const { return center_; }
  int bond_dim(int bond) const;  // dimension across bond r
  int max_bond_dim() const;

  const SiteTensor& site(int i) const { return sites_[i - 1]; }
  SiteTensor& site_mutable(int i) { return sites_[i - 1]; }

  /// Moves the canonical center, keeping the state unchanged up to gauge.
  /// Schmidt spectra are recorded for every bond the center crosses.
  void canonicalize(int new_center, int chi_max = 0, double cutoff = 0.0);

  double norm() const;
  void normalize();

  /// Applies a two-site gate at bond r (4x4, basis {|00>,|01>,|10>,|11>}
  /// of sites r, r+1), splits by SVD, truncates to chi_max / cutoff and
  /// renormalizes. The center ends on the side given by `side`.
  TruncationReport apply_two_site_gate(int r, const Matrix4c& gate,
                                       int chi_max, double cutoff,
                                       SplitSide side = SplitSide::Right,
                                       bool check_unitary = false);

  double expect_occupation(int site) const;
  std::complex<double> expect_one_site(int site,
                                       const Eigen::Matrix2cd& op) const;
  std::complex<double> expect_bond(int r, const Matrix4c& op) const;
  double energy(const std::vector<BondTerm>& terms) const;

  /// Von Neumann entropy from the stored bond-r Schmidt spectrum
  /// (natural log). Valid when the spectrum is current; use
  /// all_bond_entropies for a guaranteed-fresh sweep.
  double bond_entropy(int r) const;
  const Eigen::VectorXd& schmidt_spectrum(int r) const;

  /// Recomputes every bond spectrum by a canonical sweep, then reports
  /// all L-1 entropies.
  std::vector<double> all_bond_entropies();

  /// Single sweep producing all <n_i> and all S_r. Assumes a normalized
  /// state; moves the gauge center but not the state.
  std::pair<std::vector<double>, std::vector<double>> measure_profile();

  std::complex<double> overlap(const Mps& other) const;  // <this|other>

  Eigen::VectorXcd to_dense() const;  // guard L <= 20

  /// Bookkeeping hook for callers that split a two-site block themselves
  /// (the DMRG sweep): records the bond spectrum and the new center.
  void set_center_after_split(int bond, SplitSide side,
                              const Eigen::VectorXd& schmidt);

  void save(const std::string& path) const;
  static Mps load(const std::string& path);

 private:
  void move_center_right(int chi_max, double cutoff);
  void move_center_left(int chi_max, double cutoff);

  std::vector<SiteTensor> sites_;
  std::vector<Eigen::VectorXd> schmidt_;  // per bond, descending, sum sq = 1
  int center_ = 1;
};

Mps mps_from_product(const ProductStateSpec& spec);

double entropy_from_spectrum(const Eigen::VectorXd& schmidt);

}  // namespace eastsim

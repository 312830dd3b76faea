#include "east/model.hpp"

#include <stdexcept>

namespace eastsim {

std::string to_string(ChainKind kind) {
  switch (kind) {
    case ChainKind::East: return "East";
    case ChainKind::West: return "West";
    case ChainKind::Heterojunction: return "Heterojunction";
  }
  return "?";
}

ChainKind chain_kind_from_string(const std::string& s) {
  if (s == "East" || s == "east") return ChainKind::East;
  if (s == "West" || s == "west") return ChainKind::West;
  if (s == "Heterojunction" || s == "heterojunction" || s == "hetero")
    return ChainKind::Heterojunction;
  throw std::invalid_argument("unknown chain kind: " + s);
}

PotentialProfile::PotentialProfile(std::vector<std::optional<double>> mu,
                                   int drive_size, double mu_drive,
                                   double mu_spacer)
    : mu_(std::move(mu)),
      drive_size_(drive_size),
      mu_drive_(mu_drive),
      mu_spacer_(mu_spacer) {}

bool PotentialProfile::used(int site) const {
  if (site < 1 || site > length())
    throw std::out_of_range("site index out of range");
  return mu_[site - 1].has_value();
}

double PotentialProfile::at(int site) const {
  if (!used(site))
    throw std::logic_error("site " + std::to_string(site) +
                           " carries no potential term");
  return *mu_[site - 1];
}

void PotentialProfile::override_mu(
    const std::vector<std::optional<double>>& mu) {
  if (static_cast<int>(mu.size()) != length())
    throw std::invalid_argument("mu override length mismatch");
  for (int i = 0; i < length(); ++i) {
    if (mu_[i].has_value() != mu[i].has_value())
      throw std::invalid_argument(
          "mu override must match the used/unused layout of the profile");
  }
  mu_ = mu;
}

namespace {

// East chain of n sites: mu on sites 1..n-1, site n unused.
std::vector<std::optional<double>> east_mu(int n, int drive_size,
                                           double mu_drive, double mu_spacer) {
  std::vector<std::optional<double>> mu(n);
  for (int i = 1; i <= n - 1; ++i)
    mu[i - 1] = (i <= drive_size - 1) ? mu_drive : mu_spacer;
  return mu;
}

std::vector<std::optional<double>> mirrored(
    const std::vector<std::optional<double>>& mu) {
  return {mu.rbegin(), mu.rend()};
}

}  // namespace

PotentialProfile build_potential_profile(ChainKind kind, int length,
                                         int drive_size, double mu_drive,
                                         double mu_spacer) {
  if (length < 2) throw std::invalid_argument("chain length must be >= 2");
  if (!std::isfinite(mu_drive) || !std::isfinite(mu_spacer))
    throw std::invalid_argument("potentials must be finite");
  if (drive_size < 1 || drive_size > length / 2)
    throw std::invalid_argument("drive size must lie in [1, L/2]");

  std::vector<std::optional<double>> mu;
  switch (kind) {
    case ChainKind::East:
      mu = east_mu(length, drive_size, mu_drive, mu_spacer);
      break;
    case ChainKind::West:
      mu = mirrored(east_mu(length, drive_size, mu_drive, mu_spacer));
      break;
    case ChainKind::Heterojunction: {
      if (length % 2 != 0 || length < 4)
        throw std::invalid_argument("heterojunction requires even length >= 4");
      int n = length / 2;
      auto east = east_mu(n, drive_size, mu_drive, mu_spacer);
      auto west = mirrored(east);
      mu = east;
      mu.insert(mu.end(), west.begin(), west.end());
      break;
    }
  }
  return PotentialProfile(std::move(mu), drive_size, mu_drive, mu_spacer);
}

void ModelSpec::validate() const {
  if (length < 2) throw std::invalid_argument("chain length must be >= 2");
  if (kind == ChainKind::Heterojunction && (length % 2 != 0 || length < 4))
    throw std::invalid_argument("heterojunction requires even length >= 4");
  if (profile.length() != length)
    throw std::invalid_argument("profile length does not match chain length");
}

ModelSpec make_model(ChainKind kind, int length, int drive_size,
                     double mu_drive, double mu_spacer) {
  ModelSpec spec;
  spec.kind = kind;
  spec.length = length;
  spec.profile =
      build_potential_profile(kind, length, drive_size, mu_drive, mu_spacer);
  spec.validate();
  return spec;
}

ModelSpec make_heterojunction(int length, int drive_size, double mu_drive_east,
                              double mu_drive_west, double mu_spacer) {
  ModelSpec spec = make_model(ChainKind::Heterojunction, length, drive_size,
                              mu_drive_east, mu_spacer);
  if (mu_drive_west != mu_drive_east) {
    const int n = length / 2;
    auto mu = spec.profile.raw();
    auto west = mirrored(east_mu(n, drive_size, mu_drive_west, mu_spacer));
    for (int i = 0; i < n; ++i) mu[n + i] = west[i];
    spec.profile.override_mu(mu);
  }
  return spec;
}

namespace pauli {
Eigen::Matrix2cd identity() { return Eigen::Matrix2cd::Identity(); }
Eigen::Matrix2cd sigma_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
Eigen::Matrix2cd sigma_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}
Eigen::Matrix2cd number() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(1, 1) = 1;
  return m;
}
}  // namespace pauli

namespace {

// Product basis index of sites (r, r+1): 2*left + right, |1> = occupied.
Matrix4c kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Matrix4c m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return m;
}

// East bond r: (1/2) mu_r n_r - (1/2) n_r sigma^x_{r+1}
Matrix4c east_bond_matrix(double mu) {
  return 0.5 * mu * kron2(pauli::number(), pauli::identity()) -
         0.5 * kron2(pauli::number(), pauli::sigma_x());
}

// West bond r: (1/2) mu_{r+1} n_{r+1} - (1/2) sigma^x_r n_{r+1}
Matrix4c west_bond_matrix(double mu) {
  return 0.5 * mu * kron2(pauli::identity(), pauli::number()) -
         0.5 * kron2(pauli::sigma_x(), pauli::number());
}

// Hermitian hopping -(1/2)(s+_N s-_{N+1} + s-_N s+_{N+1}): exchanges
// |10> <-> |01> with amplitude -1/2 and annihilates |00>, |11>.
Matrix4c contact_matrix() {
  Matrix4c m = Matrix4c::Zero();
  m(1, 2) = -0.5;
  m(2, 1) = -0.5;
  return m;
}

}  // namespace

std::vector<BondTerm> compile_bond_terms(const ModelSpec& spec) {
  spec.validate();
  std::vector<BondTerm> terms;
  const auto& mu = spec.profile;
  switch (spec.kind) {
    case ChainKind::East:
      for (int r = 1; r <= spec.length - 1; ++r)
        terms.push_back({r, east_bond_matrix(mu.at(r))});
      break;
    case ChainKind::West:
      for (int r = 1; r <= spec.length - 1; ++r)
        terms.push_back({r, west_bond_matrix(mu.at(r + 1))});
      break;
    case ChainKind::Heterojunction: {
      int n = spec.junction();
      for (int r = 1; r <= n - 1; ++r)
        terms.push_back({r, east_bond_matrix(mu.at(r))});
      terms.push_back({n, contact_matrix()});
      for (int r = n + 1; r <= 2 * n - 1; ++r)
        terms.push_back({r, west_bond_matrix(mu.at(r + 1))});
      break;
    }
  }
  return terms;
}

BasisExpansion apply_bond_term(const BondTerm& term,
                               const std::string& basis_state) {
  const int len = static_cast<int>(basis_state.size());
  if (term.bond < 1 || term.bond + 1 > len)
    throw std::out_of_range("bond index out of range for state length");
  for (char c : basis_state)
    if (c != '0' && c != '1')
      throw std::invalid_argument("basis state must be a 0/1 string");

  const int left = basis_state[term.bond - 1] - '0';
  const int right = basis_state[term.bond] - '0';
  const int in = 2 * left + right;

  BasisExpansion out;
  for (int idx = 0; idx < 4; ++idx) {
    Complex amp = term.matrix(idx, in);
    if (amp == Complex{0.0, 0.0}) continue;
    std::string img = basis_state;
    img[term.bond - 1] = static_cast<char>('0' + (idx >> 1));
    img[term.bond] = static_cast<char>('0' + (idx & 1));
    out.emplace_back(std::move(img), amp);
  }
  return out;
}

}  // namespace eastsim

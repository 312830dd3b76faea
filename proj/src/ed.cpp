#include "east/ed.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

#include "east/linalg.hpp"

namespace eastsim {

std::string to_string(PinMode pin) {
  switch (pin) {
    case PinMode::None: return "none";
    case PinMode::Left: return "left";
    case PinMode::Right: return "right";
    case PinMode::Both: return "both";
  }
  return "?";
}

PinMode pin_mode_from_string(const std::string& s) {
  if (s == "none") return PinMode::None;
  if (s == "left") return PinMode::Left;
  if (s == "right") return PinMode::Right;
  if (s == "both") return PinMode::Both;
  throw std::invalid_argument("unknown pin mode: " + s);
}

namespace {

void check_size(const ModelSpec& spec) {
  if (spec.length > kMaxExactSites)
    throw std::invalid_argument("exact backend limited to L <= " +
                                std::to_string(kMaxExactSites));
}

}  // namespace

Eigen::MatrixXcd assemble_dense(const ModelSpec& spec) {
  check_size(spec);
  const std::size_t dim = std::size_t{1} << spec.length;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& term : compile_bond_terms(spec)) {
    // Site 1 is the most significant bit.
    const int shift = spec.length - term.bond - 1;
    for (std::size_t col = 0; col < dim; ++col) {
      const int in = static_cast<int>((col >> shift) & 3u);
      for (int out = 0; out < 4; ++out) {
        const Complex amp = term.matrix(out, in);
        if (amp == Complex{}) continue;
        const std::size_t row =
            (col & ~(std::size_t{3} << shift)) |
            (static_cast<std::size_t>(out) << shift);
        h(row, col) += amp;
      }
    }
  }
  return h;
}

Eigen::VectorXcd apply_hamiltonian(const std::vector<BondTerm>& terms,
                                   int length, const Eigen::VectorXcd& psi) {
  const std::size_t dim = psi.size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
  for (const auto& term : terms) {
    const int shift = length - term.bond - 1;
    for (std::size_t col = 0; col < dim; ++col) {
      const Complex amp_in = psi(col);
      if (amp_in == Complex{}) continue;
      const int in = static_cast<int>((col >> shift) & 3u);
      for (int o = 0; o < 4; ++o) {
        const Complex m = term.matrix(o, in);
        if (m == Complex{}) continue;
        const std::size_t row = (col & ~(std::size_t{3} << shift)) |
                                (static_cast<std::size_t>(o) << shift);
        out(row) += m * amp_in;
      }
    }
  }
  return out;
}

void apply_pin_projector(Eigen::VectorXcd& psi, int length, PinMode pin) {
  if (pin == PinMode::None) return;
  const std::size_t dim = psi.size();
  const std::size_t left_bit = std::size_t{1} << (length - 1);
  const bool pin_left = pin == PinMode::Left || pin == PinMode::Both;
  const bool pin_right = pin == PinMode::Right || pin == PinMode::Both;
  for (std::size_t i = 0; i < dim; ++i) {
    if ((pin_left && !(i & left_bit)) || (pin_right && !(i & 1u))) psi(i) = 0.0;
  }
}

ExactGroundState ground_state_exact(const ModelSpec& spec, PinMode pin) {
  check_size(spec);
  const auto terms = compile_bond_terms(spec);
  const std::size_t dim = std::size_t{1} << spec.length;
  MatVec projected = [&](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd in = v;
    apply_pin_projector(in, spec.length, pin);
    Eigen::VectorXcd out = apply_hamiltonian(terms, spec.length, in);
    apply_pin_projector(out, spec.length, pin);
    return out;
  };
  // Deterministic pseudo-random start with support on the whole sector.
  Eigen::VectorXcd init(dim);
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
  for (std::size_t i = 0; i < dim; ++i) {
    seed = seed * 6364136223846793005ull + 1442695040888963407ull;
    init(i) = Complex(1.0 + double(seed >> 40) * 1e-7, 0.0);
  }
  apply_pin_projector(init, spec.length, pin);
  auto res = lanczos_lowest(projected, init, 1e-13, 600);
  ExactGroundState gs;
  gs.energy = res.eigenvalue;
  gs.state = res.eigenvector;
  apply_pin_projector(gs.state, spec.length, pin);
  gs.state.normalize();
  return gs;
}

std::vector<Eigen::VectorXcd> evolve_exact(const Eigen::VectorXcd& state,
                                           const ModelSpec& spec,
                                           const std::vector<double>& times) {
  check_size(spec);
  const auto terms = compile_bond_terms(spec);
  MatVec apply = [&](const Eigen::VectorXcd& v) {
    return apply_hamiltonian(terms, spec.length, v);
  };
  std::vector<Eigen::VectorXcd> trajectory;
  trajectory.reserve(times.size());
  Eigen::VectorXcd psi = state;
  double now = 0.0;
  for (double t : times) {
    if (!std::isfinite(t)) throw std::invalid_argument("non-finite grid time");
    double remaining = t - now;
    if (remaining < 0.0)
      throw std::invalid_argument("time grid must be non-decreasing");
    while (remaining > 1e-15) {
      const double step = std::min(remaining, 0.1);
      psi = krylov_expm_step(apply, psi, step, 30);
      remaining -= step;
    }
    now = t;
    psi.normalize();
    trajectory.push_back(psi);
  }
  return trajectory;
}

ExactObservables exact_observables(const Eigen::VectorXcd& state, int length) {
  const std::size_t dim = state.size();
  if (dim != (std::size_t{1} << length))
    throw std::invalid_argument("state size does not match site count");
  ExactObservables obs;
  obs.occupation.assign(length, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    const double p = std::norm(state(i));
    if (p == 0.0) continue;
    for (int site = 1; site <= length; ++site)
      if (i & (std::size_t{1} << (length - site))) obs.occupation[site - 1] += p;
  }
  obs.entropy.assign(length - 1, 0.0);
  for (int cut = 1; cut <= length - 1; ++cut) {
    const std::size_t rows = std::size_t{1} << cut;
    const std::size_t cols = dim / rows;
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
        block(state.data(), rows, cols);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block);
    double s = 0.0;
    for (int k = 0; k < svd.singularValues().size(); ++k) {
      const double p = svd.singularValues()(k) * svd.singularValues()(k);
      if (p > 1e-14) s -= p * std::log(p);
    }
    obs.entropy[cut - 1] = s;
  }
  return obs;
}

double exact_energy(const std::vector<BondTerm>& terms, int length,
                    const Eigen::VectorXcd& psi) {
  return std::real(psi.dot(apply_hamiltonian(terms, length, psi)));
}

}  // namespace eastsim

#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

namespace eastsim {

/// Product state with at most one superposition site carrying
/// sqrt(alpha)|1> + sqrt(1-alpha)|0>. The pattern entry at alpha_site is
/// ignored in favor of the superposition.
struct ProductStateSpec {
  std::string pattern;                // '0'/'1' per site, site 1 leftmost
  std::optional<int> alpha_site;      // 1-based
  double alpha = 1.0;

  int length() const { return static_cast<int>(pattern.size()); }
  void validate() const;
};

/// Parses "pattern[@site:alpha]", e.g. "111000@4:0.3333".
ProductStateSpec parse_state_spec(const std::string& text);
std::string to_string(const ProductStateSpec& spec);

/// Dense amplitude vector of length 2^L; site 1 is the most significant
/// bit of the basis index.
Eigen::VectorXcd make_state(const ProductStateSpec& spec);

/// rho_0 = number of occupied pattern sites + alpha at the superposition
/// site; equals sum_i <n_i> at t = 0.
double initial_occupation(const ProductStateSpec& spec);

/// Site-reversal i <-> L+1-i, for East<->West duality runs.
ProductStateSpec mirror(const ProductStateSpec& spec);

/// Per-site occupation amplitudes (a_i, b_i) with the local state
/// a_i|0> + b_i|1>; shared by the dense and MPS constructors.
std::pair<double, double> site_amplitudes(const ProductStateSpec& spec,
                                          int site);

}  // namespace eastsim

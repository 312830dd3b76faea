#include "east/state.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace eastsim {

void ProductStateSpec::validate() const {
  if (pattern.empty()) throw std::invalid_argument("empty occupation pattern");
  for (char c : pattern)
    if (c != '0' && c != '1')
      throw std::invalid_argument("pattern must consist of 0/1 characters");
  if (alpha < 0.0 || alpha > 1.0 || !std::isfinite(alpha))
    throw std::invalid_argument("alpha must lie in [0, 1]");
  if (alpha_site && (*alpha_site < 1 || *alpha_site > length()))
    throw std::invalid_argument("alpha site out of range");
}

ProductStateSpec parse_state_spec(const std::string& text) {
  ProductStateSpec spec;
  auto at = text.find('@');
  if (at == std::string::npos) {
    spec.pattern = text;
  } else {
    spec.pattern = text.substr(0, at);
    auto colon = text.find(':', at);
    if (colon == std::string::npos)
      throw std::invalid_argument("expected pattern@site:alpha");
    spec.alpha_site = std::stoi(text.substr(at + 1, colon - at - 1));
    spec.alpha = std::stod(text.substr(colon + 1));
  }
  spec.validate();
  return spec;
}

std::string to_string(const ProductStateSpec& spec) {
  if (!spec.alpha_site) return spec.pattern;
  std::ostringstream os;
  os << spec.pattern << '@' << *spec.alpha_site << ':' << spec.alpha;
  return os.str();
}

std::pair<double, double> site_amplitudes(const ProductStateSpec& spec,
                                          int site) {
  if (spec.alpha_site && *spec.alpha_site == site)
    return {std::sqrt(1.0 - spec.alpha), std::sqrt(spec.alpha)};
  return spec.pattern[site - 1] == '1' ? std::pair{0.0, 1.0}
                                       : std::pair{1.0, 0.0};
}

Eigen::VectorXcd make_state(const ProductStateSpec& spec) {
  spec.validate();
  const int len = spec.length();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(std::size_t{1} << len);
  psi(0) = 1.0;
  // Build up by tensoring one site at a time, site 1 most significant.
  std::size_t dim = 1;
  for (int site = 1; site <= len; ++site) {
    auto [a0, a1] = site_amplitudes(spec, site);
    for (std::size_t k = dim; k-- > 0;) {
      auto amp = psi(k);
      psi(2 * k) = amp * a0;
      psi(2 * k + 1) = amp * a1;
    }
    dim *= 2;
  }
  return psi;
}

double initial_occupation(const ProductStateSpec& spec) {
  spec.validate();
  double rho = 0.0;
  for (int site = 1; site <= spec.length(); ++site) {
    auto [a0, a1] = site_amplitudes(spec, site);
    rho += a1 * a1;
  }
  return rho;
}

ProductStateSpec mirror(const ProductStateSpec& spec) {
  spec.validate();
  ProductStateSpec out = spec;
  out.pattern.assign(spec.pattern.rbegin(), spec.pattern.rend());
  if (spec.alpha_site) out.alpha_site = spec.length() + 1 - *spec.alpha_site;
  return out;
}

}  // namespace eastsim

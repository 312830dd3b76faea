#include "east/mps.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <Eigen/SVD>

namespace eastsim {

namespace {

struct Split {
  Eigen::MatrixXcd u;      // rows x k
  Eigen::VectorXd s;       // k, descending, renormalized to unit sum-sq
  Eigen::MatrixXcd vh;     // k x cols
  double discarded = 0.0;  // relative dropped weight
};

// In-place modified Gram-Schmidt on the columns of v.
void orthonormalize_columns(Eigen::MatrixXcd& v) {
  for (Eigen::Index i = 0; i < v.cols(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j)
      v.col(i) -= v.col(j).dot(v.col(i)) * v.col(j);
    const double n = v.col(i).norm();
    if (n > 0.0) v.col(i) /= n;
  }
}

// SVD via eigendecomposition of the smaller Gram matrix. Much faster than
// the generic SVD at TEBD block sizes, and free of the slow accuracy
// degradation divide-and-conquer SVDs show over millions of repeated
// splits. Columns recovered through 1/sigma are re-orthonormalized; the
// resulting perturbation carries weight sigma^2 and is negligible.
Split truncated_svd(const Eigen::MatrixXcd& m, int chi_max, double cutoff) {
  const bool wide = m.rows() <= m.cols();
  const Eigen::MatrixXcd gram =
      wide ? (m * m.adjoint()).eval() : (m.adjoint() * m).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("Gram eigendecomposition failed in SVD split");
  const Eigen::Index n = gram.rows();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    total += std::max(es.eigenvalues()(i), 0.0);
  if (total <= 0.0) throw std::runtime_error("zero tensor in SVD split");
  const double largest2 = std::max(es.eigenvalues()(n - 1), 0.0);

  // Eigenvalues come ascending; keep from the top.
  int k = 0;
  std::vector<double> sigma;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    const double lam = std::max(es.eigenvalues()(i), 0.0);
    if (chi_max > 0 && k >= chi_max) break;
    if (lam < cutoff * cutoff * largest2 && k >= 1) break;
    if (lam <= 1e-30 * largest2 && k >= 1) break;  // numerical rank floor
    sigma.push_back(std::sqrt(lam));
    ++k;
  }
  Eigen::MatrixXcd w(n, k);
  for (int i = 0; i < k; ++i) w.col(i) = es.eigenvectors().col(n - 1 - i);

  Split out;
  out.s = Eigen::Map<Eigen::VectorXd>(sigma.data(), k);
  if (wide) {
    out.u = std::move(w);
    Eigen::MatrixXcd v = m.adjoint() * out.u;
    for (int i = 0; i < k; ++i)
      if (sigma[i] > 0.0) v.col(i) /= sigma[i];
    orthonormalize_columns(v);
    out.vh = v.adjoint();
  } else {
    Eigen::MatrixXcd u = m * w;
    for (int i = 0; i < k; ++i)
      if (sigma[i] > 0.0) u.col(i) /= sigma[i];
    orthonormalize_columns(u);
    out.u = std::move(u);
    out.vh = w.adjoint();
  }
  const double kept = out.s.squaredNorm();
  out.discarded = std::max(0.0, (total - kept) / total);
  out.s /= out.s.norm();
  return out;
}

Eigen::MatrixXcd stack_rows(const Mps::SiteTensor& t) {
  const auto dl = t[0].rows(), dr = t[0].cols();
  Eigen::MatrixXcd m(2 * dl, dr);
  m.topRows(dl) = t[0];
  m.bottomRows(dl) = t[1];
  return m;
}

Eigen::MatrixXcd stack_cols(const Mps::SiteTensor& t) {
  const auto dl = t[0].rows(), dr = t[0].cols();
  Eigen::MatrixXcd m(dl, 2 * dr);
  m.leftCols(dr) = t[0];
  m.rightCols(dr) = t[1];
  return m;
}

}  // namespace

double entropy_from_spectrum(const Eigen::VectorXd& schmidt) {
  double s = 0.0;
  for (int i = 0; i < schmidt.size(); ++i) {
    const double p = schmidt(i) * schmidt(i);
    if (p > 1e-14) s -= p * std::log(p);
  }
  return s;
}

Mps Mps::from_product(const ProductStateSpec& spec) {
  spec.validate();
  Mps mps;
  mps.sites_.resize(spec.length());
  for (int i = 1; i <= spec.length(); ++i) {
    auto [a0, a1] = site_amplitudes(spec, i);
    mps.sites_[i - 1][0] = Eigen::MatrixXcd::Constant(1, 1, a0);
    mps.sites_[i - 1][1] = Eigen::MatrixXcd::Constant(1, 1, a1);
  }
  mps.schmidt_.assign(spec.length() - 1, Eigen::VectorXd::Ones(1));
  mps.center_ = 1;
  return mps;
}

Mps mps_from_product(const ProductStateSpec& spec) {
  return Mps::from_product(spec);
}

int Mps::bond_dim(int bond) const {
  if (bond < 1 || bond > length() - 1) throw std::out_of_range("bond index");
  return static_cast<int>(sites_[bond - 1][0].cols());
}

int Mps::max_bond_dim() const {
  int m = 1;
  for (int r = 1; r <= length() - 1; ++r) m = std::max(m, bond_dim(r));
  return m;
}

void Mps::move_center_right(int chi_max, double cutoff) {
  const int c = center_;
  auto& t = sites_[c - 1];
  const auto dl = t[0].rows();
  Split sp = truncated_svd(stack_rows(t), chi_max, cutoff);
  const auto k = sp.u.cols();
  t[0] = sp.u.topRows(dl);
  t[1] = sp.u.bottomRows(dl);
  Eigen::MatrixXcd carry = sp.s.asDiagonal() * sp.vh;
  auto& next = sites_[c];
  next[0] = carry * next[0];
  next[1] = carry * next[1];
  schmidt_[c - 1] = sp.s;
  center_ = c + 1;
  (void)k;
}

void Mps::move_center_left(int chi_max, double cutoff) {
  const int c = center_;
  auto& t = sites_[c - 1];
  const auto dr = t[0].cols();
  Split sp = truncated_svd(stack_cols(t), chi_max, cutoff);
  const auto k = sp.vh.rows();
  t[0] = sp.vh.leftCols(dr);
  t[1] = sp.vh.rightCols(dr);
  Eigen::MatrixXcd carry = sp.u * sp.s.asDiagonal();
  auto& prev = sites_[c - 2];
  prev[0] = prev[0] * carry;
  prev[1] = prev[1] * carry;
  schmidt_[c - 2] = sp.s;
  center_ = c - 1;
  (void)k;
}

void Mps::canonicalize(int new_center, int chi_max, double cutoff) {
  if (new_center < 1 || new_center > length())
    throw std::out_of_range("center out of range");
  while (center_ < new_center) move_center_right(chi_max, cutoff);
  while (center_ > new_center) move_center_left(chi_max, cutoff);
}

double Mps::norm() const {
  const auto& t = sites_[center_ - 1];
  return std::sqrt(t[0].squaredNorm() + t[1].squaredNorm());
}

void Mps::normalize() {
  const double n = norm();
  if (n <= 0.0) throw std::runtime_error("cannot normalize a zero state");
  auto& t = sites_[center_ - 1];
  t[0] /= n;
  t[1] /= n;
}

TruncationReport Mps::apply_two_site_gate(int r, const Matrix4c& gate,
                                          int chi_max, double cutoff,
                                          SplitSide side, bool check_unitary) {
  if (r < 1 || r > length() - 1) throw std::out_of_range("bond index");
  if (check_unitary) {
    const double dev = (gate.adjoint() * gate - Matrix4c::Identity())
                           .cwiseAbs()
                           .maxCoeff();
    if (dev > 1e-12) throw std::invalid_argument("gate is not unitary");
  }
  if (center_ < r || center_ > r + 1) canonicalize(r);

  auto& left = sites_[r - 1];
  auto& right = sites_[r];
  const auto dl = left[0].rows();
  const auto dr = right[0].cols();

  // Theta block (s1, s2) holds the (dl x dr) amplitude matrix.
  Eigen::MatrixXcd theta(2 * dl, 2 * dr);
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2)
      theta.block(s1 * dl, s2 * dr, dl, dr) = left[s1] * right[s2];

  Eigen::MatrixXcd transformed = Eigen::MatrixXcd::Zero(2 * dl, 2 * dr);
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2) {
          const Complex g = gate(2 * a1 + a2, 2 * b1 + b2);
          if (g == Complex{}) continue;
          transformed.block(a1 * dl, a2 * dr, dl, dr) +=
              g * theta.block(b1 * dl, b2 * dr, dl, dr);
        }

  Split sp = truncated_svd(transformed, chi_max, cutoff);
  const auto k = sp.u.cols();
  if (side == SplitSide::Right) {
    for (int s = 0; s < 2; ++s) left[s] = sp.u.block(s * dl, 0, dl, k);
    Eigen::MatrixXcd carry = sp.s.asDiagonal() * sp.vh;
    for (int s = 0; s < 2; ++s) right[s] = carry.block(0, s * dr, k, dr);
    center_ = r + 1;
  } else {
    Eigen::MatrixXcd carry = sp.u * sp.s.asDiagonal();
    for (int s = 0; s < 2; ++s) left[s] = carry.block(s * dl, 0, dl, k);
    for (int s = 0; s < 2; ++s) right[s] = sp.vh.block(0, s * dr, k, dr);
    center_ = r;
  }
  schmidt_[r - 1] = sp.s;

  TruncationReport report;
  report.discarded = sp.discarded;
  report.max_dim = static_cast<int>(k);
  return report;
}

void Mps::set_center_after_split(int bond, SplitSide side,
                                 const Eigen::VectorXd& schmidt) {
  if (bond < 1 || bond > length() - 1) throw std::out_of_range("bond index");
  schmidt_[bond - 1] = schmidt;
  center_ = side == SplitSide::Right ? bond + 1 : bond;
}

std::complex<double> Mps::expect_one_site(int site,
                                          const Eigen::Matrix2cd& op) const {
  if (site < 1 || site > length()) throw std::out_of_range("site index");
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Ones(1, 1);
  for (int j = 1; j <= length(); ++j) {
    const auto& m = sites_[j - 1];
    Eigen::MatrixXcd next =
        Eigen::MatrixXcd::Zero(m[0].cols(), m[0].cols());
    if (j == site) {
      for (int sp = 0; sp < 2; ++sp)
        for (int s = 0; s < 2; ++s) {
          if (op(sp, s) == Complex{}) continue;
          next += op(sp, s) * (m[sp].adjoint() * t * m[s]);
        }
    } else {
      for (int s = 0; s < 2; ++s) next += m[s].adjoint() * t * m[s];
    }
    t = std::move(next);
  }
  return t(0, 0);
}

double Mps::expect_occupation(int site) const {
  return std::real(expect_one_site(site, pauli::number()));
}

std::complex<double> Mps::expect_bond(int r, const Matrix4c& op) const {
  if (r < 1 || r > length() - 1) throw std::out_of_range("bond index");
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Ones(1, 1);
  for (int j = 1; j <= length(); ++j) {
    const auto& m = sites_[j - 1];
    if (j == r) {
      const auto& m2 = sites_[j];
      std::array<Eigen::MatrixXcd, 4> x;
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2) x[2 * s1 + s2] = m[s1] * m2[s2];
      Eigen::MatrixXcd next =
          Eigen::MatrixXcd::Zero(m2[0].cols(), m2[0].cols());
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          if (op(a, b) == Complex{}) continue;
          next += op(a, b) * (x[a].adjoint() * t * x[b]);
        }
      t = std::move(next);
      ++j;  // consumed two sites
    } else {
      Eigen::MatrixXcd next =
          Eigen::MatrixXcd::Zero(m[0].cols(), m[0].cols());
      for (int s = 0; s < 2; ++s) next += m[s].adjoint() * t * m[s];
      t = std::move(next);
    }
  }
  return t(0, 0);
}

double Mps::energy(const std::vector<BondTerm>& terms) const {
  double e = 0.0;
  for (const auto& term : terms)
    e += std::real(expect_bond(term.bond, term.matrix));
  return e;
}

double Mps::bond_entropy(int r) const {
  return entropy_from_spectrum(schmidt_spectrum(r));
}

const Eigen::VectorXd& Mps::schmidt_spectrum(int r) const {
  if (r < 1 || r > length() - 1) throw std::out_of_range("bond index");
  return schmidt_[r - 1];
}

std::vector<double> Mps::all_bond_entropies() {
  canonicalize(1);
  canonicalize(length());
  std::vector<double> out(length() - 1);
  for (int r = 1; r <= length() - 1; ++r) out[r - 1] = bond_entropy(r);
  return out;
}

std::pair<std::vector<double>, std::vector<double>> Mps::measure_profile() {
  canonicalize(1);
  std::vector<double> occ(length());
  for (int i = 1; i <= length(); ++i) {
    occ[i - 1] = sites_[i - 1][1].squaredNorm();  // center at i
    if (i < length()) move_center_right(0, 0.0);
  }
  std::vector<double> ent(length() - 1);
  for (int r = 1; r <= length() - 1; ++r) ent[r - 1] = bond_entropy(r);
  return {std::move(occ), std::move(ent)};
}

std::complex<double> Mps::overlap(const Mps& other) const {
  if (other.length() != length())
    throw std::invalid_argument("overlap requires equal lengths");
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Ones(1, 1);
  for (int j = 0; j < length(); ++j) {
    const auto& a = sites_[j];
    const auto& b = other.sites_[j];
    Eigen::MatrixXcd next =
        Eigen::MatrixXcd::Zero(a[0].cols(), b[0].cols());
    for (int s = 0; s < 2; ++s) next += a[s].adjoint() * t * b[s];
    t = std::move(next);
  }
  return t(0, 0);
}

Eigen::VectorXcd Mps::to_dense() const {
  if (length() > 20)
    throw std::invalid_argument("dense contraction limited to L <= 20");
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Ones(1, 1);
  for (int j = 0; j < length(); ++j) {
    const auto& m = sites_[j];
    Eigen::MatrixXcd next(r.rows() * 2, m[0].cols());
    for (Eigen::Index b = 0; b < r.rows(); ++b)
      for (int s = 0; s < 2; ++s)
        next.row(2 * b + s) = r.row(b) * m[s];
    r = std::move(next);
  }
  return r.col(0);
}

namespace {
constexpr char kMagic[8] = {'E', 'A', 'S', 'T', 'M', 'P', 'S', '1'};

template <typename T>
void write_pod(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}
}  // namespace

void Mps::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.write(kMagic, sizeof(kMagic));
  write_pod<std::uint8_t>(os, 0x01);  // little-endian tag
  write_pod<std::int32_t>(os, length());
  write_pod<std::int32_t>(os, center_);
  for (int i = 0; i < length(); ++i)
    write_pod<std::int64_t>(os, sites_[i][0].rows());
  write_pod<std::int64_t>(os, 1);  // rightmost dim
  for (const auto& t : sites_) {
    // Row-major (left, physical, right) complex doubles.
    for (Eigen::Index l = 0; l < t[0].rows(); ++l)
      for (int s = 0; s < 2; ++s)
        for (Eigen::Index r = 0; r < t[0].cols(); ++r)
          write_pod<Complex>(os, t[s](l, r));
  }
  for (const auto& sv : schmidt_) {
    write_pod<std::int64_t>(os, sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) write_pod<double>(os, sv(i));
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

Mps Mps::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("not an MPS snapshot: " + path);
  if (read_pod<std::uint8_t>(is) != 0x01)
    throw std::runtime_error("unsupported endianness tag in " + path);
  const int len = read_pod<std::int32_t>(is);
  const int center = read_pod<std::int32_t>(is);
  if (len < 1 || center < 1 || center > len)
    throw std::runtime_error("corrupt snapshot header in " + path);
  std::vector<std::int64_t> dims(len + 1);
  for (auto& d : dims) d = read_pod<std::int64_t>(is);
  Mps mps;
  mps.sites_.resize(len);
  mps.center_ = center;
  for (int i = 0; i < len; ++i) {
    const auto dl = dims[i], dr = dims[i + 1];
    for (int s = 0; s < 2; ++s) mps.sites_[i][s].resize(dl, dr);
    for (std::int64_t l = 0; l < dl; ++l)
      for (int s = 0; s < 2; ++s)
        for (std::int64_t r = 0; r < dr; ++r)
          mps.sites_[i][s](l, r) = read_pod<Complex>(is);
  }
  mps.schmidt_.resize(len - 1);
  for (auto& sv : mps.schmidt_) {
    const auto n = read_pod<std::int64_t>(is);
    sv.resize(n);
    for (std::int64_t i = 0; i < n; ++i) sv(i) = read_pod<double>(is);
  }
  if (!is) throw std::runtime_error("truncated snapshot: " + path);
  return mps;
}

}  // namespace eastsim

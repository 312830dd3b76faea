#include "east/dmrg.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

#include "east/linalg.hpp"

namespace eastsim {

namespace {

struct TwoSiteFactors {
  std::vector<Eigen::Matrix2cd> a;  // site r operators
  std::vector<Eigen::Matrix2cd> b;  // site r+1 operators
};

// h = sum_k a_k (x) b_k via SVD of the index-reshuffled matrix.
TwoSiteFactors decompose_bond(const Matrix4c& h) {
  Matrix4c r;
  for (int a1 = 0; a1 < 2; ++a1)
    for (int b1 = 0; b1 < 2; ++b1)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int b2 = 0; b2 < 2; ++b2)
          r(2 * a1 + b1, 2 * a2 + b2) = h(2 * a1 + a2, 2 * b1 + b2);
  Eigen::JacobiSVD<Matrix4c> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  TwoSiteFactors out;
  for (int k = 0; k < 4; ++k) {
    const double s = svd.singularValues()(k);
    if (s < 1e-13) break;
    Eigen::Matrix2cd a, b;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        a(i, j) = std::sqrt(s) * svd.matrixU()(2 * i + j, k);
        b(i, j) = std::sqrt(s) * std::conj(svd.matrixV()(2 * i + j, k));
      }
    out.a.push_back(a);
    out.b.push_back(b);
  }
  return out;
}

}  // namespace

std::vector<MpoTensor> build_mpo(const ModelSpec& spec) {
  const auto terms = compile_bond_terms(spec);
  const int len = spec.length;
  std::vector<TwoSiteFactors> factors(len);  // factors[r] for bond r, 1-based
  for (const auto& term : terms) factors[term.bond] = decompose_bond(term.matrix);

  // Virtual states at bond i: [finished, pass_1..pass_Ki, virgin].
  std::vector<MpoTensor> mpo(len);
  auto rank = [&](int bond) {
    return (bond >= 1 && bond < len) ? static_cast<int>(factors[bond].a.size())
                                     : 0;
  };
  for (int i = 1; i <= len; ++i) {
    MpoTensor w;
    w.wl = 2 + rank(i - 1);
    w.wr = 2 + rank(i);
    w.ops.assign(w.wl * w.wr, Eigen::Matrix2cd::Zero());
    w.op(0, 0) = Eigen::Matrix2cd::Identity();
    for (int k = 0; k < rank(i - 1); ++k) w.op(1 + k, 0) = factors[i - 1].b[k];
    for (int k = 0; k < rank(i); ++k) w.op(w.wl - 1, 1 + k) = factors[i].a[k];
    w.op(w.wl - 1, w.wr - 1) = Eigen::Matrix2cd::Identity();
    mpo[i - 1] = w;
  }
  return mpo;
}

void DmrgParams::validate() const {
  if (energy_tol <= 0 || cutoff < 0 || eig_tol <= 0)
    throw std::invalid_argument("tolerances must be positive");
  if (chi_schedule.empty())
    throw std::invalid_argument("empty bond-dimension schedule");
  for (std::size_t i = 1; i < chi_schedule.size(); ++i)
    if (chi_schedule[i] < chi_schedule[i - 1])
      throw std::invalid_argument("bond-dimension schedule must be non-decreasing");
}

int DmrgParams::chi_for_sweep(int sweep) const {
  const auto idx = std::min<std::size_t>(sweep, chi_schedule.size() - 1);
  return chi_schedule[idx];
}

PinMode default_pin(ChainKind kind) {
  switch (kind) {
    case ChainKind::East: return PinMode::Left;
    case ChainKind::West: return PinMode::Right;
    case ChainKind::Heterojunction: return PinMode::Both;
  }
  return PinMode::None;
}

namespace {

using Env = std::vector<Eigen::MatrixXcd>;  // indexed by MPO virtual state

Env boundary_left(const MpoTensor& w1) {
  Env env(w1.wl, Eigen::MatrixXcd::Zero(1, 1));
  env[w1.wl - 1](0, 0) = 1.0;  // virgin
  return env;
}

Env boundary_right(const MpoTensor& wl) {
  Env env(wl.wr, Eigen::MatrixXcd::Zero(1, 1));
  env[0](0, 0) = 1.0;  // finished
  return env;
}

// Absorb site i into a left environment: L'[w'] = sum over (w, s', s)
// of W(w,w')(s',s) M[s']^H L[w] M[s].
Env contract_left(const Env& env, const MpoTensor& w, const Mps::SiteTensor& m) {
  const auto dr = m[0].cols();
  Env out(w.wr, Eigen::MatrixXcd::Zero(dr, dr));
  for (int a = 0; a < w.wl; ++a)
    for (int b = 0; b < w.wr; ++b) {
      const auto& op = w.op(a, b);
      if (op.isZero(0)) continue;
      for (int sp = 0; sp < 2; ++sp)
        for (int s = 0; s < 2; ++s) {
          if (op(sp, s) == Complex{}) continue;
          out[b] += op(sp, s) * (m[sp].adjoint() * env[a] * m[s]);
        }
    }
  return out;
}

// Absorb site i into a right environment: R'[w] indexed (bra, ket) by the
// left bond of site i.
Env contract_right(const Env& env, const MpoTensor& w, const Mps::SiteTensor& m) {
  const auto dl = m[0].rows();
  Env out(w.wl, Eigen::MatrixXcd::Zero(dl, dl));
  for (int a = 0; a < w.wl; ++a)
    for (int b = 0; b < w.wr; ++b) {
      const auto& op = w.op(a, b);
      if (op.isZero(0)) continue;
      for (int sp = 0; sp < 2; ++sp)
        for (int s = 0; s < 2; ++s) {
          if (op(sp, s) == Complex{}) continue;
          out[a] += op(sp, s) * (m[sp].conjugate() * env[b] * m[s].transpose());
        }
    }
  return out;
}

struct Theta {
  std::array<Eigen::MatrixXcd, 4> block;  // index 2*s1 + s2, each dl x dr

  Eigen::VectorXcd flatten() const {
    const auto n = block[0].size();
    Eigen::VectorXcd v(4 * n);
    for (int k = 0; k < 4; ++k)
      v.segment(k * n, n) = Eigen::Map<const Eigen::VectorXcd>(block[k].data(), n);
    return v;
  }
  static Theta unflatten(const Eigen::VectorXcd& v, Eigen::Index dl,
                         Eigen::Index dr) {
    Theta t;
    const auto n = dl * dr;
    for (int k = 0; k < 4; ++k) {
      t.block[k] = Eigen::MatrixXcd(dl, dr);
      Eigen::Map<Eigen::VectorXcd>(t.block[k].data(), n) = v.segment(k * n, n);
    }
    return t;
  }
};

// Zero the unoccupied physical component of pinned boundary sites.
void project_theta(Theta& t, bool pin_first, bool pin_second) {
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2) {
      if ((pin_first && s1 == 0) || (pin_second && s2 == 0))
        t.block[2 * s1 + s2].setZero();
    }
}

Theta apply_effective(const Env& left, const MpoTensor& w1, const MpoTensor& w2,
                      const Env& right, const Theta& in) {
  const auto dl = in.block[0].rows();
  const auto dr = in.block[0].cols();
  Theta out;
  for (int k = 0; k < 4; ++k) out.block[k] = Eigen::MatrixXcd::Zero(dl, dr);
  for (int w0 = 0; w0 < w1.wl; ++w0)
    for (int w1i = 0; w1i < w1.wr; ++w1i) {
      const auto& op1 = w1.op(w0, w1i);
      if (op1.isZero(0)) continue;
      for (int w2i = 0; w2i < w2.wr; ++w2i) {
        const auto& op2 = w2.op(w1i, w2i);
        if (op2.isZero(0)) continue;
        for (int s1p = 0; s1p < 2; ++s1p)
          for (int s1 = 0; s1 < 2; ++s1) {
            if (op1(s1p, s1) == Complex{}) continue;
            for (int s2p = 0; s2p < 2; ++s2p)
              for (int s2 = 0; s2 < 2; ++s2) {
                const Complex c = op1(s1p, s1) * op2(s2p, s2);
                if (c == Complex{}) continue;
                out.block[2 * s1p + s2p] +=
                    c * (left[w0] * in.block[2 * s1 + s2] *
                         right[w2i].transpose());
              }
          }
      }
    }
  return out;
}

}  // namespace

DmrgResult dmrg_ground(const ModelSpec& spec, const DmrgParams& params) {
  spec.validate();
  params.validate();
  const int len = spec.length;
  const auto mpo = build_mpo(spec);

  const bool pin_left =
      params.pin == PinMode::Left || params.pin == PinMode::Both;
  const bool pin_right =
      params.pin == PinMode::Right || params.pin == PinMode::Both;

  // Start from the drive-occupied product state in the pinned sector.
  ProductStateSpec init;
  init.pattern.assign(len, '0');
  const int d = spec.profile.drive_size();
  if (spec.kind != ChainKind::West)
    for (int i = 1; i <= d; ++i) init.pattern[i - 1] = '1';
  if (spec.kind != ChainKind::East)
    for (int i = len - d + 1; i <= len; ++i) init.pattern[i - 1] = '1';
  if (pin_left) init.pattern[0] = '1';
  if (pin_right) init.pattern[len - 1] = '1';
  Mps mps = Mps::from_product(init);

  // Right environments for every cut; env_right[i] covers sites i..L.
  std::vector<Env> env_right(len + 2);
  env_right[len + 1] = boundary_right(mpo[len - 1]);
  for (int i = len; i >= 3; --i)
    env_right[i] = contract_right(env_right[i + 1], mpo[i - 1], mps.site(i));
  std::vector<Env> env_left(len + 1);
  env_left[0] = boundary_left(mpo[0]);

  DmrgResult result;
  double energy = mps.energy(compile_bond_terms(spec));
  double prev_energy = energy;

  for (int sweep = 0; sweep < params.max_sweeps; ++sweep) {
    const int chi = params.chi_for_sweep(sweep);
    int max_chi = 1;

    auto optimize = [&](int i, SplitSide side) {
      mps.canonicalize(i);
      const auto& left = mps.site(i);
      const auto& right = mps.site(i + 1);
      const auto dl = left[0].rows();
      const auto dr = right[0].cols();
      Theta guess;
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
          guess.block[2 * s1 + s2] = left[s1] * right[s2];
      const bool pf = pin_left && i == 1;
      const bool ps = pin_right && i + 1 == len;
      project_theta(guess, pf, ps);
      if (guess.flatten().norm() < 1e-14)
        throw std::runtime_error("pinned sector lost during sweep");

      MatVec matvec = [&](const Eigen::VectorXcd& v) {
        Theta t = Theta::unflatten(v, dl, dr);
        project_theta(t, pf, ps);
        Theta h = apply_effective(env_left[i - 1], mpo[i - 1], mpo[i],
                                  env_right[i + 2], t);
        project_theta(h, pf, ps);
        return h.flatten();
      };
      auto eig = lanczos_lowest(matvec, guess.flatten(), params.eig_tol,
                                params.eig_max_iter);
      energy = eig.eigenvalue;
      Theta opt = Theta::unflatten(eig.eigenvector, dl, dr);
      project_theta(opt, pf, ps);

      // Split by SVD of the (dl*2) x (2*dr) matrix, as in gate application.
      Eigen::MatrixXcd theta(2 * dl, 2 * dr);
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
          theta.block(s1 * dl, s2 * dr, dl, dr) = opt.block[2 * s1 + s2];
      Eigen::BDCSVD<Eigen::MatrixXcd> svd(
          theta, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const auto& sv = svd.singularValues();
      int k = 0;
      for (; k < sv.size(); ++k) {
        if (k >= chi) break;
        if (sv(k) < params.cutoff * sv(0)) break;
      }
      k = std::max(k, 1);
      Eigen::VectorXd s = sv.head(k);
      s /= s.norm();
      Eigen::MatrixXcd u = svd.matrixU().leftCols(k);
      Eigen::MatrixXcd vh = svd.matrixV().leftCols(k).adjoint();
      auto& ml = mps.site_mutable(i);
      auto& mr = mps.site_mutable(i + 1);
      if (side == SplitSide::Right) {
        for (int s1 = 0; s1 < 2; ++s1) ml[s1] = u.block(s1 * dl, 0, dl, k);
        Eigen::MatrixXcd carry = s.asDiagonal() * vh;
        for (int s2 = 0; s2 < 2; ++s2)
          mr[s2] = carry.block(0, s2 * dr, k, dr);
      } else {
        Eigen::MatrixXcd carry = u * s.asDiagonal();
        for (int s1 = 0; s1 < 2; ++s1) ml[s1] = carry.block(s1 * dl, 0, dl, k);
        for (int s2 = 0; s2 < 2; ++s2) mr[s2] = vh.block(0, s2 * dr, k, dr);
      }
      mps.set_center_after_split(i, side, s);
      max_chi = std::max(max_chi, k);
      if (side == SplitSide::Right)
        env_left[i] = contract_left(env_left[i - 1], mpo[i - 1], mps.site(i));
      else
        env_right[i + 1] =
            contract_right(env_right[i + 2], mpo[i], mps.site(i + 1));
    };

    for (int i = 1; i <= len - 2; ++i) optimize(i, SplitSide::Right);
    for (int i = len - 1; i >= 1; --i) optimize(i, SplitSide::Left);

    SweepRecord rec;
    rec.sweep = sweep + 1;
    rec.energy = energy;
    rec.delta_energy = energy - prev_energy;
    rec.max_chi = max_chi;
    result.log.push_back(rec);
    const bool schedule_settled =
        sweep + 1 >= static_cast<int>(params.chi_schedule.size());
    if (schedule_settled && std::abs(energy - prev_energy) < params.energy_tol) {
      result.converged = true;
      prev_energy = energy;
      break;
    }
    prev_energy = energy;
  }

  mps.canonicalize(1);
  mps.normalize();
  result.energy = energy;
  result.state = std::move(mps);
  return result;
}

LocalizationFit fit_localization_length(const std::vector<double>& profile,
                                        int window_first, int window_last) {
  if (window_first < 1 || window_last > static_cast<int>(profile.size()) ||
      window_last - window_first + 1 < 3)
    throw std::invalid_argument("fit window must cover at least 3 sites");
  const int n = window_last - window_first + 1;
  Eigen::VectorXd x(n), y(n);
  for (int j = 0; j < n; ++j) {
    const double v = profile[window_first - 1 + j];
    if (!(v > 1e-14))
      throw std::invalid_argument("profile must be positive in the fit window");
    x(j) = window_first + j;
    y(j) = std::log(v);
  }
  const double xm = x.mean(), ym = y.mean();
  const double sxx = (x.array() - xm).square().sum();
  const double sxy = ((x.array() - xm) * (y.array() - ym)).sum();
  LocalizationFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  Eigen::VectorXd res = y - (fit.intercept + fit.slope * x.array()).matrix();
  fit.residual = std::sqrt(res.squaredNorm() / n);
  if (std::abs(fit.slope) < 1e-12) {
    fit.degenerate = true;
    fit.xi = std::numeric_limits<double>::infinity();
  } else {
    fit.xi = -1.0 / fit.slope;
  }
  return fit;
}

}  // namespace eastsim

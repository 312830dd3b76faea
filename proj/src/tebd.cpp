#include "east/tebd.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "east/version.hpp"

namespace eastsim {

namespace {

bool is_multiple(double value, double unit) {
  const double ratio = value / unit;
  return std::abs(ratio - std::round(ratio)) < 1e-9;
}

Matrix4c bond_exponential(const Matrix4c& h, double tau) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(h);
  const std::complex<double> minus_i(0.0, -1.0);
  Eigen::Vector4cd phases;
  for (int i = 0; i < 4; ++i)
    phases(i) = std::exp(minus_i * es.eigenvalues()(i) * tau);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

void TrotterSchedule::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("dt must be positive and finite");
  if (order != 1 && order != 2 && order != 4)
    throw std::invalid_argument("Trotter order must be 1, 2 or 4");
  if (total_time < 0.0 || !std::isfinite(total_time))
    throw std::invalid_argument("total time must be non-negative");
  if (!(record_interval > 0.0))
    throw std::invalid_argument("record interval must be positive");
  if (!is_multiple(record_interval, dt))
    throw std::invalid_argument("record interval must be a multiple of dt");
  if (!is_multiple(total_time, record_interval))
    throw std::invalid_argument("total time must be a multiple of the record interval");
  if (chi_max < 1 || cutoff < 0.0)
    throw std::invalid_argument("invalid truncation settings");
  if (hard_chi_cap < chi_max)
    throw std::invalid_argument("hard bond-dimension cap below chi_max");
}

int TrotterSchedule::steps_per_record() const {
  return static_cast<int>(std::round(record_interval / dt));
}

int TrotterSchedule::record_count() const {
  return static_cast<int>(std::round(total_time / record_interval));
}

BondGateSet make_trotter_layers(const ModelSpec& spec, double dt, int order) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("Trotter order must be 1 or 2");
  BondGateSet set;
  set.order = order;
  set.dt = dt;
  for (const auto& term : compile_bond_terms(spec)) {
    const bool odd = term.bond % 2 == 1;
    if (odd) {
      set.odd_full.push_back({term.bond, bond_exponential(term.matrix, dt)});
      if (order == 2)
        set.odd_half.push_back(
            {term.bond, bond_exponential(term.matrix, dt / 2)});
    } else {
      set.even_full.push_back({term.bond, bond_exponential(term.matrix, dt)});
    }
  }
  return set;
}

std::vector<double> TimeSeries::column_mid_entropy(int length) const {
  std::vector<double> out(rows());
  for (int i = 0; i < rows(); ++i) out[i] = entropy[i][length / 2 - 1];
  return out;
}

std::vector<double> TimeSeries::column_occupation(int site) const {
  std::vector<double> out(rows());
  for (int i = 0; i < rows(); ++i) out[i] = occupation[i][site - 1];
  return out;
}

namespace {

// One Trotter layer before gate exponentiation: all odd or all even
// bonds, evolved for tau.
struct Layer {
  bool odd = true;
  double tau = 0.0;
};

// Layer sequence of a single step. Order 4 is the Suzuki composition
// S2(a) S2(a) S2(b) S2(a) S2(a) with b = 1 - 4a < 0, written with the
// inner odd half-layers already merged.
std::vector<Layer> step_layers(int order, double dt) {
  switch (order) {
    case 1:
      return {{true, dt}, {false, dt}};
    case 2:
      return {{true, dt / 2}, {false, dt}, {true, dt / 2}};
    case 4: {
      const double a = dt / (4.0 - std::pow(4.0, 1.0 / 3.0));
      const double b = dt - 4.0 * a;
      return {{true, a / 2}, {false, a}, {true, a},           {false, a},
              {true, (a + b) / 2}, {false, b}, {true, (a + b) / 2},
              {false, a}, {true, a},           {false, a},    {true, a / 2}};
    }
    default:
      throw std::invalid_argument("Trotter order must be 1, 2 or 4");
  }
}

// n steps with adjacent same-parity layers merged across step boundaries.
std::vector<Layer> block_layers(int order, double dt, int n) {
  const auto step = step_layers(order, dt);
  std::vector<Layer> out;
  for (int k = 0; k < n; ++k)
    for (const auto& layer : step) {
      if (!out.empty() && out.back().odd == layer.odd)
        out.back().tau += layer.tau;
      else
        out.push_back(layer);
    }
  return out;
}

// Gates for each distinct layer tau, built lazily from the bond terms.
class GateCache {
 public:
  explicit GateCache(const std::vector<BondTerm>& terms) : terms_(terms) {}

  const std::vector<BondGate>& layer(const Layer& l) {
    const long long key =
        (l.odd ? 1LL : -1LL) * llround(l.tau * 1e15);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<BondGate> gates;
    for (const auto& term : terms_)
      if ((term.bond % 2 == 1) == l.odd)
        gates.push_back({term.bond, bond_exponential(term.matrix, l.tau)});
    return cache_.emplace(key, std::move(gates)).first->second;
  }

 private:
  const std::vector<BondTerm>& terms_;
  std::map<long long, std::vector<BondGate>> cache_;
};

struct Stepper {
  Mps& mps;
  const TrotterSchedule& schedule;
  TruncationReport total;
  bool ascending_next = true;

  void apply_layer(const std::vector<BondGate>& layer, bool ascending) {
    auto run = [&](const BondGate& g, SplitSide side) {
      auto rep = mps.apply_two_site_gate(g.bond, g.gate, schedule.chi_max,
                                         schedule.cutoff, side);
      if (rep.max_dim >= schedule.hard_chi_cap) {
        std::ostringstream msg;
        msg << "bond dimension saturated the hard cap " << schedule.hard_chi_cap
            << " at bond " << g.bond;
        throw CapSaturatedError(msg.str());
      }
      total.merge(rep);
    };
    if (ascending)
      for (const auto& g : layer) run(g, SplitSide::Right);
    else
      for (auto it = layer.rbegin(); it != layer.rend(); ++it)
        run(*it, SplitSide::Left);
  }

  // One record block, alternating sweep direction layer by layer to keep
  // the gauge center travel short.
  void advance_block(GateCache& cache, const std::vector<Layer>& layers) {
    for (const auto& l : layers) {
      apply_layer(cache.layer(l), ascending_next);
      ascending_next = !ascending_next;
    }
  }
};

}  // namespace

TimeSeries evolve(Mps mps, const ModelSpec& spec, const TrotterSchedule& schedule,
                  const EvolveOptions& options) {
  return evolve_inplace(mps, spec, schedule, options);
}

TimeSeries evolve_inplace(Mps& mps, const ModelSpec& spec,
                          const TrotterSchedule& schedule,
                  const EvolveOptions& options) {
  schedule.validate();
  spec.validate();
  if (mps.length() != spec.length)
    throw std::invalid_argument("state length does not match the model");
  const auto terms = compile_bond_terms(spec);
  GateCache cache(terms);

  TimeSeries ts;
  ts.metadata["kind"] = to_string(spec.kind);
  ts.metadata["length"] = std::to_string(spec.length);
  ts.metadata["drive_size"] = std::to_string(spec.profile.drive_size());
  ts.metadata["mu_drive"] = std::to_string(spec.profile.mu_drive());
  ts.metadata["mu_spacer"] = std::to_string(spec.profile.mu_spacer());
  ts.metadata["dt"] = std::to_string(schedule.dt);
  ts.metadata["trotter_order"] = std::to_string(schedule.order);
  ts.metadata["chi_max"] = std::to_string(schedule.chi_max);
  ts.metadata["cutoff"] = std::to_string(schedule.cutoff);
  ts.metadata["entropy_log_base"] = "e";
  ts.metadata["code_version"] = kVersion;

  Stepper stepper{mps, schedule, {}};
  auto last_checkpoint = std::chrono::steady_clock::now();

  auto record = [&](double t) {
    auto [occ, ent] = mps.measure_profile();
    ts.times.push_back(t);
    ts.occupation.push_back(std::move(occ));
    ts.entropy.push_back(std::move(ent));
    ts.energy.push_back(mps.energy(terms));
    ts.norm.push_back(mps.norm());
    ts.discarded.push_back(stepper.total.discarded);
  };

  record(0.0);
  const int blocks = schedule.record_count();
  const auto layers =
      block_layers(schedule.order, schedule.dt, schedule.steps_per_record());
  for (int b = 1; b <= blocks; ++b) {
    stepper.advance_block(cache, layers);
    mps.normalize();
    record(b * schedule.record_interval);
    if (!options.checkpoint_path.empty() && options.checkpoint_interval > 0) {
      const auto now = std::chrono::steady_clock::now();
      const double elapsed =
          std::chrono::duration<double>(now - last_checkpoint).count();
      if (elapsed >= options.checkpoint_interval) {
        mps.save(options.checkpoint_path);
        last_checkpoint = now;
      }
    }
  }
  ts.metadata["max_bond_dim"] = std::to_string(stepper.total.max_dim);
  if (stepper.total.max_dim >= schedule.chi_max)
    ts.metadata["chi_saturated"] = "true";
  return ts;
}

std::vector<ConvergenceRow> trotter_convergence_check(
    const ModelSpec& spec, const ProductStateSpec& init, double total_time,
    std::vector<double> dt_list, int chi_max, double cutoff) {
  if (dt_list.size() < 2)
    throw std::invalid_argument("need at least two step sizes");
  std::sort(dt_list.begin(), dt_list.end(), std::greater<>());
  auto run = [&](double dt) {
    TrotterSchedule schedule;
    schedule.dt = dt;
    schedule.order = 2;
    schedule.total_time = total_time;
    schedule.record_interval = total_time;
    schedule.chi_max = chi_max;
    schedule.cutoff = cutoff;
    return evolve(Mps::from_product(init), spec, schedule);
  };
  const TimeSeries reference = run(dt_list.back());
  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 0; i + 1 < dt_list.size(); ++i) {
    const TimeSeries ts = run(dt_list[i]);
    ConvergenceRow row;
    row.dt = dt_list[i];
    const auto& occ = ts.occupation.back();
    const auto& ref = reference.occupation.back();
    for (std::size_t j = 0; j < occ.size(); ++j)
      row.max_occupation_diff =
          std::max(row.max_occupation_diff, std::abs(occ[j] - ref[j]));
    row.mid_entropy_diff =
        std::abs(ts.entropy.back()[spec.length / 2 - 1] -
                 reference.entropy.back()[spec.length / 2 - 1]);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace eastsim

#include "mmnoma/power.hpp"

#include <cmath>
#include <numbers>
#include <optional>

namespace mmnoma {

namespace {

constexpr double kInvLn2 = 1.0 / std::numbers::ln2;

}  // namespace

CVector group_equivalent_channel(const EffectiveChannels& eff, const Schedule& schedule, int ap,
                                 int chain) {
  auto m = schedule.members(ap, chain);
  if (m.empty()) return {};
  if (m.size() == 1) return eff.at(m[0], ap);
  CMatrix group(eff.chains, 2);
  group.col(0) = eff.at(m[0], ap);
  group.col(1) = eff.at(m[1], ap);
  Eigen::JacobiSVD<CMatrix> svd(group.adjoint(), Eigen::ComputeFullU);
  CVector u = svd.matrixU().col(0);
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) > 0.0) {
      u *= std::conj(u(i)) / std::abs(u(i));
      break;
    }
  }
  return group * u;
}

ZfPrecoder zf_precoder(const EffectiveChannels& eff, const Schedule& schedule,
                       double condition_limit) {
  const int n_chains = schedule.chains();
  ZfPrecoder zf;
  for (int b = 0; b < schedule.aps(); ++b) {
    std::vector<int> active;
    for (int n = 0; n < n_chains; ++n)
      if (schedule.group_size(b, n) > 0) active.push_back(n);
    const int na = static_cast<int>(active.size());
    if (na == 0) {
      zf.precoders.push_back(CMatrix::Identity(n_chains, n_chains));
      zf.equivalent.emplace_back();
      zf.unnormalized.emplace_back();
      zf.active_chains.push_back(active);
      continue;
    }
    CMatrix h(n_chains, na);
    for (int i = 0; i < na; ++i) h.col(i) = group_equivalent_channel(eff, schedule, b, active[i]);
    CMatrix gram = h.adjoint() * h;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > condition_limit) {
      const double load = 1e-12 * gram.trace().real() / na;
      gram += CMatrix::Identity(na, na) * (load > 0.0 ? load : 1e-300);
      zf.regularized = true;
    }
    const CMatrix g = h * gram.partialPivLu().inverse();
    CMatrix full = CMatrix::Zero(n_chains, n_chains);
    for (int i = 0; i < na; ++i) {
      const double norm = g.col(i).norm();
      if (norm > 0.0) full.col(active[i]) = g.col(i) / norm;
    }
    zf.precoders.push_back(std::move(full));
    zf.equivalent.push_back(std::move(h));
    zf.unnormalized.push_back(g);
    zf.active_chains.push_back(std::move(active));
  }
  return zf;
}

PowerProblem::PowerProblem(const Schedule& schedule, const GainTable& gains, const SicOrder& sic,
                           double noise_power, double total_power,
                           std::span<const double> min_rates)
    : schedule_(schedule), noise_(noise_power), total_power_(total_power) {
  if (!(noise_power > 0.0) || !(total_power > 0.0)) {
    throw ConfigError("power: noise and total power must be positive");
  }
  var_of_.assign(schedule.users(), -1);
  for (int k = 0; k < schedule.users(); ++k) {
    if (!schedule.scheduled(k)) continue;
    var_of_[k] = static_cast<int>(users_.size());
    users_.push_back(k);
  }
  const int n = variables();
  const double scale = total_power / noise_power;
  a_.resize(n);
  a2_ = Eigen::MatrixXd::Zero(n, n);
  min_rates_.resize(n);
  for (int v = 0; v < n; ++v) {
    const int k = users_[v];
    const int b = schedule.ap_of(k), c = schedule.chain_of(k);
    a_(v) = gains.at(k, b, c) * scale;
    min_rates_[v] = min_rates.empty() ? 0.0 : min_rates[k];
    for (int w = 0; w < n; ++w) {
      if (w == v) continue;
      const int j = users_[w];
      const int bj = schedule.ap_of(j), cj = schedule.chain_of(j);
      if (bj == b && cj == c) {
        if (sic.stronger(j, k)) a2_(v, w) = a_(v);
      } else {
        a2_(v, w) = gains.at(k, bj, cj) * scale;
      }
    }
  }
  a1_ = a2_;
  a1_.diagonal() += a_;
  for (const PairRef& p : sic_pairs(schedule, sic)) pairs_.emplace_back(var_of_[p.strong], var_of_[p.weak]);
}

Eigen::VectorXd PowerProblem::to_normalized(std::span<const double> powers) const {
  Eigen::VectorXd x(variables());
  for (int v = 0; v < variables(); ++v) x(v) = powers[users_[v]] / total_power_;
  return x;
}

std::vector<double> PowerProblem::to_watts(const Eigen::VectorXd& x) const {
  std::vector<double> p(schedule_.users(), 0.0);
  for (int v = 0; v < variables(); ++v) p[users_[v]] = x(v) * total_power_;
  return p;
}

double PowerProblem::f1(std::span<const double> powers) const {
  const Eigen::VectorXd d1 = Eigen::VectorXd::Ones(variables()) + a1_ * to_normalized(powers);
  return -(d1 * noise_).array().log2().sum();
}

double PowerProblem::f2(std::span<const double> powers) const {
  const Eigen::VectorXd d2 = Eigen::VectorXd::Ones(variables()) + a2_ * to_normalized(powers);
  return -(d2 * noise_).array().log2().sum();
}

std::vector<double> PowerProblem::grad_f2(std::span<const double> powers) const {
  const Eigen::VectorXd g = grad_f2_normalized(to_normalized(powers)) / total_power_;
  std::vector<double> out(schedule_.users(), 0.0);
  for (int v = 0; v < variables(); ++v) out[users_[v]] = g(v);
  return out;
}

double PowerProblem::neg_sum_rate(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd d2 = Eigen::VectorXd::Ones(variables()) + a2_ * x;
  const Eigen::VectorXd d1 = d2 + a_.cwiseProduct(x);
  return -(d1.array() / d2.array()).log2().sum();
}

Eigen::VectorXd PowerProblem::grad_f2_normalized(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd d2 = Eigen::VectorXd::Ones(variables()) + a2_ * x;
  return -kInvLn2 * (a2_.transpose() * d2.cwiseInverse());
}

PowerProblem::Constraints PowerProblem::constraints(bool sic, bool qos) const {
  const int n = variables();
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  Constraints out;
  auto add = [&](Eigen::RowVectorXd row, double d) {
    const double norm = row.norm();
    if (norm == 0.0) {
      if (d < 0.0) out.trivially_infeasible = true;
      return;
    }
    rows.push_back(row / norm);
    rhs.push_back(d / norm);
  };
  for (int v = 0; v < n; ++v) add(-Eigen::RowVectorXd::Unit(n, v), 0.0);
  add(Eigen::RowVectorXd::Ones(n), 1.0);
  if (sic) {
    for (const auto& [s, w] : pairs_) {
      // a_w (out-of-group interference at s) - a_s (same at w) <= a_s - a_w
      Eigen::RowVectorXd row = a_(w) * a2_.row(s) - a_(s) * a2_.row(w);
      row(s) = 0.0;
      row(w) = 0.0;
      add(row, a_(s) - a_(w));
    }
  }
  if (qos) {
    for (int v = 0; v < n; ++v) {
      if (!(min_rates_[v] > 0.0)) continue;
      const double gamma = std::exp2(min_rates_[v]) - 1.0;
      Eigen::RowVectorXd row = gamma * a2_.row(v);
      row(v) -= a_(v);
      add(row, -gamma);
    }
  }
  out.C.resize(static_cast<Eigen::Index>(rows.size()), n);
  out.d.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.C.row(r) = rows[r];
    out.d(r) = rhs[r];
  }
  return out;
}

BarrierResult PowerProblem::solve_convex_subproblem(const Eigen::VectorXd& x_t,
                                                    const Eigen::VectorXd& start,
                                                    const Constraints& cons,
                                                    const BarrierOptions& options) const {
  const Eigen::VectorXd lin = grad_f2_normalized(x_t);
  BarrierProblem p;
  p.A = cons.C;
  p.b = cons.d;
  Eigen::VectorXd d1(a1_.rows()), inv(a1_.rows());
  Eigen::MatrixXd scaled(a1_.rows(), a1_.cols());
  p.evaluate = [&](const Eigen::VectorXd& x, Eigen::VectorXd* g, Eigen::MatrixXd* h) {
    d1.setOnes();
    d1.noalias() += a1_ * x;
    if (g) {
      inv = d1.cwiseInverse();
      *g = -lin;
      g->noalias() -= kInvLn2 * (a1_.transpose() * inv);
      scaled = inv.asDiagonal() * a1_;
      h->noalias() = kInvLn2 * scaled.transpose().lazyProduct(scaled);
    }
    return -d1.array().log2().sum() - lin.dot(x);
  };
  return barrier_minimize(p, start, options);
}

std::vector<int> PowerProblem::reversed_pair_weak_users() const {
  std::vector<int> out;
  for (const auto& [strong, weak] : pairs_)
    if (a_(weak) > a_(strong)) out.push_back(users_[weak]);
  return out;
}

DcResult dc_power_allocate(const Schedule& schedule, const GainTable& gains, const SicOrder& sic,
                           double noise_power, double total_power,
                           std::span<const double> min_rates, const DcOptions& options) {
  const PowerProblem full(schedule, gains, sic, noise_power, total_power, min_rates);
  DcResult res;
  res.powers.assign(schedule.users(), 0.0);
  auto finish = [&]() {
    res.report = evaluate_rates(RateInputs{schedule, gains, sic, res.powers, noise_power});
  };
  if (full.variables() == 0) {
    finish();
    return res;
  }

  PowerProblem::Constraints cons;
  SlackResult center;
  auto strictly_feasible = [&](const PowerProblem& p, bool with_sic, bool with_qos) {
    cons = p.constraints(with_sic, with_qos);
    if (cons.trivially_infeasible) return false;
    const int n = p.variables();
    // Any point with a comfortable margin will do as an anchor.
    BarrierOptions phase1 = options.inner;
    phase1.stop_value = -1e-3;
    center = max_min_slack(cons.C, cons.d, Eigen::VectorXd::Constant(n, 0.5 / n), phase1);
    return center.slack > 1e-12;
  };

  Schedule reduced = schedule;
  std::optional<PowerProblem> reduced_problem;
  const PowerProblem* problem = &full;
  if (!strictly_feasible(full, true, true)) {
    res.qos_dropped = true;
    if (!strictly_feasible(full, true, false)) {
      res.silenced = full.reversed_pair_weak_users();
      bool ok = false;
      if (!res.silenced.empty()) {
        for (int k : res.silenced) reduced.unassign(k);
        reduced_problem.emplace(reduced, gains, sic, noise_power, total_power, min_rates);
        ok = strictly_feasible(*reduced_problem, true, false);
        if (ok) problem = &*reduced_problem;
      }
      if (!ok) {
        res.silenced.clear();
        res.sic_dropped = true;
        strictly_feasible(full, false, false);
      }
    }
  }
  res.feasible = !res.qos_dropped && !res.sic_dropped;

  const int n = problem->variables();
  const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(n, 1.0 / schedule.users());
  Eigen::VectorXd x =
      ((cons.C * uniform - cons.d).array() <= 0.0).all() ? uniform : center.x;
  double value = problem->neg_sum_rate(x);
  res.trace.push_back(value);

  for (int it = 0; it < options.max_outer_iterations; ++it) {
    // A start on (or a rounding error inside) a face stalls the barrier, so
    // pull it slightly toward the anchor.
    const double margin = 1e-6 * center.slack;
    Eigen::VectorXd start = x;
    for (double theta = 1e-6; !((cons.d - cons.C * start).array() > margin).all() && theta <= 1.0;
         theta *= 10.0) {
      start = (1.0 - theta) * x + theta * center.x;
    }
    const BarrierResult sub = problem->solve_convex_subproblem(x, start, cons, options.inner);
    ++res.outer_iterations;
    const double next = problem->neg_sum_rate(sub.x);
    if (!(next <= value + 1e-12)) {
      ++res.rejected_steps;
      break;
    }
    const double change = std::abs(value - next) / std::max(std::abs(value), 1e-12);
    x = sub.x;
    value = next;
    res.trace.push_back(value);
    if (change < options.outer_tolerance) break;
  }
  res.powers = problem->to_watts(x);
  finish();
  return res;
}

Stage3Result run_stage3(const LinkCache& cache, const SystemConfig& system,
                        const Schedule& schedule, std::span<const int> antennas,
                        const DcOptions& options) {
  const auto beams = build_beams(cache, schedule, antennas);
  const auto eff = effective_channels(cache, schedule, beams);
  Stage3Result out;
  out.zf = zf_precoder(eff, schedule);
  out.gains = gain_table(eff, schedule, &out.zf.precoders);
  const SicOrder sic = sic_order(sic_strengths(cache, schedule));
  std::vector<double> min_rates(schedule.users(), 0.0);
  for (int k = 0; k < schedule.users(); ++k)
    if (schedule.scheduled(k)) min_rates[k] = system.min_rate;
  out.dc = dc_power_allocate(schedule, out.gains, sic, system.noise_power, system.total_power,
                             min_rates, options);
  return out;
}

}  // namespace mmnoma

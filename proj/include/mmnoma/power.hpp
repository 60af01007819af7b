#pragma once

#include <span>
#include <vector>

#include "mmnoma/barrier.hpp"
#include "mmnoma/link_gains.hpp"

namespace mmnoma {

/// Equivalent channel of group (b, n): the group's effective channel times
/// the principal left singular vector of its conjugate transpose. Singletons
/// use the user's own effective channel. Empty groups give an empty vector.
CVector group_equivalent_channel(const EffectiveChannels& eff, const Schedule& schedule, int ap,
                                 int chain);

struct ZfPrecoder {
  std::vector<CMatrix> precoders;    // per AP, N x N, unit-norm active columns
  std::vector<CMatrix> equivalent;   // per AP, N x (active chains)
  std::vector<CMatrix> unnormalized; // per AP, N x (active chains)
  std::vector<std::vector<int>> active_chains;
  bool regularized = false;
};

/// Zero-forcing over the active chains of each AP, then column
/// normalization. APs without users get the identity.
ZfPrecoder zf_precoder(const EffectiveChannels& eff, const Schedule& schedule,
                       double condition_limit = 1e12);

struct DcOptions {
  double outer_tolerance = 1e-4;
  int max_outer_iterations = 50;
  BarrierOptions inner;
};

/// The stage-3 power problem for a fixed schedule, gains and SIC order.
///
/// Internally works in normalized units x = p / p_total with gains scaled by
/// p_total / sigma^2, which keeps the numbers O(1) for the barrier solver.
class PowerProblem {
 public:
  PowerProblem(const Schedule& schedule, const GainTable& gains, const SicOrder& sic,
               double noise_power, double total_power, std::span<const double> min_rates);

  int variables() const { return static_cast<int>(users_.size()); }
  /// Scheduled users; variable v is the power of users()[v].
  const std::vector<int>& users() const { return users_; }
  double total_power() const { return total_power_; }
  double noise_power() const { return noise_; }

  Eigen::VectorXd to_normalized(std::span<const double> powers) const;
  std::vector<double> to_watts(const Eigen::VectorXd& x) const;

  /// F1 and F2 in watt units; F1 - F2 = -R_sum.
  double f1(std::span<const double> powers) const;
  double f2(std::span<const double> powers) const;
  /// dF2/dp per user (zero for unscheduled users).
  std::vector<double> grad_f2(std::span<const double> powers) const;

  /// Normalized-space pieces.
  double neg_sum_rate(const Eigen::VectorXd& x) const;
  Eigen::VectorXd grad_f2_normalized(const Eigen::VectorXd& x) const;

  struct Constraints {
    Eigen::MatrixXd C;
    Eigen::VectorXd d;
    bool trivially_infeasible = false;
  };
  /// Budget and non-negativity always; SIC rows and QoS rows on request.
  /// Rows are scaled to unit norm.
  Constraints constraints(bool sic, bool qos) const;

  /// Weak members of pairs whose effective gain exceeds the strong
  /// member's; their linearized SIC row cannot hold without interference.
  std::vector<int> reversed_pair_weak_users() const;

  /// Minimizes F1(x) - grad_F2(x_t) . x from a strictly feasible start.
  BarrierResult solve_convex_subproblem(const Eigen::VectorXd& x_t, const Eigen::VectorXd& start,
                                        const Constraints& cons,
                                        const BarrierOptions& options) const;

 private:
  const Schedule& schedule_;
  std::vector<int> users_;
  std::vector<int> var_of_;
  Eigen::VectorXd a_;   // own normalized gain per variable
  Eigen::MatrixXd a2_;  // d2 = 1 + a2 x
  Eigen::MatrixXd a1_;  // d1 = 1 + a1 x
  std::vector<std::pair<int, int>> pairs_;  // (strong, weak) variables
  std::vector<double> min_rates_;
  double noise_;
  double total_power_;
};

struct DcResult {
  std::vector<double> powers;  // watts, per user
  RateReport report;
  std::vector<double> trace;  // -R_sum at the start and after each accepted step
  int outer_iterations = 0;
  int rejected_steps = 0;
  bool feasible = true;      // QoS and SIC constraints kept
  bool qos_dropped = false;
  bool sic_dropped = false;
  std::vector<int> silenced;  // weak users held at zero power to keep SIC
};

/// Convex-concave procedure on F1 - F2 under budget, SIC and QoS
/// constraints. Without a strictly feasible point the result is flagged
/// infeasible and the constraints are relaxed in order: QoS is dropped; then
/// weak users of gain-reversed pairs are silenced (zero power satisfies SIC
/// trivially); then SIC is dropped altogether.
DcResult dc_power_allocate(const Schedule& schedule, const GainTable& gains, const SicOrder& sic,
                           double noise_power, double total_power,
                           std::span<const double> min_rates, const DcOptions& options = {});

/// Convenience: stage 3 for a realization, schedule and antenna vector.
struct Stage3Result {
  ZfPrecoder zf;
  GainTable gains;
  DcResult dc;
};

Stage3Result run_stage3(const LinkCache& cache, const SystemConfig& system,
                        const Schedule& schedule, std::span<const int> antennas,
                        const DcOptions& options = {});

}  // namespace mmnoma

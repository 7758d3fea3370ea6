#ifndef RAILS_RAKING_HPP
#define RAILS_RAKING_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rails/design.hpp"
#include "rails/margins.hpp"

namespace rails {

struct RakingOptions {
  double constraint_tolerance = 1e-6;  // max relative residual at exit
  double absolute_floor = 1e-8;        // residual denominator floor for tiny targets
  int max_passes = 200;
  std::optional<double> max_weight_ratio;  // optional bound on w_i / base_i
  std::vector<int> constraint_permutation;  // optional explicit sweep order
};

struct ConstraintResidual {
  std::string term;
  std::string cell;
  double target = 0.0;
  double achieved = 0.0;
  double relative_residual = 0.0;
};

struct RakingResult {
  Eigen::VectorXd weights;
  bool converged = false;
  int passes = 0;
  std::vector<ConstraintResidual> residuals;
  std::vector<double> log_multipliers;  // per constraint, accumulated
  double log_rescale = 0.0;             // accumulated total-preserving factor
};

/// Multiplicative generalized raking by iterative proportional fitting. Each
/// pass sweeps the constraints in declared order, scaling the weights of each
/// cell to its target total, then rescales all weights so they sum to the
/// population size. One constraint per non-reference cell of every targeted
/// term present in X; reference cells are implied by the margins plus N.
///
/// Throws StructuralZeroError when a positive target has no sample support
/// and ZeroTargetError when a zero target has positive support; returns
/// converged = false after max_passes otherwise.
RakingResult rake(const Eigen::VectorXd& base, const DesignMatrix& x,
                  const MarginTargets& targets, const RakingOptions& opts = {});

struct ConstraintReport {
  std::vector<ConstraintResidual> residuals;
  double sum_weights = 0.0;
  double population_size = 0.0;
  double total_relative_residual = 0.0;  // |sum w - N| / N
  double min_weight = 0.0;
  double max_weight = 0.0;
  double design_effect = 0.0;  // n * sum(w^2) / (sum w)^2

  bool within(double tolerance) const;
  double max_relative_residual() const;
};

/// Residual report for a weight vector against the targets; never throws on
/// unsatisfiable constraints (they just show large residuals).
ConstraintReport check_constraints(const Eigen::VectorXd& weights, const DesignMatrix& x,
                                   const MarginTargets& targets,
                                   double absolute_floor = 1e-8);

}  // namespace rails

#endif  // RAILS_RAKING_HPP

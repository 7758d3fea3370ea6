#include "rails/raking.hpp"

#include <cmath>

#include "rails/errors.hpp"

namespace rails {

namespace {

struct Constraint {
  int column;  // -1 for an empty (dropped) cell
  double target;
  Term term;
  std::string cell;
};

// One constraint per non-reference cell of every targeted term that appears
// in the design. `strict` turns unsupported positive targets and supported
// zero targets into errors; the report path keeps them as constraints.
std::vector<Constraint> derive_constraints(const DesignMatrix& x, const MarginTargets& targets,
                                           bool strict) {
  std::vector<Constraint> out;
  for (const Term& term : x.terms) {
    if (!targets.has_term(term)) continue;
    for (const auto& cell : enumerate_cells(x.schema, term, /*non_reference_only=*/true)) {
      auto target = targets.find(term, cell);
      if (!target)
        throw Error("margins for term " + term.name() + " lack cell '" + cell + "'");
      int col = x.find_column(term, cell);
      if (col < 0) {
        if (x.is_empty_cell(term, cell)) {
          if (*target > 0.0) {
            if (strict)
              throw StructuralZeroError("no sample support for " + term.name() + "=" + cell +
                                        " with positive target " + std::to_string(*target));
            out.push_back({-1, *target, term, cell});
          }
          continue;  // zero target, zero support: consistent
        }
        throw Error("targeted cell " + term.name() + "=" + cell +
                    " was removed from the design (aliased); rake needs an unreduced design");
      }
      if (*target == 0.0) {
        if (strict)
          throw ZeroTargetError("zero target for supported cell " + term.name() + "=" + cell +
                                "; multiplicative raking cannot zero positive weights");
        out.push_back({col, *target, term, cell});
        continue;
      }
      out.push_back({col, *target, term, cell});
    }
  }
  return out;
}

ConstraintResidual make_residual(const Constraint& c, double achieved, double floor) {
  ConstraintResidual r;
  r.term = c.term.name();
  r.cell = c.cell;
  r.target = c.target;
  r.achieved = achieved;
  r.relative_residual = std::abs(achieved - c.target) / std::max(c.target, floor);
  return r;
}

}  // namespace

RakingResult rake(const Eigen::VectorXd& base, const DesignMatrix& x,
                  const MarginTargets& targets, const RakingOptions& opts) {
  const int n = static_cast<int>(base.size());
  if (n != x.n_rows()) throw ShapeError("base weight length does not match design rows");
  for (int i = 0; i < n; ++i)
    if (!(base(i) > 0.0) || !std::isfinite(base(i)))
      throw Error("base weights must be strictly positive and finite");
  if (!(targets.population_size() > 0.0)) throw Error("margin targets lack a population size");

  auto constraints = derive_constraints(x, targets, /*strict=*/true);
  if (!opts.constraint_permutation.empty()) {
    if (opts.constraint_permutation.size() != constraints.size())
      throw ShapeError("constraint permutation length mismatch");
    std::vector<Constraint> permuted;
    permuted.reserve(constraints.size());
    for (int idx : opts.constraint_permutation) permuted.push_back(constraints.at(idx));
    constraints = std::move(permuted);
  }

  const double population = targets.population_size();
  RakingResult result;
  result.weights = base;
  result.log_multipliers.assign(constraints.size(), 0.0);

  for (int pass = 1; pass <= opts.max_passes; ++pass) {
    for (size_t j = 0; j < constraints.size(); ++j) {
      const auto& c = constraints[j];
      double achieved = result.weights.dot(x.values.col(c.column));
      double factor = c.target / achieved;
      result.weights.array() *= 1.0 + (factor - 1.0) * x.values.col(c.column).array();
      result.log_multipliers[j] += std::log(factor);
      if (opts.max_weight_ratio)
        result.weights = result.weights.cwiseMin(*opts.max_weight_ratio * base);
    }
    double sum = result.weights.sum();
    double rescale = population / sum;
    result.weights *= rescale;
    result.log_rescale += std::log(rescale);

    bool ok = true;
    for (const auto& c : constraints) {
      double achieved = result.weights.dot(x.values.col(c.column));
      if (std::abs(achieved - c.target) / std::max(c.target, opts.absolute_floor) >
          opts.constraint_tolerance) {
        ok = false;
        break;
      }
    }
    result.passes = pass;
    if (ok) {
      result.converged = true;
      break;
    }
  }

  result.residuals.reserve(constraints.size());
  for (const auto& c : constraints) {
    double achieved = result.weights.dot(x.values.col(c.column));
    result.residuals.push_back(make_residual(c, achieved, opts.absolute_floor));
  }
  return result;
}

bool ConstraintReport::within(double tolerance) const {
  if (total_relative_residual > tolerance) return false;
  for (const auto& r : residuals)
    if (r.relative_residual > tolerance) return false;
  return true;
}

double ConstraintReport::max_relative_residual() const {
  double m = 0.0;
  for (const auto& r : residuals) m = std::max(m, r.relative_residual);
  return m;
}

ConstraintReport check_constraints(const Eigen::VectorXd& weights, const DesignMatrix& x,
                                   const MarginTargets& targets, double absolute_floor) {
  if (weights.size() != x.n_rows())
    throw ShapeError("weight length does not match design rows");
  ConstraintReport report;
  auto constraints = derive_constraints(x, targets, /*strict=*/false);
  for (const auto& c : constraints) {
    double achieved = c.column >= 0 ? weights.dot(x.values.col(c.column)) : 0.0;
    report.residuals.push_back(make_residual(c, achieved, absolute_floor));
  }
  const int n = static_cast<int>(weights.size());
  report.sum_weights = weights.sum();
  report.population_size = targets.population_size();
  report.total_relative_residual =
      std::abs(report.sum_weights - targets.population_size()) / targets.population_size();
  report.min_weight = weights.minCoeff();
  report.max_weight = weights.maxCoeff();
  double sum_sq = weights.squaredNorm();
  report.design_effect = n * sum_sq / (report.sum_weights * report.sum_weights);
  return report;
}

}  // namespace rails

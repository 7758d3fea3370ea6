#ifndef RAILS_MARGINS_HPP
#define RAILS_MARGINS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rails/cohort.hpp"
#include "rails/terms.hpp"

namespace rails {

/// Population totals for the cells of calibration terms, plus the population
/// size N. Each stored term carries its full cell set (reference cells
/// included), and the cells of every term must sum to N.
class MarginTargets {
 public:
  MarginTargets() = default;

  double population_size() const { return population_size_; }
  void set_population_size(double n);

  void set(const Term& term, const std::string& cell, double total);
  std::optional<double> find(const Term& term, const std::string& cell) const;
  bool has_term(const Term& term) const { return entries_.count(term) > 0; }

  const std::map<Term, std::map<std::string, double>>& entries() const { return entries_; }
  std::vector<Term> terms() const;

  /// Checks the full-cell structure against a schema: every cell of every
  /// stored term present exactly once, totals finite and nonnegative, and
  /// per-term sums within relative 1e-9 of N. Throws on violation.
  void validate(const Schema& schema) const;

  /// Margin file: header `term,cell,total`, one row per (term, cell), and one
  /// row `__N__,,<population_size>`.
  static MarginTargets load_csv(const std::string& path, const Schema& schema);
  void save_csv(const std::string& path) const;

  /// Totals computed from a cohort (weights default to 1 per row, so an
  /// entire population tabulates to its true totals). N = sum of weights.
  static MarginTargets from_cohort(const Cohort& cohort, const TermSet& terms,
                                   const Eigen::VectorXd* weights = nullptr);

 private:
  double population_size_ = 0.0;
  std::map<Term, std::map<std::string, double>> entries_;
};

}  // namespace rails

#endif  // RAILS_MARGINS_HPP

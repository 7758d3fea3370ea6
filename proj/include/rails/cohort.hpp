#ifndef RAILS_COHORT_HPP
#define RAILS_COHORT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rails/errors.hpp"

namespace rails {

/// Declared categorical variables and their ordered level lists. Levels are
/// declared up front so that several cohorts share one encoding; the first
/// declared level of each variable is the reference level for treatment
/// coding.
class Schema {
 public:
  Schema() = default;

  /// Adds a variable with its ordered level list. Returns the variable index.
  int add_variable(const std::string& name, std::vector<std::string> levels);

  int n_variables() const { return static_cast<int>(names_.size()); }
  const std::string& name(int var) const { return names_.at(var); }
  const std::vector<std::string>& levels(int var) const { return levels_.at(var); }
  int n_levels(int var) const { return static_cast<int>(levels_.at(var).size()); }

  bool has_variable(const std::string& name) const { return index_.count(name) > 0; }

  /// Index of a variable; throws SchemaError when unknown.
  int index_of(const std::string& name) const;

  /// Level code within a variable; throws SchemaError when unknown.
  int level_code(int var, const std::string& level) const;

  bool operator==(const Schema& other) const {
    return names_ == other.names_ && levels_ == other.levels_;
  }

  /// Human-readable diff of variable names and level sets against `other`;
  /// empty string when the schemas agree.
  std::string diff(const Schema& other) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> levels_;
  std::map<std::string, int> index_;
};

/// A rectangular table of categorical observations with an optional per-row
/// design weight (probability cohorts) and an optional binary outcome
/// (non-probability cohorts). Immutable after construction.
class Cohort {
 public:
  /// `columns[v][i]` is the level code of variable v in row i.
  Cohort(Schema schema, std::vector<std::vector<int>> columns,
         std::optional<Eigen::VectorXd> design_weight = std::nullopt,
         std::optional<std::vector<int>> outcome = std::nullopt,
         std::optional<std::vector<std::string>> ids = std::nullopt);

  const Schema& schema() const { return schema_; }
  int n_rows() const { return n_rows_; }

  int level(int var, int row) const { return columns_[var][row]; }
  const std::vector<int>& column(int var) const { return columns_.at(var); }

  bool has_design_weight() const { return design_weight_.has_value(); }
  const Eigen::VectorXd& design_weight() const;

  bool has_outcome() const { return outcome_.has_value(); }
  const std::vector<int>& outcome() const;
  /// Outcome as a real vector, for the estimation operations.
  Eigen::VectorXd outcome_vector() const;

  const std::vector<std::string>& ids() const { return ids_; }

 private:
  Schema schema_;
  std::vector<std::vector<int>> columns_;
  std::optional<Eigen::VectorXd> design_weight_;
  std::optional<std::vector<int>> outcome_;
  std::vector<std::string> ids_;
  int n_rows_ = 0;
};

}  // namespace rails

#endif  // RAILS_COHORT_HPP

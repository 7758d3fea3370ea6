#include "rails/cohort.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace rails {

int Schema::add_variable(const std::string& name, std::vector<std::string> levels) {
  if (name.empty()) throw SchemaError("variable name must be non-empty");
  if (index_.count(name)) throw SchemaError("duplicate variable '" + name + "'");
  if (levels.empty()) throw SchemaError("variable '" + name + "' has no levels");
  std::set<std::string> seen(levels.begin(), levels.end());
  if (seen.size() != levels.size())
    throw SchemaError("variable '" + name + "' has duplicate levels");
  int idx = static_cast<int>(names_.size());
  index_[name] = idx;
  names_.push_back(name);
  levels_.push_back(std::move(levels));
  return idx;
}

int Schema::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw SchemaError("unknown variable '" + name + "'");
  return it->second;
}

int Schema::level_code(int var, const std::string& level) const {
  const auto& lv = levels_.at(var);
  for (int i = 0; i < static_cast<int>(lv.size()); ++i)
    if (lv[i] == level) return i;
  throw SchemaError("unknown level '" + level + "' for variable '" + names_.at(var) + "'");
}

std::string Schema::diff(const Schema& other) const {
  if (*this == other) return {};
  std::ostringstream os;
  std::set<std::string> mine(names_.begin(), names_.end());
  std::set<std::string> theirs(other.names_.begin(), other.names_.end());
  for (const auto& n : mine)
    if (!theirs.count(n)) os << "variable '" << n << "' missing from second schema\n";
  for (const auto& n : theirs)
    if (!mine.count(n)) os << "variable '" << n << "' missing from first schema\n";
  for (const auto& n : mine) {
    if (!theirs.count(n)) continue;
    const auto& a = levels_[index_.at(n)];
    const auto& b = other.levels_[other.index_.at(n)];
    if (a != b) {
      os << "variable '" << n << "' levels differ: {";
      for (size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
      os << "} vs {";
      for (size_t i = 0; i < b.size(); ++i) os << (i ? "," : "") << b[i];
      os << "}\n";
    }
  }
  return os.str();
}

Cohort::Cohort(Schema schema, std::vector<std::vector<int>> columns,
               std::optional<Eigen::VectorXd> design_weight,
               std::optional<std::vector<int>> outcome,
               std::optional<std::vector<std::string>> ids)
    : schema_(std::move(schema)),
      columns_(std::move(columns)),
      design_weight_(std::move(design_weight)),
      outcome_(std::move(outcome)) {
  if (static_cast<int>(columns_.size()) != schema_.n_variables())
    throw ShapeError("cohort columns do not match schema variable count");
  if (schema_.n_variables() == 0) throw SchemaError("cohort schema has no variables");
  n_rows_ = static_cast<int>(columns_[0].size());
  if (n_rows_ == 0) throw ShapeError("cohort has no rows");
  for (int v = 0; v < schema_.n_variables(); ++v) {
    if (static_cast<int>(columns_[v].size()) != n_rows_)
      throw ShapeError("ragged cohort columns");
    int n_levels = schema_.n_levels(v);
    for (int code : columns_[v])
      if (code < 0 || code >= n_levels)
        throw SchemaError("row value out of range for variable '" + schema_.name(v) + "'");
  }
  if (design_weight_) {
    if (design_weight_->size() != n_rows_)
      throw ShapeError("design weight length does not match row count");
    for (int i = 0; i < n_rows_; ++i) {
      double d = (*design_weight_)(i);
      if (!(d > 0.0) || !std::isfinite(d))
        throw Error("design weights must be strictly positive and finite");
    }
  }
  if (outcome_) {
    if (static_cast<int>(outcome_->size()) != n_rows_)
      throw ShapeError("outcome length does not match row count");
    for (int y : *outcome_)
      if (y != 0 && y != 1) throw Error("outcome values must be 0 or 1");
  }
  if (ids) {
    if (static_cast<int>(ids->size()) != n_rows_)
      throw ShapeError("id list length does not match row count");
    ids_ = std::move(*ids);
  } else {
    ids_.reserve(n_rows_);
    for (int i = 0; i < n_rows_; ++i) ids_.push_back(std::to_string(i));
  }
}

const Eigen::VectorXd& Cohort::design_weight() const {
  if (!design_weight_) throw Error("cohort carries no design weights");
  return *design_weight_;
}

const std::vector<int>& Cohort::outcome() const {
  if (!outcome_) throw Error("cohort carries no outcome");
  return *outcome_;
}

Eigen::VectorXd Cohort::outcome_vector() const {
  const auto& y = outcome();
  Eigen::VectorXd v(n_rows_);
  for (int i = 0; i < n_rows_; ++i) v(i) = y[i];
  return v;
}

}  // namespace rails

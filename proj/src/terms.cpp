#include "rails/terms.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace rails {

Term::Term(std::vector<std::string> variables) : variables_(std::move(variables)) {
  if (variables_.empty()) throw SchemaError("a term needs at least one variable");
  std::sort(variables_.begin(), variables_.end());
  for (size_t i = 1; i < variables_.size(); ++i)
    if (variables_[i] == variables_[i - 1])
      throw SchemaError("duplicate variable '" + variables_[i] + "' in term");
}

std::string Term::name() const {
  std::string out;
  for (size_t i = 0; i < variables_.size(); ++i) {
    if (i) out += ':';
    out += variables_[i];
  }
  return out;
}

bool Term::operator<(const Term& other) const {
  if (order() != other.order()) return order() < other.order();
  return variables_ < other.variables_;
}

Term Term::parse(const std::string& text) {
  std::vector<std::string> vars;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, ':')) vars.push_back(cur);
  if (vars.empty() || text.empty()) throw SchemaError("empty term '" + text + "'");
  for (const auto& v : vars)
    if (v.empty()) throw SchemaError("malformed term '" + text + "'");
  return Term(std::move(vars));
}

TermSet::TermSet(std::vector<Term> terms) {
  for (auto& t : terms) add(t);
}

bool TermSet::add(const Term& term) {
  if (contains(term)) return false;
  terms_.push_back(term);
  return true;
}

bool TermSet::remove(const Term& term) {
  auto it = std::find(terms_.begin(), terms_.end(), term);
  if (it == terms_.end()) return false;
  terms_.erase(it);
  return true;
}

bool TermSet::contains(const Term& term) const {
  return std::find(terms_.begin(), terms_.end(), term) != terms_.end();
}

TermSet expand_terms(const Schema& schema, const std::vector<std::string>& main_variables,
                     int max_order, const std::vector<Term>& extra_terms) {
  if (max_order < 1) throw Error("max_order must be >= 1");
  std::set<std::string> seen;
  for (const auto& v : main_variables) {
    schema.index_of(v);  // throws on unknown names
    if (!seen.insert(v).second)
      throw SchemaError("duplicate main variable '" + v + "'");
  }
  for (const auto& t : extra_terms)
    for (const auto& v : t.variables()) schema.index_of(v);

  std::set<Term> out;
  const int n = static_cast<int>(main_variables.size());
  int cap = std::min(max_order, n);
  // Enumerate k-subsets of the main variables for each order.
  for (int k = 1; k <= cap; ++k) {
    std::vector<int> pick(k);
    for (int i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      std::vector<std::string> vars;
      vars.reserve(k);
      for (int i : pick) vars.push_back(main_variables[i]);
      out.insert(Term(std::move(vars)));
      int j = k - 1;
      while (j >= 0 && pick[j] == n - k + j) --j;
      if (j < 0) break;
      ++pick[j];
      for (int i = j + 1; i < k; ++i) pick[i] = pick[i - 1] + 1;
    }
  }
  for (const auto& t : extra_terms) out.insert(t);

  TermSet result;
  for (const auto& t : out) result.add(t);  // std::set iterates in (order, name) order
  return result;
}

}  // namespace rails

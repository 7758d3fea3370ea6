#ifndef RAILS_TERMS_HPP
#define RAILS_TERMS_HPP

#include <string>
#include <vector>

#include "rails/cohort.hpp"
#include "rails/errors.hpp"

namespace rails {

/// A symbolic model term: a main effect (one variable) or an interaction
/// (several distinct variables). Variables are kept in lexicographic order so
/// that two terms compare equal whenever their variable sets are equal; the
/// canonical order also fixes cell labelling.
class Term {
 public:
  explicit Term(std::vector<std::string> variables);
  Term(std::initializer_list<std::string> variables)
      : Term(std::vector<std::string>(variables)) {}

  const std::vector<std::string>& variables() const { return variables_; }
  int order() const { return static_cast<int>(variables_.size()); }

  /// Canonical name, variables joined by ':'.
  std::string name() const;

  bool operator==(const Term& other) const { return variables_ == other.variables_; }
  bool operator!=(const Term& other) const { return !(*this == other); }
  /// Orders by (order, name); expand_terms relies on this.
  bool operator<(const Term& other) const;

  /// Parses "a:b:c" into a term.
  static Term parse(const std::string& text);

 private:
  std::vector<std::string> variables_;
};

/// An ordered collection of distinct terms. Insertion order is preserved and
/// observable; the selection pipeline treats it as the LIFO stack order.
class TermSet {
 public:
  TermSet() = default;
  explicit TermSet(std::vector<Term> terms);

  /// Appends a term; returns false (no change) when already present.
  bool add(const Term& term);
  /// Removes a term; returns false when absent.
  bool remove(const Term& term);
  bool contains(const Term& term) const;

  int size() const { return static_cast<int>(terms_.size()); }
  bool empty() const { return terms_.empty(); }
  const Term& at(int i) const { return terms_.at(i); }
  const std::vector<Term>& terms() const { return terms_; }

  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  bool operator==(const TermSet& other) const { return terms_ == other.terms_; }

 private:
  std::vector<Term> terms_;
};

/// All distinct terms of order <= max_order over the given variables, plus
/// extra_terms, deduplicated. Output is sorted by ascending order then
/// lexicographic name, so main effects come first. Every referenced variable
/// must exist in the schema.
TermSet expand_terms(const Schema& schema, const std::vector<std::string>& main_variables,
                     int max_order, const std::vector<Term>& extra_terms = {});

}  // namespace rails

#endif  // RAILS_TERMS_HPP

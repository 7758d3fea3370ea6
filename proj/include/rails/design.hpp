#ifndef RAILS_DESIGN_HPP
#define RAILS_DESIGN_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rails/cohort.hpp"
#include "rails/terms.hpp"

namespace rails {

/// Bookkeeping for one encoded column: the term it came from and the
/// ':'-joined cell (level labels in the term's canonical variable order).
struct DesignColumn {
  std::optional<Term> term;  // nullopt for the intercept
  std::string cell;
  int original_index = 0;  // position in the full pre-drop enumeration

  bool is_intercept() const { return !term.has_value(); }
  std::string label() const {
    return is_intercept() ? std::string("(intercept)") : term->name() + "=" + cell;
  }
};

/// Numeric expansion of a TermSet over a cohort. Treatment coding: one
/// all-ones intercept, then for each term one 0/1 indicator per joint
/// non-reference cell (the first declared schema level of every variable is
/// the reference). Cells unobserved in the cohort are dropped and reported in
/// `empty_cells`; collinear columns are dropped and reported in `aliased`.
struct DesignMatrix {
  Eigen::MatrixXd values;
  std::vector<DesignColumn> columns;  // aligned to values' columns
  int intercept_index = 0;
  std::vector<DesignColumn> empty_cells;
  std::vector<DesignColumn> aliased;
  Schema schema;
  TermSet terms;

  int n_rows() const { return static_cast<int>(values.rows()); }
  int n_cols() const { return static_cast<int>(values.cols()); }

  std::vector<std::string> column_labels() const {
    std::vector<std::string> out;
    out.reserve(columns.size());
    for (const auto& c : columns) out.push_back(c.label());
    return out;
  }

  /// Index of the column encoding (term, cell), or -1 when absent.
  int find_column(const Term& term, const std::string& cell) const;
  /// True when (term, cell) was dropped as unobserved.
  bool is_empty_cell(const Term& term, const std::string& cell) const;
};

/// Relative pivot threshold for declaring a column collinear.
inline constexpr double kAliasPivotThreshold = 1e-10;

/// Builds the design matrix for one cohort. With drop_aliased, collinear
/// columns are removed by a rank-revealing pivoted QR sweep that processes
/// term blocks in declaration order, so earlier terms keep their columns and
/// later (interaction) columns are the ones eliminated.
DesignMatrix build_design_matrix(const Cohort& cohort, const TermSet& terms,
                                 bool drop_aliased = true);

/// A consistent encoding of the same TermSet over two cohorts sharing one
/// schema, as the pseudo-likelihood requires. A cell is dropped when it is
/// unobserved in either cohort (a column with support in only one cohort
/// makes the pseudo-likelihood maximizer run to infinity), and collinearity
/// is judged on the stacked rows so both matrices keep identical columns.
struct SharedEncoding {
  DesignMatrix np;
  DesignMatrix p;
};

SharedEncoding build_shared_encoding(const Cohort& np_cohort, const Cohort& p_cohort,
                                     const TermSet& terms, bool drop_aliased = true);

/// All cell labels of a term under a schema, in enumeration order (last
/// variable's level varies fastest). With non_reference_only, cells touching
/// any reference level are skipped, which yields exactly the encodable cells.
std::vector<std::string> enumerate_cells(const Schema& schema, const Term& term,
                                         bool non_reference_only);

}  // namespace rails

#endif  // RAILS_DESIGN_HPP

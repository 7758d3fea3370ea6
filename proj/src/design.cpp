#include "rails/design.hpp"

#include <algorithm>
#include <numeric>

namespace rails {

namespace {

// One enumerated column: indicator of a joint non-reference cell.
struct RawColumn {
  std::optional<Term> term;
  std::string cell;
  std::vector<int> var_index;   // schema indices, term order
  std::vector<int> level_code;  // required level per variable
  int original_index = 0;
};

std::vector<RawColumn> enumerate_columns(const Schema& schema, const TermSet& terms) {
  std::vector<RawColumn> out;
  RawColumn intercept;
  intercept.cell = "";
  intercept.original_index = 0;
  out.push_back(intercept);
  int next = 1;
  for (const Term& term : terms) {
    std::vector<int> vars;
    for (const auto& v : term.variables()) vars.push_back(schema.index_of(v));
    const int k = static_cast<int>(vars.size());
    std::vector<int> code(k, 1);  // level 0 is the reference
    bool done = false;
    for (int v = 0; v < k; ++v)
      if (schema.n_levels(vars[v]) < 2) done = true;  // single-level variable has no cells
    while (!done) {
      RawColumn col;
      col.term = term;
      col.var_index = vars;
      col.level_code = code;
      std::string cell;
      for (int v = 0; v < k; ++v) {
        if (v) cell += ':';
        cell += schema.levels(vars[v])[code[v]];
      }
      col.cell = std::move(cell);
      col.original_index = next++;
      out.push_back(std::move(col));
      int v = k - 1;  // odometer, last variable fastest
      while (v >= 0) {
        if (++code[v] < schema.n_levels(vars[v])) break;
        code[v] = 1;
        --v;
      }
      if (v < 0) done = true;
    }
  }
  return out;
}

void fill_column(const Cohort& cohort, const RawColumn& col, Eigen::Ref<Eigen::VectorXd> dst) {
  const int n = cohort.n_rows();
  if (col.term == std::nullopt) {
    dst.setOnes();
    return;
  }
  for (int i = 0; i < n; ++i) {
    bool in_cell = true;
    for (size_t v = 0; v < col.var_index.size(); ++v) {
      if (cohort.level(col.var_index[v], i) != col.level_code[v]) {
        in_cell = false;
        break;
      }
    }
    dst(i) = in_cell ? 1.0 : 0.0;
  }
}

DesignColumn to_design_column(const RawColumn& raw) {
  DesignColumn c;
  c.term = raw.term;
  c.cell = raw.cell;
  c.original_index = raw.original_index;
  return c;
}

// Pivoted Gram-Schmidt sweep over term blocks in declaration order. Columns
// whose residual against everything kept so far falls below the relative
// pivot threshold are aliased, lowest pivot first within each block.
struct AliasSweep {
  std::vector<int> kept;      // indices into the input column list, original order
  std::vector<int> aliased;   // drop order
};

AliasSweep alias_sweep(const Eigen::MatrixXd& X, const std::vector<int>& block_of) {
  const int n = static_cast<int>(X.rows());
  const int m = static_cast<int>(X.cols());
  double max_norm = 0.0;
  for (int j = 0; j < m; ++j) max_norm = std::max(max_norm, X.col(j).norm());
  const double threshold = kAliasPivotThreshold * max_norm;

  Eigen::MatrixXd basis(n, m);
  int rank = 0;
  AliasSweep sweep;
  int j = 0;
  while (j < m) {
    int block_end = j;
    while (block_end < m && block_of[block_end] == block_of[j]) ++block_end;
    const int bs = block_end - j;
    Eigen::MatrixXd resid = X.middleCols(j, bs);
    if (rank > 0) {
      auto Q = basis.leftCols(rank);
      resid -= Q * (Q.transpose() * resid);
      resid -= Q * (Q.transpose() * resid);  // reorthogonalize
    }
    std::vector<int> remaining(bs);
    std::iota(remaining.begin(), remaining.end(), 0);
    std::vector<char> local_kept(bs, 0);
    while (!remaining.empty()) {
      int best = -1;
      double best_norm = -1.0;
      for (int r : remaining) {
        double nr = resid.col(r).norm();
        if (nr > best_norm) {
          best_norm = nr;
          best = r;
        }
      }
      if (best_norm <= threshold) break;
      Eigen::VectorXd q = resid.col(best) / best_norm;
      if (rank > 0) {
        auto Q = basis.leftCols(rank);
        q -= Q * (Q.transpose() * q);
        double nq = q.norm();
        if (nq <= kAliasPivotThreshold) break;
        q /= nq;
      }
      basis.col(rank++) = q;
      local_kept[best] = 1;
      remaining.erase(std::find(remaining.begin(), remaining.end(), best));
      for (int r : remaining) resid.col(r) -= q * q.dot(resid.col(r));
    }
    std::sort(remaining.begin(), remaining.end(), [&](int a, int b) {
      double na = resid.col(a).norm(), nb = resid.col(b).norm();
      if (na != nb) return na < nb;
      return a < b;
    });
    for (int idx = 0; idx < bs; ++idx)
      if (local_kept[idx]) sweep.kept.push_back(j + idx);
    for (int r : remaining) sweep.aliased.push_back(j + r);
    j = block_end;
  }
  std::sort(sweep.kept.begin(), sweep.kept.end());
  return sweep;
}

DesignMatrix assemble(const Cohort& cohort, const TermSet& terms,
                      const std::vector<RawColumn>& raw, const Eigen::MatrixXd& full,
                      const std::vector<int>& nonempty, const std::vector<int>& empty,
                      const AliasSweep* sweep, int row_offset, int row_count) {
  DesignMatrix dm;
  dm.schema = cohort.schema();
  dm.terms = terms;
  std::vector<int> final_cols;
  if (sweep) {
    for (int k : sweep->kept) final_cols.push_back(nonempty[k]);
    for (int a : sweep->aliased) dm.aliased.push_back(to_design_column(raw[nonempty[a]]));
  } else {
    final_cols = nonempty;
  }
  for (int e : empty) dm.empty_cells.push_back(to_design_column(raw[e]));
  dm.values.resize(row_count, static_cast<int>(final_cols.size()));
  dm.columns.reserve(final_cols.size());
  for (size_t c = 0; c < final_cols.size(); ++c) {
    dm.values.col(static_cast<int>(c)) = full.col(final_cols[c]).segment(row_offset, row_count);
    dm.columns.push_back(to_design_column(raw[final_cols[c]]));
    if (raw[final_cols[c]].term == std::nullopt) dm.intercept_index = static_cast<int>(c);
  }
  return dm;
}

}  // namespace

int DesignMatrix::find_column(const Term& term, const std::string& cell) const {
  for (int j = 0; j < static_cast<int>(columns.size()); ++j)
    if (!columns[j].is_intercept() && *columns[j].term == term && columns[j].cell == cell)
      return j;
  return -1;
}

bool DesignMatrix::is_empty_cell(const Term& term, const std::string& cell) const {
  for (const auto& c : empty_cells)
    if (c.term && *c.term == term && c.cell == cell) return true;
  return false;
}

std::vector<std::string> enumerate_cells(const Schema& schema, const Term& term,
                                         bool non_reference_only) {
  std::vector<int> vars;
  for (const auto& v : term.variables()) vars.push_back(schema.index_of(v));
  const int k = static_cast<int>(vars.size());
  std::vector<std::string> out;
  const int start = non_reference_only ? 1 : 0;
  for (int v = 0; v < k; ++v)
    if (schema.n_levels(vars[v]) <= start) return out;
  std::vector<int> code(k, start);
  while (true) {
    std::string cell;
    for (int v = 0; v < k; ++v) {
      if (v) cell += ':';
      cell += schema.levels(vars[v])[code[v]];
    }
    out.push_back(std::move(cell));
    int v = k - 1;
    while (v >= 0) {
      if (++code[v] < schema.n_levels(vars[v])) break;
      code[v] = start;
      --v;
    }
    if (v < 0) break;
  }
  return out;
}

DesignMatrix build_design_matrix(const Cohort& cohort, const TermSet& terms, bool drop_aliased) {
  const auto raw = enumerate_columns(cohort.schema(), terms);
  const int n = cohort.n_rows();
  const int m = static_cast<int>(raw.size());
  Eigen::MatrixXd full(n, m);
  for (int j = 0; j < m; ++j) fill_column(cohort, raw[j], full.col(j));

  std::vector<int> nonempty, empty;
  for (int j = 0; j < m; ++j) {
    if (j != 0 && full.col(j).sum() == 0.0)
      empty.push_back(j);
    else
      nonempty.push_back(j);
  }

  if (!drop_aliased)
    return assemble(cohort, terms, raw, full, nonempty, empty, nullptr, 0, n);

  Eigen::MatrixXd sub(n, static_cast<int>(nonempty.size()));
  std::vector<int> block_of(nonempty.size());
  for (size_t c = 0; c < nonempty.size(); ++c) {
    sub.col(static_cast<int>(c)) = full.col(nonempty[c]);
    // Block id: 0 for the intercept, then 1 + position of the term in the set.
    const auto& rc = raw[nonempty[c]];
    int block = 0;
    if (rc.term) {
      for (int t = 0; t < terms.size(); ++t)
        if (terms.at(t) == *rc.term) {
          block = t + 1;
          break;
        }
    }
    block_of[c] = block;
  }
  AliasSweep sweep = alias_sweep(sub, block_of);
  return assemble(cohort, terms, raw, full, nonempty, empty, &sweep, 0, n);
}

SharedEncoding build_shared_encoding(const Cohort& np_cohort, const Cohort& p_cohort,
                                     const TermSet& terms, bool drop_aliased) {
  if (!(np_cohort.schema() == p_cohort.schema()))
    throw SchemaError("cohorts do not share a schema:\n" +
                      np_cohort.schema().diff(p_cohort.schema()));
  const auto raw = enumerate_columns(np_cohort.schema(), terms);
  const int n_np = np_cohort.n_rows();
  const int n_p = p_cohort.n_rows();
  const int n = n_np + n_p;
  const int m = static_cast<int>(raw.size());
  Eigen::MatrixXd full(n, m);
  for (int j = 0; j < m; ++j) {
    fill_column(np_cohort, raw[j], full.col(j).head(n_np));
    fill_column(p_cohort, raw[j], full.col(j).tail(n_p));
  }

  std::vector<int> nonempty, empty;
  for (int j = 0; j < m; ++j) {
    bool np_support = full.col(j).head(n_np).sum() > 0.0;
    bool p_support = full.col(j).tail(n_p).sum() > 0.0;
    if (j != 0 && (!np_support || !p_support))
      empty.push_back(j);
    else
      nonempty.push_back(j);
  }

  const AliasSweep* sweep_ptr = nullptr;
  AliasSweep sweep;
  if (drop_aliased) {
    Eigen::MatrixXd sub(n, static_cast<int>(nonempty.size()));
    std::vector<int> block_of(nonempty.size());
    for (size_t c = 0; c < nonempty.size(); ++c) {
      sub.col(static_cast<int>(c)) = full.col(nonempty[c]);
      const auto& rc = raw[nonempty[c]];
      int block = 0;
      if (rc.term) {
        for (int t = 0; t < terms.size(); ++t)
          if (terms.at(t) == *rc.term) {
            block = t + 1;
            break;
          }
      }
      block_of[c] = block;
    }
    sweep = alias_sweep(sub, block_of);
    sweep_ptr = &sweep;
  }

  SharedEncoding enc;
  enc.np = assemble(np_cohort, terms, raw, full, nonempty, empty, sweep_ptr, 0, n_np);
  enc.p = assemble(p_cohort, terms, raw, full, nonempty, empty, sweep_ptr, n_np, n_p);
  return enc;
}

}  // namespace rails

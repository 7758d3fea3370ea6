#include "rails/margins.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rails/csv.hpp"
#include "rails/design.hpp"
#include "rails/errors.hpp"

namespace rails {

void MarginTargets::set_population_size(double n) {
  if (!(n > 0.0) || !std::isfinite(n)) throw Error("population size must be positive and finite");
  population_size_ = n;
}

void MarginTargets::set(const Term& term, const std::string& cell, double total) {
  if (!std::isfinite(total) || total < 0.0)
    throw Error("margin total for " + term.name() + "=" + cell + " must be finite and >= 0");
  entries_[term][cell] = total;
}

std::optional<double> MarginTargets::find(const Term& term, const std::string& cell) const {
  auto it = entries_.find(term);
  if (it == entries_.end()) return std::nullopt;
  auto jt = it->second.find(cell);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

std::vector<Term> MarginTargets::terms() const {
  std::vector<Term> out;
  for (const auto& [term, cells] : entries_) out.push_back(term);
  return out;
}

void MarginTargets::validate(const Schema& schema) const {
  if (!(population_size_ > 0.0)) throw Error("margin targets lack a population size");
  for (const auto& [term, cells] : entries_) {
    auto expected = enumerate_cells(schema, term, /*non_reference_only=*/false);
    std::set<std::string> expected_set(expected.begin(), expected.end());
    double sum = 0.0;
    for (const auto& [cell, total] : cells) {
      if (!expected_set.count(cell))
        throw SchemaError("margin cell '" + cell + "' is not a cell of term " + term.name());
      if (!std::isfinite(total) || total < 0.0)
        throw Error("margin total for " + term.name() + "=" + cell + " must be finite and >= 0");
      sum += total;
    }
    if (cells.size() != expected_set.size()) {
      for (const auto& cell : expected)
        if (!cells.count(cell))
          throw Error("margins for term " + term.name() + " are missing cell '" + cell + "'");
    }
    if (std::abs(sum - population_size_) > 1e-9 * population_size_) {
      std::ostringstream os;
      os << "cell totals of term " << term.name() << " sum to " << sum
         << ", expected population size " << population_size_;
      throw Error(os.str());
    }
  }
}

MarginTargets MarginTargets::load_csv(const std::string& path, const Schema& schema) {
  auto table = csv::read_file(path);
  int term_col = table.column_index("term");
  int cell_col = table.column_index("cell");
  int total_col = table.column_index("total");
  if (term_col < 0 || cell_col < 0 || total_col < 0)
    throw ParseError("margin file '" + path + "' needs columns term,cell,total", 1);

  MarginTargets targets;
  long line = 1;
  for (const auto& row : table.rows) {
    ++line;
    const std::string& term_text = row[term_col];
    double total;
    try {
      total = std::stod(row[total_col]);
    } catch (const std::exception&) {
      throw ParseError("bad total '" + row[total_col] + "' in '" + path + "'", line);
    }
    if (term_text == "__N__") {
      targets.set_population_size(total);
      continue;
    }
    Term parsed = Term::parse(term_text);
    // The file may list term variables in any order: permute the cell levels
    // into the term's canonical (sorted) variable order.
    std::vector<std::string> file_vars;
    {
      std::string v;
      std::istringstream is(term_text);
      while (std::getline(is, v, ':')) file_vars.push_back(v);
    }
    std::vector<std::string> file_levels;
    {
      std::string l;
      std::istringstream is(row[cell_col]);
      while (std::getline(is, l, ':')) file_levels.push_back(l);
    }
    if (file_levels.size() != file_vars.size())
      throw ParseError("cell '" + row[cell_col] + "' does not match term '" + term_text + "'",
                       line);
    std::string cell;
    for (size_t k = 0; k < parsed.variables().size(); ++k) {
      const std::string& want = parsed.variables()[k];
      size_t pos = 0;
      while (pos < file_vars.size() && file_vars[pos] != want) ++pos;
      if (k) cell += ':';
      cell += file_levels[pos];
    }
    for (const auto& v : parsed.variables()) schema.index_of(v);
    targets.set(parsed, cell, total);
  }
  targets.validate(schema);
  return targets;
}

void MarginTargets::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << "term,cell,total\n";
  for (const auto& [term, cells] : entries_)
    for (const auto& [cell, total] : cells)
      out << csv::escape(term.name()) << ',' << csv::escape(cell) << ','
          << csv::format_double(total) << '\n';
  out << "__N__,," << csv::format_double(population_size_) << '\n';
}

MarginTargets MarginTargets::from_cohort(const Cohort& cohort, const TermSet& terms,
                                         const Eigen::VectorXd* weights) {
  const int n = cohort.n_rows();
  if (weights && weights->size() != n) throw ShapeError("weight length does not match cohort");
  MarginTargets targets;
  double total_weight = weights ? weights->sum() : static_cast<double>(n);
  targets.set_population_size(total_weight);
  const Schema& schema = cohort.schema();
  for (const Term& term : terms) {
    std::vector<int> vars;
    for (const auto& v : term.variables()) vars.push_back(schema.index_of(v));
    // Accumulate by mixed-radix cell code, then label.
    std::vector<int> radix(vars.size());
    int n_cells = 1;
    for (size_t k = 0; k < vars.size(); ++k) {
      radix[k] = schema.n_levels(vars[k]);
      n_cells *= radix[k];
    }
    std::vector<double> acc(n_cells, 0.0);
    for (int i = 0; i < n; ++i) {
      int code = 0;
      for (size_t k = 0; k < vars.size(); ++k) code = code * radix[k] + cohort.level(vars[k], i);
      acc[code] += weights ? (*weights)(i) : 1.0;
    }
    auto cells = enumerate_cells(schema, term, /*non_reference_only=*/false);
    // enumerate_cells iterates the same mixed-radix order starting from 0.
    for (int c = 0; c < n_cells; ++c) targets.set(term, cells[c], acc[c]);
  }
  return targets;
}

}  // namespace rails

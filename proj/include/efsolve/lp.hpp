#pragma once

// Exact linear programming over the rationals.
//
// A dense two-phase simplex with Bland's anti-cycling rule. Problems in this
// library are small (tens of rows and columns), so clarity and exactness win
// over speed. All variables are implicitly non-negative.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "efsolve/rational.hpp"

namespace efsolve {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct LinearConstraint {
  std::vector<std::pair<int, Rational>> terms;  // (variable, coefficient)
  Relation relation = Relation::kGreaterEqual;
  Rational rhs = 0;
};

enum class LpStatus { kInfeasible, kOptimal, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<Rational> solution;  // one entry per structural variable
  Rational objective = 0;
};

class LinearProgram {
 public:
  explicit LinearProgram(int num_variables = 0) : num_vars_(num_variables) {}

  int AddVariable() { return num_vars_++; }
  int num_variables() const { return num_vars_; }
  std::size_t num_constraints() const { return constraints_.size(); }

  void AddConstraint(LinearConstraint constraint) {
    for (const auto& [var, coef] : constraint.terms) {
      if (var < 0 || var >= num_vars_) {
        throw std::out_of_range("LP constraint references unknown variable");
      }
    }
    constraints_.push_back(std::move(constraint));
  }

  void AddConstraint(std::vector<std::pair<int, Rational>> terms,
                     Relation relation, Rational rhs) {
    AddConstraint(LinearConstraint{std::move(terms), relation, std::move(rhs)});
  }

  // Objective to maximise; variables not mentioned have coefficient zero.
  void SetObjective(std::vector<std::pair<int, Rational>> objective) {
    objective_ = std::move(objective);
  }

  LpResult Solve() const;

 private:
  int num_vars_;
  std::vector<LinearConstraint> constraints_;
  std::vector<std::pair<int, Rational>> objective_;
};

namespace lp_internal {

// Tableau in canonical form: rows hold basic variables, the last column is
// the right-hand side.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : cols_(cols), cells_(rows, std::vector<Rational>(cols + 1, 0)),
        basis_(rows, -1) {}

  std::size_t rows() const { return cells_.size(); }
  std::size_t cols() const { return cols_; }
  Rational& at(std::size_t r, std::size_t c) { return cells_[r][c]; }
  const Rational& at(std::size_t r, std::size_t c) const { return cells_[r][c]; }
  Rational& rhs(std::size_t r) { return cells_[r][cols_]; }
  const Rational& rhs(std::size_t r) const { return cells_[r][cols_]; }
  int& basis(std::size_t r) { return basis_[r]; }
  int basis(std::size_t r) const { return basis_[r]; }

  void Pivot(std::size_t row, std::size_t col) {
    Rational pivot = cells_[row][col];
    for (Rational& v : cells_[row]) v /= pivot;
    for (std::size_t r = 0; r < cells_.size(); ++r) {
      if (r == row) continue;
      Rational factor = cells_[r][col];
      if (factor == 0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) {
        if (cells_[row][c] != 0) cells_[r][c] -= factor * cells_[row][c];
      }
    }
    basis_[row] = static_cast<int>(col);
  }

  void DropRow(std::size_t row) {
    cells_.erase(cells_.begin() + row);
    basis_.erase(basis_.begin() + row);
  }

  // Maximises `cost` over columns allowed by `usable`. Returns false when the
  // objective is unbounded.
  bool Optimize(const std::vector<Rational>& cost,
                const std::vector<bool>& usable) {
    while (true) {
      // Reduced cost of column c: cost[c] - sum_r cost[basis r] * a[r][c].
      int entering = -1;
      for (std::size_t c = 0; c < cols_ && entering < 0; ++c) {
        if (!usable[c]) continue;
        Rational reduced = cost[c];
        for (std::size_t r = 0; r < rows(); ++r) {
          if (cells_[r][c] != 0) reduced -= cost[basis_[r]] * cells_[r][c];
        }
        if (reduced > 0) entering = static_cast<int>(c);
      }
      if (entering < 0) return true;
      // Ratio test; Bland's rule breaks ties by smallest basic index.
      int leaving = -1;
      Rational best_ratio;
      for (std::size_t r = 0; r < rows(); ++r) {
        const Rational& a = cells_[r][entering];
        if (a <= 0) continue;
        Rational ratio = rhs(r) / a;
        if (leaving < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leaving])) {
          leaving = static_cast<int>(r);
          best_ratio = ratio;
        }
      }
      if (leaving < 0) return false;
      Pivot(leaving, entering);
    }
  }

 private:
  std::size_t cols_;
  std::vector<std::vector<Rational>> cells_;
  std::vector<int> basis_;
};

}  // namespace lp_internal

inline LpResult LinearProgram::Solve() const {
  using lp_internal::Tableau;
  const std::size_t m = constraints_.size();
  std::size_t num_slack = 0;
  for (const auto& c : constraints_) {
    if (c.relation != Relation::kEqual) ++num_slack;
  }
  // Columns: structural | slack | artificial (one per row).
  const std::size_t n = num_vars_;
  const std::size_t first_artificial = n + num_slack;
  const std::size_t total = first_artificial + m;
  Tableau tab(m, total);
  std::size_t slack = n;
  for (std::size_t r = 0; r < m; ++r) {
    const LinearConstraint& c = constraints_[r];
    for (const auto& [var, coef] : c.terms) tab.at(r, var) += coef;
    tab.rhs(r) = c.rhs;
    if (c.relation == Relation::kLessEqual) tab.at(r, slack++) = 1;
    if (c.relation == Relation::kGreaterEqual) tab.at(r, slack++) = -1;
    if (tab.rhs(r) < 0) {
      for (std::size_t col = 0; col <= total; ++col) {
        if (tab.at(r, col) != 0) tab.at(r, col) = -tab.at(r, col);
      }
    }
    tab.at(r, first_artificial + r) = 1;
    tab.basis(r) = static_cast<int>(first_artificial + r);
  }

  // Phase 1: maximise -sum(artificials).
  std::vector<Rational> phase1(total, 0);
  for (std::size_t r = 0; r < m; ++r) phase1[first_artificial + r] = -1;
  std::vector<bool> all_usable(total, true);
  tab.Optimize(phase1, all_usable);
  Rational infeasibility = 0;
  for (std::size_t r = 0; r < tab.rows(); ++r) {
    if (static_cast<std::size_t>(tab.basis(r)) >= first_artificial) {
      infeasibility += tab.rhs(r);
    }
  }
  LpResult result;
  if (infeasibility != 0) {
    result.status = LpStatus::kInfeasible;
    return result;
  }
  // Drive zero-valued artificials out of the basis or drop redundant rows.
  for (std::size_t r = 0; r < tab.rows();) {
    if (static_cast<std::size_t>(tab.basis(r)) < first_artificial) {
      ++r;
      continue;
    }
    std::size_t col = 0;
    while (col < first_artificial && tab.at(r, col) == 0) ++col;
    if (col < first_artificial) {
      tab.Pivot(r, col);
      ++r;
    } else {
      tab.DropRow(r);
    }
  }

  // Phase 2 on the original objective, artificials barred from entering.
  std::vector<Rational> phase2(total, 0);
  for (const auto& [var, coef] : objective_) phase2[var] += coef;
  std::vector<bool> usable(total, true);
  for (std::size_t c = first_artificial; c < total; ++c) usable[c] = false;
  bool bounded = tab.Optimize(phase2, usable);

  result.solution.assign(n, 0);
  for (std::size_t r = 0; r < tab.rows(); ++r) {
    if (static_cast<std::size_t>(tab.basis(r)) < n) {
      result.solution[tab.basis(r)] = tab.rhs(r);
    }
  }
  result.status = bounded ? LpStatus::kOptimal : LpStatus::kUnbounded;
  for (const auto& [var, coef] : objective_) {
    result.objective += coef * result.solution[var];
  }
  return result;
}

}  // namespace efsolve

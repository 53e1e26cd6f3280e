#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "onearm/common.hpp"

namespace onearm {

enum class Rel { Le, Ge, Eq };

// minimize c.z subject to a[i].z (rel[i]) b[i], z >= 0
template <typename T>
struct LinearProgram {
  std::vector<std::vector<T>> a;
  std::vector<T> b;
  std::vector<Rel> rel;
  std::vector<T> c;
};

template <typename T>
struct LpSolution {
  bool ok = false;
  std::string status;  // "optimal", "infeasible", "unbounded"
  T objective{};
  std::vector<T> z;
};

// Dense two-phase primal simplex with Bland's pivoting rule. T is double
// (feas_tol ~ 1e-9) or an exact rational type (feas_tol ignored, exact zero
// tests). Bland's rule makes the pivot order deterministic and cycle-free.
template <typename T>
class Simplex {
 public:
  explicit Simplex(double feas_tol) : tol_(feas_tol) {}

  LpSolution<T> solve(const LinearProgram<T>& lp) {
    const std::size_t m = lp.a.size();
    n_ = lp.c.size();
    // count auxiliary columns
    std::size_t n_slack = 0, n_art = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const bool flip = lp.b[i] < T(0);
      Rel r = lp.rel[i];
      if (flip) r = r == Rel::Le ? Rel::Ge : (r == Rel::Ge ? Rel::Le : Rel::Eq);
      if (r != Rel::Eq) ++n_slack;
      if (r != Rel::Le) ++n_art;
    }
    cols_ = n_ + n_slack + n_art + 1;  // + rhs
    rows_.assign(m, std::vector<T>(cols_, T(0)));
    basis_.assign(m, 0);
    art_begin_ = n_ + n_slack;

    std::size_t slack_at = n_, art_at = art_begin_;
    for (std::size_t i = 0; i < m; ++i) {
      const bool flip = lp.b[i] < T(0);
      Rel r = lp.rel[i];
      if (flip) r = r == Rel::Le ? Rel::Ge : (r == Rel::Ge ? Rel::Le : Rel::Eq);
      for (std::size_t j = 0; j < n_; ++j)
        rows_[i][j] = flip ? -lp.a[i][j] : lp.a[i][j];
      rows_[i][cols_ - 1] = flip ? -lp.b[i] : lp.b[i];
      if (r == Rel::Le) {
        rows_[i][slack_at] = T(1);
        basis_[i] = static_cast<long>(slack_at++);
      } else if (r == Rel::Ge) {
        rows_[i][slack_at++] = T(-1);
        rows_[i][art_at] = T(1);
        basis_[i] = static_cast<long>(art_at++);
      } else {
        rows_[i][art_at] = T(1);
        basis_[i] = static_cast<long>(art_at++);
      }
    }

    LpSolution<T> out;
    // phase 1: minimize the artificial sum
    if (n_art > 0) {
      std::vector<T> phase1(cols_ - 1, T(0));
      for (std::size_t j = art_begin_; j < cols_ - 1; ++j) phase1[j] = T(1);
      build_objective(phase1);
      if (!iterate()) {
        out.status = "unbounded";  // phase 1 is bounded below; defensive
        return out;
      }
      if (is_pos(obj_value())) {
        out.status = "infeasible";
        return out;
      }
      // pivot leftover artificials out of the basis where possible
      for (std::size_t i = 0; i < m; ++i) {
        if (static_cast<std::size_t>(basis_[i]) < art_begin_) continue;
        std::size_t j = 0;
        for (; j < art_begin_; ++j)
          if (is_nonzero(rows_[i][j])) break;
        if (j < art_begin_) pivot(i, j);
      }
    }
    // phase 2
    std::vector<T> cost(cols_ - 1, T(0));
    for (std::size_t j = 0; j < n_; ++j) cost[j] = lp.c[j];
    build_objective(cost);
    forbid_artificials_ = true;
    if (!iterate()) {
      out.status = "unbounded";
      return out;
    }
    out.ok = true;
    out.status = "optimal";
    out.z.assign(n_, T(0));
    for (std::size_t i = 0; i < m; ++i)
      if (static_cast<std::size_t>(basis_[i]) < n_)
        out.z[basis_[i]] = rows_[i][cols_ - 1];
    T obj{};
    for (std::size_t j = 0; j < n_; ++j) obj += lp.c[j] * out.z[j];
    out.objective = obj;
    return out;
  }

 private:
  bool is_pos(const T& x) const { return x > T(0) + eps(); }
  bool is_neg(const T& x) const { return x < T(0) - eps(); }
  bool is_nonzero(const T& x) const { return is_pos(x) || is_neg(x); }
  T eps() const {
    if constexpr (std::is_same_v<T, double>)
      return tol_;
    else
      return T(0);
  }

  void build_objective(const std::vector<T>& cost) {
    obj_.assign(cols_, T(0));
    for (std::size_t j = 0; j < cols_ - 1; ++j) obj_[j] = cost[j];
    // subtract basic rows to zero out reduced costs of the basis
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const T cb = cost[basis_[i]];
      if (cb == T(0)) continue;
      for (std::size_t j = 0; j < cols_; ++j) obj_[j] -= cb * rows_[i][j];
    }
  }

  T obj_value() const { return -obj_[cols_ - 1]; }

  void pivot(std::size_t r, std::size_t c) {
    const T piv = rows_[r][c];
    for (std::size_t j = 0; j < cols_; ++j) rows_[r][j] /= piv;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == r) continue;
      const T f = rows_[i][c];
      if (f == T(0)) continue;
      for (std::size_t j = 0; j < cols_; ++j) rows_[i][j] -= f * rows_[r][j];
    }
    const T f = obj_[c];
    if (f != T(0))
      for (std::size_t j = 0; j < cols_; ++j) obj_[j] -= f * rows_[r][j];
    basis_[r] = static_cast<long>(c);
  }

  // Bland: entering = lowest-index column with negative reduced cost;
  // leaving = min ratio, ties broken by lowest basic variable index.
  bool iterate() {
    const std::size_t limit = forbid_artificials_ ? art_begin_ : cols_ - 1;
    for (;;) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (is_neg(obj_[j])) {
          enter = j;
          break;
        }
      }
      if (enter == limit) return true;  // optimal
      std::size_t leave = rows_.size();
      T best_ratio{};
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (!is_pos(rows_[i][enter])) continue;
        const T ratio = rows_[i][cols_ - 1] / rows_[i][enter];
        bool take = false;
        if (leave == rows_.size())
          take = true;
        else if (ratio < best_ratio - eps())
          take = true;
        else if (!(ratio > best_ratio + eps()) && basis_[i] < basis_[leave])
          take = true;  // near-tie: Bland picks the lowest basic index
        if (take) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == rows_.size()) return false;  // unbounded
      pivot(leave, enter);
    }
  }

  double tol_;
  std::size_t n_ = 0, cols_ = 0, art_begin_ = 0;
  bool forbid_artificials_ = false;
  std::vector<std::vector<T>> rows_;
  std::vector<T> obj_;
  std::vector<long> basis_;
};

template <typename T>
LpSolution<T> solve_lp(const LinearProgram<T>& lp, double feas_tol = 1e-9) {
  Simplex<T> s(feas_tol);
  return s.solve(lp);
}

}  // namespace onearm

#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace onearm {

// Invalid inputs or preconditions (bad prior, infeasible parameters, ...).
// The CLI maps these to exit code 1.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Enumeration or solver state space exceeded the configured node budget.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// Number formatting used for all CSV output: 9 significant digits.
inline std::string fmt9(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

// Sum with a fixed pairwise reduction tree, so the result does not depend on
// accumulation chunking.
inline double pairwise_sum(const std::vector<double>& xs, std::size_t lo,
                           std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += xs[i];
    return s;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(xs, lo, mid) + pairwise_sum(xs, mid, hi);
}

inline double pairwise_sum(const std::vector<double>& xs) {
  return pairwise_sum(xs, 0, xs.size());
}

}  // namespace onearm

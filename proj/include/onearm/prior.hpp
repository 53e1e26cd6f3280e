#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "onearm/common.hpp"

namespace onearm {

// One point of a finitely supported prior: success probability x with weight w.
struct Atom {
  double x = 0.0;
  double w = 0.0;
};

struct FiniteSupport {
  std::vector<Atom> atoms;  // sorted by x, weights > 0, sum to 1
};

struct BetaParams {
  double a = 1.0;
  double b = 1.0;
};

struct Moments {
  double m = 0.0;       // mean
  double w = 0.0;       // variance
  double m1 = 0.0;      // posterior mean after a success
  double m0 = 0.0;      // posterior mean after a failure
  double m_star = 0.0;  // supremum of the support
  bool point_mass = false;
};

enum class Outcome : int { Failure = 0, Success = 1 };

// Prior over the risky arm's success probability. Either finitely supported
// (exact enumeration) or Beta (conjugate updates, uniform = Beta(1,1)).
class Prior {
 public:
  static Prior finite(std::vector<Atom> atoms);
  static Prior two_point(double lo, double hi, double w_lo = 0.5);
  static Prior point_mass(double x);
  static Prior beta(double a, double b);
  static Prior uniform() { return beta(1.0, 1.0); }

  bool is_finite() const { return std::holds_alternative<FiniteSupport>(repr_); }
  bool is_beta() const { return !is_finite(); }
  const FiniteSupport& finite_support() const;
  const BetaParams& beta_params() const;

  bool is_point_mass() const;

  std::string to_json() const;
  static Prior from_json(const std::string& text);

 private:
  Prior() = default;
  std::variant<FiniteSupport, BetaParams> repr_;
};

Moments moments(const Prior& prior);

// Bayesian update after one pull of the risky arm. Throws DomainError when
// conditioning on an outcome of probability zero.
Prior update(const Prior& prior, Outcome outcome);

// E[max(p, X)] for X ~ prior. An atom at exactly p counts at value p.
double expected_best_mean(const Prior& prior, double p);

// Posterior mean after s successes and f failures, computed in log space so
// long update chains on finite supports do not underflow. Returns nullopt if
// the evidence has probability zero under the prior.
std::optional<double> posterior_mean(const Prior& prior, int s, int f);

}  // namespace onearm

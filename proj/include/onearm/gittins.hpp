#pragma once

#include <string>

#include "onearm/prior.hpp"

namespace onearm {

struct ValueResult {
  double value = 0.0;
  double error_bound = 0.0;  // beta^H/(1-beta) for truncated discounting, 0 exact
  int depth_used = 0;
};

enum class IndexMode { Discounted, Finite };

struct IndexResult {
  double index = 0.0;
  double tolerance = 0.0;
  IndexMode mode = IndexMode::Discounted;
  double beta = 0.0;  // discounted mode
  int horizon = 0;    // finite mode
};

// Optimal single-player value over rounds 0..depth-1, with retirement worth
// p*beta^depth/(1-beta) at the truncation point. The unexplored tail of the
// risky arm is covered by error_bound = beta^depth/(1-beta).
ValueResult single_player_value(const Prior& prior, double p, double beta,
                                int depth);

// Exact optimal value of the T+1 round undiscounted single-player game.
double single_player_value_finite(const Prior& prior, double p, int horizon);

// Infimum of safe-arm probabilities p at which always playing the safe arm is
// optimal. Bisection over [m, M*] against p/(1-beta); truncation depth is
// chosen so beta^H/(1-beta) < tol/4.
IndexResult gittins_discounted(const Prior& prior, double beta,
                               double tol = 1e-6);

// Finite-horizon analogue over T+1 rounds.
IndexResult gittins_finite(const Prior& prior, int horizon, double tol = 1e-9);

// Depth at which beta^H/(1-beta) drops below bound.
int depth_for_tail_bound(double beta, double bound);

}  // namespace onearm

#pragma once

#include <string>
#include <vector>

#include "onearm/gittins.hpp"
#include "onearm/prior.hpp"

namespace onearm {

// Closed-form exploration thresholds for one (prior, beta) pair.
struct ThresholdSet {
  double m = 0.0;
  double p_tilde_lb = 0.0;       // m + beta*w/2
  double p_star_ub = 0.0;        // (m*beta + g)/(1 + beta)
  double g = 0.0;                // discounted index of the risky arm
  double p_hat_lb = 0.0;         // g + beta^2*w*(1-beta)/4
  double p_circ = 0.0;           // ((1-beta)*m + 2*beta*M*)/(1+beta)
  double m_star = 0.0;
  double finite_competing = 0.0;  // (m + M*)/2
  double gittins_lb = 0.0;        // m + beta*w/(1 + m*beta)
  bool ordering_ok = false;       // m < p_tilde_lb <= p_star_ub < g < p_hat_lb,
                                  // p_circ < M*
};

ThresholdSet thresholds(const Prior& prior, double beta,
                        double index_tol = 1e-6);

struct DecayBound {
  int k = 0;        // smallest k with beta^k <= (alpha - p)/2
  double bound = 0.0;
};

// Bound on the chance that nobody has explored by round t, for neutral play
// where a lone player earns alpha per round. Requires p < alpha <= 1.
DecayBound neutral_decay_bound(double alpha, double p, double beta, long t);

struct NetGainBounds {
  double lb = 0.0;  // min{1/6 + p^3/6 - p^2/2, 5/6 - 3p/2}
  double ub = 0.0;  // p^2/2 + 1 - 2p
};

// Net-gain envelope for the forced-start game with a uniform prior in the
// patient limit.
NetGainBounds uniform_net_gain_bounds(double p);

struct RegionRow {
  std::string prior_id;
  double beta = 0.0;
  ThresholdSet t;
  bool flagged = false;      // per-cell failure; numeric fields are NaN
  std::string message;       // failure reason when flagged
};

// One row per (prior, beta); failures flag the row instead of aborting.
std::vector<RegionRow> region_table(const std::vector<Prior>& priors,
                                    const std::vector<double>& betas,
                                    double index_tol = 1e-6);

// CSV with a mandatory header; columns in contract order; 9 significant
// digits; LF line endings.
std::string region_table_csv(const std::vector<RegionRow>& rows);

}  // namespace onearm

#include "onearm/thresholds.hpp"

#include <cmath>
#include <limits>

namespace onearm {

ThresholdSet thresholds(const Prior& prior, double beta, double index_tol) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0,1)");
  const Moments mom = moments(prior);
  if (mom.w <= 0.0) throw DomainError("thresholds need a non-degenerate prior");

  ThresholdSet t;
  t.m = mom.m;
  t.m_star = mom.m_star;
  t.g = gittins_discounted(prior, beta, index_tol).index;
  t.p_tilde_lb = mom.m + beta * mom.w / 2.0;
  t.p_star_ub = (mom.m * beta + t.g) / (1.0 + beta);
  t.p_hat_lb = t.g + beta * beta * mom.w * (1.0 - beta) / 4.0;
  t.p_circ = ((1.0 - beta) * mom.m + 2.0 * beta * mom.m_star) / (1.0 + beta);
  t.finite_competing = (mom.m + mom.m_star) / 2.0;
  t.gittins_lb = mom.m + beta * mom.w / (1.0 + mom.m * beta);
  t.ordering_ok = t.m < t.p_tilde_lb && t.p_tilde_lb <= t.p_star_ub &&
                  t.p_star_ub < t.g && t.g < t.p_hat_lb && t.p_circ < t.m_star;
  return t;
}

DecayBound neutral_decay_bound(double alpha, double p, double beta, long t) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0,1)");
  if (!(p >= 0.0 && alpha <= 1.0 && p < alpha))
    throw DomainError("need p < alpha <= 1; the bound is vacuous otherwise");
  if (t < 0) throw DomainError("round t must be nonnegative");
  const double half_gap = (alpha - p) / 2.0;
  int k = 1;
  double bk = beta;
  while (bk > half_gap) {
    ++k;
    bk *= beta;
  }
  DecayBound out;
  out.k = k;
  out.bound = std::pow(1.0 - half_gap, static_cast<double>(t / k));
  return out;
}

NetGainBounds uniform_net_gain_bounds(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0,1]");
  NetGainBounds out;
  const double lb1 = 1.0 / 6.0 + p * p * p / 6.0 - p * p / 2.0;
  const double lb2 = 5.0 / 6.0 - 1.5 * p;
  out.lb = std::min(lb1, lb2);
  out.ub = p * p / 2.0 + 1.0 - 2.0 * p;
  return out;
}

std::vector<RegionRow> region_table(const std::vector<Prior>& priors,
                                    const std::vector<double>& betas,
                                    double index_tol) {
  if (priors.empty()) throw DomainError("prior grid is empty");
  if (betas.empty()) throw DomainError("beta grid is empty");
  std::vector<RegionRow> rows;
  rows.reserve(priors.size() * betas.size());
  for (std::size_t i = 0; i < priors.size(); ++i) {
    for (double beta : betas) {
      RegionRow row;
      row.prior_id = std::to_string(i);
      row.beta = beta;
      try {
        row.t = thresholds(priors[i], beta, index_tol);
      } catch (const DomainError& e) {
        row.flagged = true;
        row.message = e.what();
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.t = ThresholdSet{nan, nan, nan, nan, nan, nan, nan, nan, nan, false};
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string region_table_csv(const std::vector<RegionRow>& rows) {
  std::string out =
      "prior_id,beta,m,p_tilde_lb,p_star_ub,g,p_hat_lb,p_circ,m_star,"
      "finite_competing,gittins_lb\n";
  for (const RegionRow& r : rows) {
    out += r.prior_id;
    out += ',';
    out += fmt9(r.beta);
    for (double v : {r.t.m, r.t.p_tilde_lb, r.t.p_star_ub, r.t.g, r.t.p_hat_lb,
                     r.t.p_circ, r.t.m_star, r.t.finite_competing,
                     r.t.gittins_lb}) {
      out += ',';
      out += fmt9(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace onearm

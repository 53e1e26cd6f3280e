#include "onearm/gittins.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace onearm {

namespace {

// Posterior means on the diagonal s + f = k, for k = 0..depth, indexed by s.
// Finite supports are carried as renormalized weight vectors from one
// diagonal to the next, so deep tables neither underflow nor need logs.
// States never reached (evidence of probability zero) carry mean 0; their
// parent transition probability is 0 as well, so the value is unaffected.
class MeanTable {
 public:
  MeanTable(const Prior& prior, int depth) : depth_(depth) {
    rows_.resize(depth + 1);
    if (prior.is_beta()) {
      const auto& [a, b] = prior.beta_params();
      for (int k = 0; k <= depth; ++k) {
        rows_[k].resize(k + 1);
        for (int s = 0; s <= k; ++s) rows_[k][s] = (a + s) / (a + b + k);
      }
      return;
    }
    const auto& atoms = prior.finite_support().atoms;
    const std::size_t n = atoms.size();
    // weight vectors for the previous diagonal, cell-major
    std::vector<std::vector<double>> prev(1), cur;
    prev[0].resize(n);
    for (std::size_t i = 0; i < n; ++i) prev[0][i] = atoms[i].w;
    rows_[0] = {mean_of(prev[0], atoms)};
    for (int k = 1; k <= depth; ++k) {
      cur.assign(k + 1, std::vector<double>(n, 0.0));
      rows_[k].assign(k + 1, 0.0);
      for (int s = 0; s <= k; ++s) {
        const auto& parent = s > 0 ? prev[s - 1] : prev[0];
        double z = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double lik = s > 0 ? atoms[i].x : (1.0 - atoms[i].x);
          cur[s][i] = parent[i] * lik;
          z += cur[s][i];
        }
        if (z > 0.0)
          for (std::size_t i = 0; i < n; ++i) cur[s][i] /= z;
        rows_[k][s] = mean_of(cur[s], atoms);
      }
      prev.swap(cur);
    }
  }
  double at(int s, int f) const { return rows_[s + f][s]; }
  int depth() const { return depth_; }

 private:
  static double mean_of(const std::vector<double>& w,
                        const std::vector<Atom>& atoms) {
    double m = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) m += w[i] * atoms[i].x;
    return m;
  }
  int depth_;
  std::vector<std::vector<double>> rows_;
};

// Value of the truncated discounted problem, normalized at the current round.
// The key structural fact: whenever retiring to the safe arm is weakly
// optimal in some state, the value from that state equals p/(1-beta), so the
// recursion only needs states on the diagonal s + f = round.
double discounted_value(const MeanTable& means, double p, double beta) {
  const int depth = means.depth();
  const double retire = p / (1.0 - beta);
  std::vector<double> next(depth + 1, retire);  // diagonal k = depth
  std::vector<double> cur;
  for (int k = depth - 1; k >= 0; --k) {
    cur.assign(k + 1, retire);
    for (int s = 0; s <= k; ++s) {
      const double m = means.at(s, k - s);
      const double pull = m * (1.0 + beta * next[s + 1]) +
                          (1.0 - m) * beta * next[s];
      cur[s] = std::max(retire, pull);
    }
    next.swap(cur);
  }
  return next[0];
}

// Same recursion for the undiscounted T+1 round game; retiring at round k is
// worth p per remaining round.
double finite_value(const MeanTable& means, double p, int horizon) {
  std::vector<double> next(horizon + 2, 0.0);  // just past the last round
  std::vector<double> cur;
  for (int k = horizon; k >= 0; --k) {
    const double retire = p * (horizon - k + 1);
    cur.assign(k + 1, retire);
    for (int s = 0; s <= k; ++s) {
      const double m = means.at(s, k - s);
      const double pull = m * (1.0 + next[s + 1]) + (1.0 - m) * next[s];
      cur[s] = std::max(retire, pull);
    }
    next.swap(cur);
  }
  return next[0];
}

}  // namespace

int depth_for_tail_bound(double beta, double bound) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0,1)");
  if (!(bound > 0.0)) throw DomainError("tail bound must be positive");
  const double h = std::log(bound * (1.0 - beta)) / std::log(beta);
  return std::max(1, static_cast<int>(std::ceil(h)) + 1);
}

ValueResult single_player_value(const Prior& prior, double p, double beta,
                                int depth) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0,1]");
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0,1)");
  if (depth < 1) throw DomainError("depth must be at least 1");
  MeanTable means(prior, depth);
  ValueResult out;
  out.value = discounted_value(means, p, beta);
  out.error_bound = std::pow(beta, depth) / (1.0 - beta);
  out.depth_used = depth;
  return out;
}

double single_player_value_finite(const Prior& prior, double p, int horizon) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0,1]");
  if (horizon < 0) throw DomainError("horizon must be nonnegative");
  MeanTable means(prior, horizon + 1);
  return finite_value(means, p, horizon);
}

IndexResult gittins_discounted(const Prior& prior, double beta, double tol) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0,1)");
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  const Moments mom = moments(prior);
  if (mom.w <= 0.0)
    throw DomainError("Gittins index of a point mass is its mean; "
                      "a non-degenerate prior is required");

  const int depth = depth_for_tail_bound(beta, tol / 4.0);
  MeanTable means(prior, depth);

  double lo = mom.m, hi = mom.m_star;
  // exploring strictly beats retiring below the index
  auto explores = [&](double p) {
    return discounted_value(means, p, beta) > p / (1.0 - beta) + 1e-14;
  };
  while (hi - lo > tol / 2.0) {
    const double mid = 0.5 * (lo + hi);
    if (explores(mid))
      lo = mid;
    else
      hi = mid;
  }
  IndexResult out;
  out.index = std::clamp(0.5 * (lo + hi), mom.m, mom.m_star);
  out.tolerance = tol;
  out.mode = IndexMode::Discounted;
  out.beta = beta;
  return out;
}

IndexResult gittins_finite(const Prior& prior, int horizon, double tol) {
  if (horizon < 0) throw DomainError("horizon must be nonnegative");
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  const Moments mom = moments(prior);
  MeanTable means(prior, horizon + 1);

  double lo = mom.m, hi = mom.m_star;
  auto explores = [&](double p) {
    return finite_value(means, p, horizon) > p * (horizon + 1) + 1e-12;
  };
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (explores(mid))
      lo = mid;
    else
      hi = mid;
  }
  IndexResult out;
  out.index = std::clamp(0.5 * (lo + hi), mom.m, mom.m_star);
  out.tolerance = tol;
  out.mode = IndexMode::Finite;
  out.horizon = horizon;
  return out;
}

}  // namespace onearm

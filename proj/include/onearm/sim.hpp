#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "onearm/game.hpp"
#include "onearm/prior.hpp"

namespace onearm {

// Per-replication substream: a splitmix64 scramble of (seed, rep index)
// seeds a xorshift64* generator. Uniforms come straight from generator bits
// so traces are identical across platforms and independent of scheduling.
class SubstreamRng {
 public:
  SubstreamRng(uint64_t seed, uint64_t stream);
  double uniform();                 // [0, 1)
  bool bernoulli(double prob) { return uniform() < prob; }

 private:
  uint64_t state_;
  uint64_t next_raw();
};

struct TraceRound {
  int t = 0;
  Arm action_a = Arm::Left;
  uint8_t reward_a = 0;
  Arm action_b = Arm::Left;
  uint8_t reward_b = 0;
};

struct SimTrace {
  double theta = 0.0;  // nature's draw
  uint64_t seed = 0;   // substream index
  std::vector<TraceRound> rounds;
};

struct Estimate {
  double mean = 0.0;
  double half_width = 0.0;  // 95% normal-approximation interval
};

struct SimSummary {
  int reps = 0;
  int horizon = 0;
  Estimate gamma_a, gamma_b, u_a, u_b;

  std::string to_json() const;
};

struct SimResult {
  std::vector<SimTrace> traces;
  SimSummary summary;
};

// Monte Carlo play of a profile for `horizon` rounds (0..horizon-1), `reps`
// independent replications. Discounted configs weight round t by beta^t in
// the summary statistics. Reproducible given the seed.
SimResult simulate(const GameConfig& config, const Strategy& a,
                   const Strategy& b, int horizon, int reps, uint64_t seed);

struct ConcentrationReport {
  int k = 0;
  double epsilon = 0.0;
  int reps = 0;
  double empirical = 0.0;  // frequency of |w_k - k*theta| > k*eps and R >= k
  double bound = 0.0;      // 2*exp(-2*k*eps^2)
  double std_error = 0.0;
  bool pass = false;       // empirical <= bound + 3*SE

  std::string to_json() const;
};

// Empirical check of the risky-pull concentration bound. The exploration
// strategy faces an always-left opponent; each replication runs until the
// k-th risky pull or the horizon cap (default 4k), whichever is first.
// Replications with fewer than k risky pulls count as non-events.
ConcentrationReport concentration_check(const Prior& prior,
                                        const Strategy& exploration, int k,
                                        double epsilon, int reps,
                                        uint64_t seed, double p_safe = 0.5,
                                        int horizon_cap = 0);

struct SettleReport {
  double fraction = 0.0;  // traces with both players on one arm all window
  double half_width = 0.0;

  std::string to_json() const;
};

// Fraction of traces where both players play one identical arm throughout
// the final `window` rounds. An illustration only; settling is a property of
// infinite play.
SettleReport settle_diagnostic(const std::vector<SimTrace>& traces,
                               int window);

// CSV export: t, action_A, reward_A, action_B, reward_B, theta, rep
std::string traces_csv(const std::vector<SimTrace>& traces);

}  // namespace onearm

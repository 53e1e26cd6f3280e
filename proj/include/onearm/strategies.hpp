#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "onearm/game.hpp"
#include "onearm/prior.hpp"

namespace onearm {

// A constructed strategy together with its parameters, addressable by name.
struct NamedStrategy {
  StrategyPtr strategy;
  std::string name;
  std::map<std::string, double> params;
};

NamedStrategy left_forever();
NamedStrategy right_forever();

// Fixed action sequence for the opening rounds, then the tail arm forever.
NamedStrategy pattern_strategy(std::vector<Arm> opening, Arm tail = Arm::Left);

// Stay left until the opponent first pulls the risky arm in some round k,
// stay left once more in round k+1, then mirror the opponent's previous
// action.
NamedStrategy copy_strategy();

// Open on the risky arm, then let the observed bit pick round 1 (0 -> left,
// 1 -> right); later rounds repeat the round-1 action. Histories that opened
// left fall back to the safe arm.
NamedStrategy reveal_strategy();

// Round-1 mixture: with probability 1/2 play right regardless, with
// probability 1/2 follow the revealing rule.
NamedStrategy mix_reveal_right();

// Single-player index policy: pull the risky arm while its index exceeds the
// threshold. With explore_at_ties the comparison is >= (within 1e-9), which
// matches the indifference construction of starting at the risky arm.
NamedStrategy gittins_strategy(const Prior& prior, double beta,
                               double threshold, bool explore_at_ties = false,
                               double index_tol = 1e-6);

// Index policy guarded by a grim trigger: if the opponent's action ever
// differs from ours, play left forever from the next round.
NamedStrategy grim_trigger_gittins(const Prior& prior, double p, double beta,
                                   double index_tol = 1e-6);

// Cooperative oscillation (lambda > 0): the second player visits the safe arm
// in rounds 0, k, 2k, ... and the risky arm otherwise; the first player stays
// right and punishes any deviation with left forever.
std::pair<NamedStrategy, NamedStrategy> oscillating_coop(int k);

// Competitive oscillation (lambda < -1): the second player plays right in
// rounds 0, k, 2k, ... and left otherwise; the first player stays left; any
// deviation by either is punished with right forever.
std::pair<NamedStrategy, NamedStrategy> oscillating_comp(int k);

// Wraps a base strategy: follow it before `round`, then play `arm` forever.
NamedStrategy deviate_to_arm(const NamedStrategy& base, int round, Arm arm);

// Stay left until the opponent first explores at round k; from round k+1 on,
// play the solver's maximin continuation of the zero-sum subgame whose round
// k is forced to (opponent right, self left). Past the solved depth: left.
NamedStrategy trigger_zero_sum(const GameConfig& config, int solve_rounds = 4);

struct OscillationCheck {
  double lambda = 0.0;
  double beta = 0.0;
  int k = 0;
  double m = 0.0;
  double p = 0.0;
  double u_main = 0.0;       // oscillator's equilibrium-path utility
  double u_deviation = 0.0;  // utility cap of the best fixed-arm deviation
  bool is_nash = false;
  std::string reason;
};

// Closed-form equilibrium test for the cooperative oscillation with a
// point-mass risky arm of mean m > p.
OscillationCheck coop_osc_is_nash(double m, double p, double beta,
                                  double lambda, int k);

// Closed-form equilibrium test for the competitive oscillation; requires
// lambda < -1 and is reachable only when |lambda|*beta > 1.
OscillationCheck comp_osc_is_nash(double m, double p, double beta,
                                  double lambda, int k);

// CLI strategy specs: left, right, copy, reveal, mix-rs, gittins, grim,
// osc-coop:k=5, osc-comp:k=4, trigger-zs. The oscillating pairs resolve by
// seat: player A gets the stayer, player B the oscillator.
NamedStrategy parse_strategy(const std::string& spec, const GameConfig& config,
                             PlayerId seat);

}  // namespace onearm

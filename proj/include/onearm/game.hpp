#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "onearm/prior.hpp"

namespace onearm {

enum class Arm : int { Left = 0, Right = 1 };

inline char arm_char(Arm a) { return a == Arm::Left ? 'L' : 'R'; }

enum class PlayerId : int { A = 0, B = 1 };

enum class HorizonMode { Discounted, Finite };

// Full game instance: safe-arm probability p, prior over the risky arm,
// cooperation weight lambda, and either a discounted horizon truncated after
// round H or an exact finite horizon of rounds 0..T.
struct GameConfig {
  double p = 0.5;
  Prior prior = Prior::uniform();
  double lambda = 0.0;
  HorizonMode mode = HorizonMode::Discounted;
  double beta = 0.9;
  int last_round = 0;  // H (discounted) or T (finite); rounds run 0..last_round
  long node_budget = 10'000'000;

  static GameConfig discounted(double p, Prior prior, double beta, int h,
                               double lambda = 0.0);
  static GameConfig finite(double p, Prior prior, int t, double lambda = 0.0);

  int rounds() const { return last_round + 1; }
  double discount(int t) const;
  // covers the tail beyond the truncation for utilities with weight lambda
  double tail_bound() const;
  void validate_exact() const;  // exact evaluation needs a finite prior
};

// What one player has seen: own actions, own reward bits (from either arm),
// and the opponent's actions, all of length t.
struct History {
  std::vector<Arm> own_actions;
  std::vector<uint8_t> own_rewards;
  std::vector<Arm> opp_actions;

  int t() const { return static_cast<int>(own_actions.size()); }
  void push(Arm own, uint8_t reward, Arm opp);
  void pop();
};

// Optional finite description of a strategy as a state machine over rounds.
// States are small integers; step consumes what the player observed during a
// round. Must agree with the owning strategy's decision rule.
class Fsm {
 public:
  virtual ~Fsm() = default;
  virtual int initial_state() const = 0;
  virtual double prob_right(int state, int t) const = 0;
  virtual int next_state(int state, int t, Arm own, uint8_t own_reward,
                         Arm opp) const = 0;
};

// Behavioral decision rule: probability of pulling the risky arm given the
// history. Deterministic given the history; randomness is externalized.
class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual double prob_right(const History& h) const = 0;
  virtual std::string name() const = 0;
  // Strategies that never read their own reward bits let exact evaluation
  // skip branching on them.
  virtual bool uses_own_rewards() const { return true; }
  virtual const Fsm* fsm() const { return nullptr; }
};

using StrategyPtr = std::shared_ptr<const Strategy>;

// Strategy driven entirely by its Fsm; prob_right replays the history.
class FsmStrategy : public Strategy {
 public:
  double prob_right(const History& h) const final;
  const Fsm* fsm() const final { return this_fsm(); }

 protected:
  virtual const Fsm* this_fsm() const = 0;
};

struct EvalResult {
  double gamma_a = 0.0;
  double gamma_b = 0.0;
  double u_a = 0.0;
  double u_b = 0.0;
  double error_bound = 0.0;

  std::string to_json(const GameConfig& config) const;
};

// Exact expected rewards and utilities by enumeration over nature's atoms,
// action branches, and reward branches. Profiles where both strategies carry
// an Fsm are folded over joint machine states; otherwise the joint history
// tree is walked directly, guarded by the node budget.
EvalResult evaluate_profile(const GameConfig& config, const Strategy& a,
                            const Strategy& b);

// Distribution of the first round in which either player pulls the risky arm.
struct FirstExploration {
  std::vector<double> by_round;  // index t = rounds 0..last_round
  double never = 0.0;
};

FirstExploration first_exploration_stats(const GameConfig& config,
                                         const Strategy& a, const Strategy& b);

}  // namespace onearm

#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "onearm/game.hpp"

namespace onearm {

// Opening-move constraint for one player in one round. Reveal pins the round
// to the reward bit observed in the previous round (which must itself be a
// forced risky pull).
struct ForcedMove {
  PlayerId player = PlayerId::A;
  int round = 0;
  enum class Kind { Left, Right, Reveal } kind = Kind::Left;
};

// Truncated zero-sum game in sequence form. Information sets cover what each
// player saw: own actions, own risky reward bits, and the opponent's actions.
// Safe-arm reward bits are payoff-irrelevant private noise and are omitted:
// behavioral mixing already provides the same randomization, so the value is
// unchanged.
struct SequenceFormLP {
  struct InfoSet {
    int id = 0;
    int round = 0;
    int parent_seq = 0;                   // sequence leading into this set
    std::array<int, 2> action_seq{-1, -1};  // by Arm; -1 when disallowed
    // observation key: (bit or -1, opp action) -> child info set id
    std::map<std::pair<int, int>, int> child[2];
  };

  std::array<std::vector<InfoSet>, 2> infosets;
  std::array<int, 2> num_seqs{1, 1};  // sequence 0 is the empty sequence
  // chance-weighted discounted net payoff (player A minus player B)
  std::map<std::pair<int, int>, double> payoff;
  int rounds = 0;

  std::string dump_tableau() const;
};

// Builds the sequence form of the truncated game with the given opening
// constraints. Rounds beyond round_budget are refused.
SequenceFormLP build_sequence_form(const GameConfig& config,
                                   const std::vector<ForcedMove>& forced = {},
                                   int round_budget = 4);

struct GameValue {
  double value = 0.0;            // maximin net payoff for player A
  double certificate_gap = 0.0;  // |primal - dual|
  std::vector<double> plan_a;    // realization plan per sequence
  std::vector<double> plan_b;

  std::string to_json() const;
};

// Solves both players' sequence-form LPs and certifies the pair.
GameValue solve(const SequenceFormLP& lp, double tol = 1e-9);

// Exact rational arithmetic; meant for small instances.
GameValue solve_exact(const SequenceFormLP& lp);

// 2x2 one-shot matrix game in the same encoding (row player maximizes).
SequenceFormLP matrix_game_lp(const std::array<std::array<double, 2>, 2>& m);

// Behavioral strategy induced by a realization plan; unreached information
// sets play Left.
StrategyPtr realization_plan_strategy(const SequenceFormLP& lp, PlayerId who,
                                      std::vector<double> plan,
                                      std::string name);

}  // namespace onearm

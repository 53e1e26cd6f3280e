#pragma once

#include "onearm/game.hpp"
#include "onearm/gittins.hpp"

namespace onearm {

struct BestResponseResult {
  StrategyPtr strategy;
  ValueResult value;  // responder's utility on the truncated game
};

// Exact best response on the truncated game by backward induction over the
// responder's belief states: joint distributions over (nature's atom, the
// opponent's machine state) given the responder's observations. The opponent
// must expose a finite description (Strategy::fsm). Ties prefer the safe arm.
BestResponseResult best_response(const GameConfig& config, StrategyPtr opponent,
                                 PlayerId responder);

}  // namespace onearm

#include "onearm/best_response.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace onearm {

namespace {

// Belief over (atom index, opponent machine state), kept sorted for
// canonical hashing. Probabilities are quantized to 1e-12 in the key.
using Belief = std::vector<std::pair<std::pair<int, int>, double>>;

struct KeyHash {
  std::size_t operator()(const std::vector<int64_t>& k) const {
    std::size_t h = 1469598103934665603ull;
    for (int64_t v : k) {
      h ^= static_cast<std::size_t>(v);
      h *= 1099511628211ull;
    }
    return h;
  }
};

std::vector<int64_t> belief_key(int t, const Belief& b) {
  std::vector<int64_t> key;
  key.reserve(1 + 3 * b.size());
  key.push_back(t);
  for (const auto& [jq, pr] : b) {
    key.push_back(jq.first);
    key.push_back(jq.second);
    key.push_back(static_cast<int64_t>(std::llround(pr * 1e12)));
  }
  return key;
}

class BeliefSolver {
 public:
  BeliefSolver(GameConfig config, StrategyPtr opponent)
      : cfg_(std::move(config)), opponent_(std::move(opponent)) {
    cfg_.validate_exact();
    opp_fsm_ = opponent_->fsm();
    if (!opp_fsm_)
      throw DomainError(
          "best response needs an opponent with a finite decision table");
    const auto& atoms = cfg_.prior.finite_support().atoms;
    thetas_.reserve(atoms.size());
    for (const Atom& a : atoms) thetas_.push_back(a.x);
    for (std::size_t j = 0; j < atoms.size(); ++j)
      root_.push_back({{static_cast<int>(j), opp_fsm_->initial_state()},
                       atoms[j].w});
    step_ = cfg_.mode == HorizonMode::Discounted ? cfg_.beta : 1.0;
  }

  const GameConfig& config() const { return cfg_; }
  const Belief& root() const { return root_; }

  double value(int t, const Belief& b) {
    if (t >= cfg_.rounds()) return 0.0;
    const auto key = belief_key(t, b);
    if (const auto it = memo_.find(key); it != memo_.end())
      return it->second.first;
    if (static_cast<long>(memo_.size()) > cfg_.node_budget)
      throw BudgetError("best response exceeded the node budget");
    double best = 0.0;
    int best_arm = 0;
    for (int a = 0; a < 2; ++a) {
      const double v = action_value(t, b, static_cast<Arm>(a));
      if (a == 0 || v > best + 1e-12) {
        best = v;
        best_arm = a;
      }
    }
    memo_[key] = {best, best_arm};
    return best;
  }

  Arm action(int t, const Belief& b) {
    value(t, b);
    return static_cast<Arm>(memo_.at(belief_key(t, b)).second);
  }

  // Posterior after one observed round: own action a with risky bit r (only
  // meaningful when a is risky; safe bits are independent noise), opponent
  // action o. Returns total mass through `weight`.
  Belief child(const Belief& b, int t, Arm a, int r, Arm o,
               double* weight) const {
    std::map<std::pair<int, int>, double> next;
    for (const auto& [jq, pr] : b) {
      const auto [j, q] = jq;
      const double po = opp_fsm_->prob_right(q, t);
      const double wo = o == Arm::Right ? po : 1.0 - po;
      if (wo == 0.0) continue;
      double wr = 1.0;
      if (a == Arm::Right) wr = r ? thetas_[j] : 1.0 - thetas_[j];
      if (wr == 0.0) continue;
      // marginalize the opponent's private bit
      const double mean_o = o == Arm::Left ? cfg_.p : thetas_[j];
      for (int ro = 0; ro <= 1; ++ro) {
        const double wro = ro ? mean_o : 1.0 - mean_o;
        if (wro == 0.0) continue;
        const int q2 =
            opp_fsm_->next_state(q, t, o, static_cast<uint8_t>(ro), a);
        next[{j, q2}] += pr * wo * wr * wro;
      }
    }
    Belief out(next.begin(), next.end());
    double z = 0.0;
    for (const auto& [jq, pr] : out) z += pr;
    *weight = z;
    if (z > 0.0)
      for (auto& [jq, pr] : out) pr /= z;
    return out;
  }

 private:
  double action_value(int t, const Belief& b, Arm a) {
    double own_mean = cfg_.p;
    if (a == Arm::Right) {
      own_mean = 0.0;
      for (const auto& [jq, pr] : b) own_mean += pr * thetas_[jq.first];
    }
    double opp_mean = 0.0;
    for (const auto& [jq, pr] : b) {
      const double po = opp_fsm_->prob_right(jq.second, t);
      opp_mean += pr * (po * thetas_[jq.first] + (1.0 - po) * cfg_.p);
    }
    double v = own_mean + cfg_.lambda * opp_mean;
    // observation branches: own risky bit (safe bits carry no information
    // about the belief) and the opponent's action
    for (int r = a == Arm::Right ? 0 : -1; r <= (a == Arm::Right ? 1 : -1);
         ++r) {
      for (int o = 0; o < 2; ++o) {
        double z = 0.0;
        Belief nb = child(b, t, a, r, static_cast<Arm>(o), &z);
        if (z == 0.0) continue;
        v += step_ * z * value(t + 1, nb);
      }
    }
    return v;
  }

  GameConfig cfg_;
  StrategyPtr opponent_;
  const Fsm* opp_fsm_ = nullptr;
  std::vector<double> thetas_;
  Belief root_;
  double step_ = 1.0;
  std::unordered_map<std::vector<int64_t>, std::pair<double, int>, KeyHash>
      memo_;
};

// Exposes the solved policy as a strategy. The machine states intern
// (round, belief) pairs on demand.
class BrFsm final : public Fsm {
 public:
  explicit BrFsm(std::shared_ptr<BeliefSolver> solver)
      : solver_(std::move(solver)) {
    dead_ = intern(solver_->config().rounds(), Belief{});
    initial_ = intern(0, solver_->root());
  }

  int initial_state() const override { return initial_; }

  double prob_right(int state, int t) const override {
    const auto& [st, b] = entries_[state];
    if (st >= solver_->config().rounds() || state == dead_) return 0.0;
    return solver_->action(st, b) == Arm::Right ? 1.0 : 0.0;
  }

  int next_state(int state, int t, Arm own, uint8_t r, Arm opp) const override {
    const auto& [st, b] = entries_[state];
    if (st + 1 >= solver_->config().rounds() || state == dead_) return dead_;
    double z = 0.0;
    Belief nb = solver_->child(b, st, own, r, opp, &z);
    if (z == 0.0) return dead_;  // observation of probability zero
    return intern(st + 1, nb);
  }

 private:
  int intern(int t, const Belief& b) const {
    const auto key = belief_key(t, b);
    const auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    const int id = static_cast<int>(entries_.size());
    ids_.emplace(key, id);
    entries_.push_back({t, b});
    return id;
  }

  std::shared_ptr<BeliefSolver> solver_;
  mutable std::unordered_map<std::vector<int64_t>, int, KeyHash> ids_;
  mutable std::vector<std::pair<int, Belief>> entries_;
  int dead_ = 0;
  int initial_ = 0;
};

class BrStrategy final : public Strategy {
 public:
  BrStrategy(std::shared_ptr<BeliefSolver> solver, std::string name)
      : solver_(std::move(solver)),
        fsm_(std::make_unique<BrFsm>(solver_)),
        name_(std::move(name)) {}

  double prob_right(const History& h) const override {
    if (h.t() >= solver_->config().rounds()) return 0.0;
    Belief b = solver_->root();
    for (int i = 0; i < h.t(); ++i) {
      double z = 0.0;
      b = solver_->child(b, i, h.own_actions[i], h.own_rewards[i],
                         h.opp_actions[i], &z);
      if (z == 0.0) return 0.0;
    }
    return solver_->action(h.t(), b) == Arm::Right ? 1.0 : 0.0;
  }

  std::string name() const override { return name_; }
  const Fsm* fsm() const override { return fsm_.get(); }

 private:
  std::shared_ptr<BeliefSolver> solver_;
  std::unique_ptr<BrFsm> fsm_;
  std::string name_;
};

}  // namespace

BestResponseResult best_response(const GameConfig& config, StrategyPtr opponent,
                                 PlayerId responder) {
  // The solver is written from the responder's seat; the caller's player id
  // only matters for bookkeeping since the game is symmetric in roles.
  auto solver = std::make_shared<BeliefSolver>(config, std::move(opponent));
  BestResponseResult out;
  out.value.value = solver->value(0, solver->root());
  out.value.error_bound = config.tail_bound();
  out.value.depth_used = config.rounds();
  const char* tag = responder == PlayerId::A ? "best-response:A" : "best-response:B";
  out.strategy = std::make_shared<BrStrategy>(solver, tag);
  return out;
}

}  // namespace onearm

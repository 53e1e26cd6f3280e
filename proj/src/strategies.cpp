#include "onearm/strategies.hpp"

#include <cmath>
#include <memory>

#include "onearm/gittins.hpp"
#include "onearm/seqform.hpp"

namespace onearm {

namespace {

// ---- fixed patterns ---------------------------------------------------------

class PatternFsm final : public Fsm {
 public:
  PatternFsm(std::vector<Arm> opening, Arm tail)
      : opening_(std::move(opening)), tail_(tail) {}
  int initial_state() const override { return 0; }
  double prob_right(int, int t) const override {
    const Arm a = t < static_cast<int>(opening_.size())
                      ? opening_[t]
                      : tail_;
    return a == Arm::Right ? 1.0 : 0.0;
  }
  int next_state(int, int, Arm, uint8_t, Arm) const override { return 0; }

 private:
  std::vector<Arm> opening_;
  Arm tail_;
};

class PatternStrategy final : public FsmStrategy {
 public:
  PatternStrategy(std::vector<Arm> opening, Arm tail, std::string name)
      : fsm_(std::move(opening), tail), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  bool uses_own_rewards() const override { return false; }

 protected:
  const Fsm* this_fsm() const override { return &fsm_; }

 private:
  PatternFsm fsm_;
  std::string name_;
};

// ---- copy -------------------------------------------------------------------

// states: 0 waiting, 1 grace round after the first risky pull, 2/3 mirroring
// the opponent's last action (left/right)
class CopyFsm final : public Fsm {
 public:
  int initial_state() const override { return 0; }
  double prob_right(int q, int) const override { return q == 3 ? 1.0 : 0.0; }
  int next_state(int q, int, Arm, uint8_t, Arm opp) const override {
    switch (q) {
      case 0:
        return opp == Arm::Right ? 1 : 0;
      case 1:
      case 2:
      case 3:
        return opp == Arm::Right ? 3 : 2;
    }
    return q;
  }
};

class CopyStrategy final : public FsmStrategy {
 public:
  std::string name() const override { return "copy"; }
  bool uses_own_rewards() const override { return false; }

 protected:
  const Fsm* this_fsm() const override { return &fsm_; }

 private:
  CopyFsm fsm_;
};

// ---- reveal and its round-1 mixture ----------------------------------------

// states: 0 opening, 1 saw a success, 2 saw a failure, 3 tail left,
// 4 tail right
class RevealFsm final : public Fsm {
 public:
  explicit RevealFsm(double mix_right) : mix_right_(mix_right) {}
  int initial_state() const override { return 0; }
  double prob_right(int q, int) const override {
    switch (q) {
      case 0:
        return 1.0;
      case 1:
        return 1.0;
      case 2:
        return mix_right_;  // 0 for the pure rule, 1/2 for the mixture
      case 4:
        return 1.0;
    }
    return 0.0;
  }
  int next_state(int q, int, Arm own, uint8_t r, Arm) const override {
    if (q == 0) {
      if (own != Arm::Right) return 3;  // off the intended opening
      return r ? 1 : 2;
    }
    if (q == 1 || q == 2) return own == Arm::Right ? 4 : 3;
    return q;
  }

 private:
  double mix_right_;
};

class RevealStrategy final : public FsmStrategy {
 public:
  RevealStrategy(double mix_right, std::string name)
      : fsm_(mix_right), name_(std::move(name)) {}
  std::string name() const override { return name_; }

 protected:
  const Fsm* this_fsm() const override { return &fsm_; }

 private:
  RevealFsm fsm_;
  std::string name_;
};

// ---- index policies ---------------------------------------------------------

// Index of the posterior after s successes and f failures, with point masses
// short-circuited to their mean.
class IndexCache {
 public:
  IndexCache(Prior prior, double beta, double tol)
      : prior_(std::move(prior)), beta_(beta), tol_(tol) {}

  double index(int s, int f) const {
    const auto key = std::pair{s, f};
    if (const auto it = cache_.find(key); it != cache_.end())
      return it->second;
    Prior post = prior_;
    for (int i = 0; i < s; ++i) post = update(post, Outcome::Success);
    for (int i = 0; i < f; ++i) post = update(post, Outcome::Failure);
    const Moments mom = moments(post);
    const double g = mom.w <= 1e-14
                         ? mom.m
                         : gittins_discounted(post, beta_, tol_).index;
    cache_[key] = g;
    return g;
  }

 private:
  Prior prior_;
  double beta_;
  double tol_;
  mutable std::map<std::pair<int, int>, double> cache_;
};

// states encode (s, f) pairs; ids are interned on demand
class GittinsFsm final : public Fsm {
 public:
  GittinsFsm(Prior prior, double beta, double threshold, bool ties,
             double tol)
      : cache_(std::move(prior), beta, tol),
        threshold_(threshold),
        ties_(ties) {
    intern(0, 0);
  }

  int initial_state() const override { return 0; }
  double prob_right(int q, int) const override {
    const auto [s, f] = states_[q];
    const double g = cache_.index(s, f);
    const bool right = ties_ ? g >= threshold_ - 1e-9 : g > threshold_;
    return right ? 1.0 : 0.0;
  }
  int next_state(int q, int, Arm own, uint8_t r, Arm) const override {
    if (own != Arm::Right) return q;
    auto [s, f] = states_[q];
    return intern(s + (r ? 1 : 0), f + (r ? 0 : 1));
  }

 private:
  int intern(int s, int f) const {
    const auto key = std::pair{s, f};
    const auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    const int id = static_cast<int>(states_.size());
    ids_.emplace(key, id);
    states_.push_back(key);
    return id;
  }

  IndexCache cache_;
  double threshold_;
  bool ties_;
  mutable std::map<std::pair<int, int>, int> ids_;
  mutable std::vector<std::pair<int, int>> states_;
};

class GittinsStrategy final : public FsmStrategy {
 public:
  GittinsStrategy(Prior prior, double beta, double threshold, bool ties,
                  double tol, std::string name)
      : fsm_(std::move(prior), beta, threshold, ties, tol),
        name_(std::move(name)) {}
  std::string name() const override { return name_; }

 protected:
  const Fsm* this_fsm() const override { return &fsm_; }

 private:
  GittinsFsm fsm_;
  std::string name_;
};

// Same index policy plus the trigger: opponent action != our action last
// round means left forever. State ids are 2*base + triggered.
class GrimFsm final : public Fsm {
 public:
  GrimFsm(Prior prior, double p, double beta, double tol)
      : base_(std::move(prior), beta, p, /*ties=*/false, tol) {}
  int initial_state() const override { return 0; }
  double prob_right(int q, int t) const override {
    if (q & 1) return 0.0;
    return base_.prob_right(q >> 1, t);
  }
  int next_state(int q, int t, Arm own, uint8_t r, Arm opp) const override {
    const int trig = (q & 1) || own != opp;
    const int nb = base_.next_state(q >> 1, t, own, r, opp);
    return nb * 2 + trig;
  }

 private:
  GittinsFsm base_;
};

class GrimStrategy final : public FsmStrategy {
 public:
  GrimStrategy(Prior prior, double p, double beta, double tol)
      : fsm_(std::move(prior), p, beta, tol) {}
  std::string name() const override { return "grim"; }

 protected:
  const Fsm* this_fsm() const override { return &fsm_; }

 private:
  GrimFsm fsm_;
};

// ---- oscillations -----------------------------------------------------------

// Oscillator pattern: the special arm in rounds 0, k, 2k, ...; the other arm
// in between.
Arm osc_arm(int t, int k, Arm on_multiple, Arm otherwise) {
  return t % k == 0 ? on_multiple : otherwise;
}

// Unconditional oscillation, single state.
class OscPatternFsm final : public Fsm {
 public:
  OscPatternFsm(int k, Arm on, Arm off) : k_(k), on_(on), off_(off) {}
  int initial_state() const override { return 0; }
  double prob_right(int, int t) const override {
    return osc_arm(t, k_, on_, off_) == Arm::Right ? 1.0 : 0.0;
  }
  int next_state(int, int, Arm, uint8_t, Arm) const override { return 0; }

 private:
  int k_;
  Arm on_, off_;
};

// states: 0 on the main line, 1 punishing
class OscWatcherFsm final : public Fsm {
 public:
  // Plays `main` until the opponent leaves the pattern, then `punish`.
  OscWatcherFsm(int k, Arm pattern_on_multiple, Arm pattern_otherwise,
                Arm main, Arm punish)
      : k_(k),
        on_(pattern_on_multiple),
        off_(pattern_otherwise),
        main_(main),
        punish_(punish) {}
  int initial_state() const override { return 0; }
  double prob_right(int q, int) const override {
    return (q == 0 ? main_ : punish_) == Arm::Right ? 1.0 : 0.0;
  }
  int next_state(int q, int t, Arm, uint8_t, Arm opp) const override {
    if (q == 1) return 1;
    return opp == osc_arm(t, k_, on_, off_) ? 0 : 1;
  }

 private:
  int k_;
  Arm on_, off_, main_, punish_;
};

// states: 0 following the pattern, 1 punishing
class OscFollowerFsm final : public Fsm {
 public:
  // Follows the pattern until the opponent deviates from `expected_opp`.
  OscFollowerFsm(int k, Arm on, Arm off, Arm expected_opp, Arm punish)
      : k_(k), on_(on), off_(off), expected_(expected_opp), punish_(punish) {}
  int initial_state() const override { return 0; }
  double prob_right(int q, int t) const override {
    const Arm a = q == 0 ? osc_arm(t, k_, on_, off_) : punish_;
    return a == Arm::Right ? 1.0 : 0.0;
  }
  int next_state(int q, int, Arm, uint8_t, Arm opp) const override {
    if (q == 1) return 1;
    return opp == expected_ ? 0 : 1;
  }

 private:
  int k_;
  Arm on_, off_, expected_, punish_;
};

template <typename F>
class FsmHolder final : public FsmStrategy {
 public:
  FsmHolder(F fsm, std::string name, bool reads_rewards)
      : fsm_(std::move(fsm)), name_(std::move(name)), reads_(reads_rewards) {}
  std::string name() const override { return name_; }
  bool uses_own_rewards() const override { return reads_; }

 protected:
  const Fsm* this_fsm() const override { return &fsm_; }

 private:
  F fsm_;
  std::string name_;
  bool reads_;
};

// ---- deviation wrapper ------------------------------------------------------

class DeviateFsm final : public Fsm {
 public:
  DeviateFsm(const NamedStrategy& base, int round, Arm arm)
      : base_(base.strategy), round_(round), arm_(arm) {
    if (!base_->fsm())
      throw DomainError("deviation wrapper needs a finite base strategy");
  }
  int initial_state() const override { return base_->fsm()->initial_state(); }
  double prob_right(int q, int t) const override {
    if (t >= round_) return arm_ == Arm::Right ? 1.0 : 0.0;
    return base_->fsm()->prob_right(q, t);
  }
  int next_state(int q, int t, Arm own, uint8_t r, Arm opp) const override {
    if (t + 1 >= round_) return q;  // frozen; play is fixed from here on
    return base_->fsm()->next_state(q, t, own, r, opp);
  }

 private:
  StrategyPtr base_;
  int round_;
  Arm arm_;
};

// ---- zero-sum trigger -------------------------------------------------------

// states: 0 waiting; >= 1 are (info set id + 1) in the solved subgame;
// -1 past the solved depth (left forever)
class TriggerZsFsm final : public Fsm {
 public:
  TriggerZsFsm(const GameConfig& config, int solve_rounds) {
    GameConfig sub = config;
    sub.lambda = -1.0;
    sub.last_round = solve_rounds - 1;
    std::vector<ForcedMove> forced{
        {PlayerId::A, 0, ForcedMove::Kind::Left},
        {PlayerId::B, 0, ForcedMove::Kind::Right}};
    lp_ = build_sequence_form(sub, forced, solve_rounds);
    value_ = onearm::solve(lp_);
    // entry: own round 0 was the forced safe pull (no bit), opponent right
    const auto& root = lp_.infosets[0][0];
    entry_ = lp_.rounds > 1
                 ? root.child[static_cast<int>(Arm::Left)].at(
                       {-1, static_cast<int>(Arm::Right)})
                 : -2;
  }

  const GameValue& value() const { return value_; }

  int initial_state() const override { return 0; }

  double prob_right(int q, int) const override {
    if (q <= 0) return 0.0;
    const auto& n = lp_.infosets[0][q - 1];
    const double xl = n.action_seq[0] >= 0 ? value_.plan_a[n.action_seq[0]] : 0;
    const double xr = n.action_seq[1] >= 0 ? value_.plan_a[n.action_seq[1]] : 0;
    if (xl + xr <= 1e-12) return 0.0;
    return xr / (xl + xr);
  }

  int next_state(int q, int, Arm own, uint8_t r, Arm opp) const override {
    if (q == 0) return opp == Arm::Right ? (entry_ == -2 ? -1 : entry_ + 1) : 0;
    if (q < 0) return -1;
    const auto& n = lp_.infosets[0][q - 1];
    if (n.round + 1 >= lp_.rounds) return -1;
    const int a = static_cast<int>(own);
    const int bit = own == Arm::Right ? r : -1;
    const auto it = n.child[a].find({bit, static_cast<int>(opp)});
    if (it == n.child[a].end()) return -1;  // action off the solved tree
    return it->second + 1;
  }

 private:
  SequenceFormLP lp_;
  GameValue value_;
  int entry_ = -2;
};

class TriggerZsStrategy final : public FsmStrategy {
 public:
  TriggerZsStrategy(const GameConfig& config, int solve_rounds)
      : fsm_(config, solve_rounds) {}
  std::string name() const override { return "trigger-zs"; }

 protected:
  const Fsm* this_fsm() const override { return &fsm_; }

 private:
  TriggerZsFsm fsm_;
};

}  // namespace

NamedStrategy left_forever() {
  return {std::make_shared<PatternStrategy>(std::vector<Arm>{}, Arm::Left,
                                            "left"),
          "left",
          {}};
}

NamedStrategy right_forever() {
  return {std::make_shared<PatternStrategy>(std::vector<Arm>{}, Arm::Right,
                                            "right"),
          "right",
          {}};
}

NamedStrategy pattern_strategy(std::vector<Arm> opening, Arm tail) {
  std::string name = "pattern:";
  for (Arm a : opening) name += arm_char(a);
  name += '+';
  name += arm_char(tail);
  return {std::make_shared<PatternStrategy>(std::move(opening), tail, name),
          name,
          {}};
}

NamedStrategy copy_strategy() {
  return {std::make_shared<CopyStrategy>(), "copy", {{"delay", 1.0}}};
}

NamedStrategy reveal_strategy() {
  return {std::make_shared<RevealStrategy>(0.0, "reveal"), "reveal", {}};
}

NamedStrategy mix_reveal_right() {
  return {std::make_shared<RevealStrategy>(0.5, "mix-rs"), "mix-rs", {}};
}

NamedStrategy gittins_strategy(const Prior& prior, double beta,
                               double threshold, bool explore_at_ties,
                               double index_tol) {
  auto s = std::make_shared<GittinsStrategy>(prior, beta, threshold,
                                             explore_at_ties, index_tol,
                                             "gittins");
  return {s, "gittins", {{"threshold", threshold}}};
}

NamedStrategy grim_trigger_gittins(const Prior& prior, double p, double beta,
                                   double index_tol) {
  return {std::make_shared<GrimStrategy>(prior, p, beta, index_tol),
          "grim",
          {{"p", p}}};
}

std::pair<NamedStrategy, NamedStrategy> oscillating_coop(int k) {
  if (k < 1) throw DomainError("oscillation period k must be at least 1");
  // stayer: right on the main line, left forever after any deviation from
  // the oscillator's pattern (left on multiples of k)
  auto alice = std::make_shared<FsmHolder<OscWatcherFsm>>(
      OscWatcherFsm(k, Arm::Left, Arm::Right, Arm::Right, Arm::Left),
      "osc-coop:A", false);
  // oscillator: unconditional
  auto bob = std::make_shared<FsmHolder<OscPatternFsm>>(
      OscPatternFsm(k, Arm::Left, Arm::Right), "osc-coop:B", false);
  const double kk = k;
  return {{alice, "osc-coop:A", {{"k", kk}}}, {bob, "osc-coop:B", {{"k", kk}}}};
}

std::pair<NamedStrategy, NamedStrategy> oscillating_comp(int k) {
  if (k < 1) throw DomainError("oscillation period k must be at least 1");
  // stayer: left while the oscillator follows (right on multiples of k),
  // right forever otherwise
  auto alice = std::make_shared<FsmHolder<OscWatcherFsm>>(
      OscWatcherFsm(k, Arm::Right, Arm::Left, Arm::Left, Arm::Right),
      "osc-comp:A", false);
  // oscillator: follows the pattern while the stayer plays left, right
  // forever otherwise
  auto bob = std::make_shared<FsmHolder<OscFollowerFsm>>(
      OscFollowerFsm(k, Arm::Right, Arm::Left, Arm::Left, Arm::Right),
      "osc-comp:B", false);
  const double kk = k;
  return {{alice, "osc-comp:A", {{"k", kk}}}, {bob, "osc-comp:B", {{"k", kk}}}};
}

NamedStrategy deviate_to_arm(const NamedStrategy& base, int round, Arm arm) {
  if (round < 0) throw DomainError("deviation round must be nonnegative");
  auto fsm = DeviateFsm(base, round, arm);
  const std::string name = base.name + ":dev@" + std::to_string(round) +
                           (arm == Arm::Right ? "R" : "L");
  auto s = std::make_shared<FsmHolder<DeviateFsm>>(std::move(fsm), name,
                                                   base.strategy->uses_own_rewards());
  NamedStrategy out{s, name, base.params};
  out.params["dev_round"] = round;
  return out;
}

NamedStrategy trigger_zero_sum(const GameConfig& config, int solve_rounds) {
  if (solve_rounds < 1)
    throw DomainError("trigger strategy needs at least one solved round");
  return {std::make_shared<TriggerZsStrategy>(config, solve_rounds),
          "trigger-zs",
          {{"solve_rounds", static_cast<double>(solve_rounds)}}};
}

OscillationCheck coop_osc_is_nash(double m, double p, double beta,
                                  double lambda, int k) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0,1)");
  if (!(lambda > 0.0)) throw DomainError("the cooperative check needs lambda > 0");
  if (!(m > p)) throw DomainError("the construction assumes m > p");
  if (!(p >= 0.0 && m <= 1.0)) throw DomainError("need 0 <= p < m <= 1");
  if (k < 1) throw DomainError("oscillation period k must be at least 1");
  OscillationCheck out;
  out.lambda = lambda;
  out.beta = beta;
  out.k = k;
  out.m = m;
  out.p = p;
  const double bk = std::pow(beta, k);
  out.u_main = (1.0 + lambda) * m / (1.0 - beta) - (m - p) / (1.0 - bk);
  out.u_deviation =
      m / (1.0 - beta) + lambda * (m + beta * p / (1.0 - beta));
  out.is_nash = 1.0 - beta < beta * lambda * (1.0 - bk);
  if (!out.is_nash && beta <= 1.0 / (1.0 + lambda))
    out.reason = "beta <= 1/(1+lambda): no period works";
  return out;
}

OscillationCheck comp_osc_is_nash(double m, double p, double beta,
                                  double lambda, int k) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0,1)");
  if (!(lambda < -1.0))
    throw DomainError("the competitive check needs lambda < -1");
  if (!(m > p)) throw DomainError("the construction assumes m > p");
  if (!(p >= 0.0 && m <= 1.0)) throw DomainError("need 0 <= p < m <= 1");
  if (k < 1) throw DomainError("oscillation period k must be at least 1");
  OscillationCheck out;
  out.lambda = lambda;
  out.beta = beta;
  out.k = k;
  out.m = m;
  out.p = p;
  const double al = -lambda;  // |lambda|
  const double bk = std::pow(beta, k);
  const double geo = (1.0 - bk) / (1.0 - beta);  // 1 + beta + ... + beta^(k-1)
  out.u_main = (1.0 + lambda) * p / (1.0 - beta) + (m - p) / (1.0 - bk);
  out.u_deviation =
      (1.0 + lambda) * m / (1.0 - beta) + lambda * (p - m) * (1.0 + beta);
  const double thresh_osc = (al * (1.0 + beta) - 1.0) / (al - 1.0);
  if (al * beta <= 1.0) {
    out.is_nash = false;
    out.reason = "|lambda|*beta <= 1: the stayer's threshold is unreachable";
    return out;
  }
  const double thresh_stay = al * beta / (al * beta - 1.0);
  out.is_nash = geo > thresh_osc && geo > thresh_stay;
  return out;
}

NamedStrategy parse_strategy(const std::string& spec, const GameConfig& config,
                             PlayerId seat) {
  std::string head = spec;
  std::map<std::string, double> args;
  if (const auto colon = spec.find(':'); colon != std::string::npos) {
    head = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw DomainError("strategy parameter must look like k=5: " + spec);
      try {
        args[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw DomainError("bad strategy parameter value in: " + spec);
      }
      if (comma == std::string::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  auto int_arg = [&](const std::string& key, int fallback) {
    const auto it = args.find(key);
    return it == args.end() ? fallback : static_cast<int>(it->second);
  };
  if (head == "left") return left_forever();
  if (head == "right") return right_forever();
  if (head == "copy") return copy_strategy();
  if (head == "reveal") return reveal_strategy();
  if (head == "mix-rs") return mix_reveal_right();
  if (head == "gittins")
    return gittins_strategy(config.prior, config.beta, config.p);
  if (head == "grim")
    return grim_trigger_gittins(config.prior, config.p, config.beta);
  if (head == "osc-coop") {
    auto pair = oscillating_coop(int_arg("k", 2));
    return seat == PlayerId::A ? pair.first : pair.second;
  }
  if (head == "osc-comp") {
    auto pair = oscillating_comp(int_arg("k", 2));
    return seat == PlayerId::A ? pair.first : pair.second;
  }
  if (head == "trigger-zs")
    return trigger_zero_sum(config, int_arg("rounds", 4));
  throw DomainError("unknown strategy: " + spec);
}

}  // namespace onearm

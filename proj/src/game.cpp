#include "onearm/game.hpp"

#include <array>
#include <cmath>

#include "json.hpp"

namespace onearm {

GameConfig GameConfig::discounted(double p, Prior prior, double beta, int h,
                                  double lambda) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0,1]");
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0,1)");
  if (h < 0) throw DomainError("truncation depth must be nonnegative");
  GameConfig c;
  c.p = p;
  c.prior = std::move(prior);
  c.lambda = lambda;
  c.mode = HorizonMode::Discounted;
  c.beta = beta;
  c.last_round = h;
  return c;
}

GameConfig GameConfig::finite(double p, Prior prior, int t, double lambda) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0,1]");
  if (t < 0) throw DomainError("horizon must be nonnegative");
  GameConfig c;
  c.p = p;
  c.prior = std::move(prior);
  c.lambda = lambda;
  c.mode = HorizonMode::Finite;
  c.beta = 1.0;
  c.last_round = t;
  return c;
}

double GameConfig::discount(int t) const {
  return mode == HorizonMode::Discounted ? std::pow(beta, t) : 1.0;
}

double GameConfig::tail_bound() const {
  if (mode == HorizonMode::Finite) return 0.0;
  return (1.0 + std::abs(lambda)) * std::pow(beta, last_round + 1) /
         (1.0 - beta);
}

void GameConfig::validate_exact() const {
  if (!prior.is_finite())
    throw DomainError("exact evaluation needs a finitely supported prior");
}

void History::push(Arm own, uint8_t reward, Arm opp) {
  own_actions.push_back(own);
  own_rewards.push_back(reward);
  opp_actions.push_back(opp);
}

void History::pop() {
  own_actions.pop_back();
  own_rewards.pop_back();
  opp_actions.pop_back();
}

double FsmStrategy::prob_right(const History& h) const {
  const Fsm* m = this_fsm();
  int q = m->initial_state();
  for (int i = 0; i < h.t(); ++i)
    q = m->next_state(q, i, h.own_actions[i], h.own_rewards[i],
                      h.opp_actions[i]);
  return m->prob_right(q, h.t());
}

namespace {

struct Accum {
  double gamma_a = 0.0;
  double gamma_b = 0.0;
};

// ---- joint state-machine fold ----------------------------------------------

struct FsmEvalOut {
  Accum acc;
  std::vector<double> first_r;  // mass of first risky pull per round
  double never = 0.0;
};

FsmEvalOut fsm_eval(const GameConfig& cfg, const Fsm& fa, const Fsm& fb,
                    bool track_first) {
  const auto& atoms = cfg.prior.finite_support().atoms;
  FsmEvalOut out;
  out.first_r.assign(cfg.rounds(), 0.0);
  long nodes = 0;
  for (const Atom& atom : atoms) {
    const double theta = atom.x;
    std::map<std::pair<int, int>, double> dist;
    dist[{fa.initial_state(), fb.initial_state()}] = atom.w;
    for (int t = 0; t < cfg.rounds(); ++t) {
      const double disc = cfg.discount(t);
      std::map<std::pair<int, int>, double> next;
      nodes += static_cast<long>(dist.size());
      if (nodes > cfg.node_budget)
        throw BudgetError("profile evaluation exceeded the node budget");
      for (const auto& [qs, pr] : dist) {
        const auto [qa, qb] = qs;
        const double pa = fa.prob_right(qa, t);
        const double pb = fb.prob_right(qb, t);
        for (Arm aa : {Arm::Left, Arm::Right}) {
          const double wa = aa == Arm::Right ? pa : 1.0 - pa;
          if (wa == 0.0) continue;
          for (Arm ab : {Arm::Left, Arm::Right}) {
            const double wb = ab == Arm::Right ? pb : 1.0 - pb;
            if (wb == 0.0) continue;
            const double mass = pr * wa * wb;
            const double mean_a = aa == Arm::Left ? cfg.p : theta;
            const double mean_b = ab == Arm::Left ? cfg.p : theta;
            out.acc.gamma_a += mass * mean_a * disc;
            out.acc.gamma_b += mass * mean_b * disc;
            if (track_first &&
                (aa == Arm::Right || ab == Arm::Right)) {
              out.first_r[t] += mass;
              continue;  // conditioned on "no risky pull yet"
            }
            for (int ra = 0; ra <= 1; ++ra) {
              const double wra =
                  ra ? mean_a : 1.0 - mean_a;
              if (wra == 0.0) continue;
              for (int rb = 0; rb <= 1; ++rb) {
                const double wrb = rb ? mean_b : 1.0 - mean_b;
                if (wrb == 0.0) continue;
                const auto qa2 = fa.next_state(qa, t, aa,
                                               static_cast<uint8_t>(ra), ab);
                const auto qb2 = fb.next_state(qb, t, ab,
                                               static_cast<uint8_t>(rb), aa);
                next[{qa2, qb2}] += mass * wra * wrb;
              }
            }
          }
        }
      }
      dist.swap(next);
    }
    if (track_first)
      for (const auto& [qs, pr] : dist) out.never += pr;
  }
  return out;
}

// ---- general tree walk ------------------------------------------------------

struct TreeCtx {
  const GameConfig* cfg;
  const Strategy* sa;
  const Strategy* sb;
  double theta = 0.0;
  bool track_first = false;
  long nodes = 0;
  Accum acc;
  std::vector<double>* first_r = nullptr;
  double* never = nullptr;
  History ha, hb;
};

void tree_walk(TreeCtx& ctx, int t, double mass, bool explored) {
  const GameConfig& cfg = *ctx.cfg;
  if (t == cfg.rounds()) {
    if (ctx.track_first && !explored) *ctx.never += mass;
    return;
  }
  if (++ctx.nodes > cfg.node_budget)
    throw BudgetError("profile evaluation exceeded the node budget");
  const double disc = cfg.discount(t);
  const double pa = ctx.sa->prob_right(ctx.ha);
  const double pb = ctx.sb->prob_right(ctx.hb);
  for (Arm aa : {Arm::Left, Arm::Right}) {
    const double wa = aa == Arm::Right ? pa : 1.0 - pa;
    if (wa == 0.0) continue;
    for (Arm ab : {Arm::Left, Arm::Right}) {
      const double wb = ab == Arm::Right ? pb : 1.0 - pb;
      if (wb == 0.0) continue;
      const double m = mass * wa * wb;
      const double mean_a = aa == Arm::Left ? cfg.p : ctx.theta;
      const double mean_b = ab == Arm::Left ? cfg.p : ctx.theta;
      ctx.acc.gamma_a += m * mean_a * disc;
      ctx.acc.gamma_b += m * mean_b * disc;
      bool now_explored = explored || aa == Arm::Right || ab == Arm::Right;
      if (ctx.track_first && !explored && now_explored)
        (*ctx.first_r)[t] += m;
      // branch on reward bits only for strategies that read them
      const bool ba = ctx.sa->uses_own_rewards();
      const bool bb = ctx.sb->uses_own_rewards();
      for (int ra = 0; ra <= (ba ? 1 : 0); ++ra) {
        const double wra = ba ? (ra ? mean_a : 1.0 - mean_a) : 1.0;
        if (wra == 0.0) continue;
        for (int rb = 0; rb <= (bb ? 1 : 0); ++rb) {
          const double wrb = bb ? (rb ? mean_b : 1.0 - mean_b) : 1.0;
          if (wrb == 0.0) continue;
          ctx.ha.push(aa, static_cast<uint8_t>(ra), ab);
          ctx.hb.push(ab, static_cast<uint8_t>(rb), aa);
          tree_walk(ctx, t + 1, m * wra * wrb, now_explored);
          ctx.ha.pop();
          ctx.hb.pop();
        }
      }
    }
  }
}

FsmEvalOut tree_eval(const GameConfig& cfg, const Strategy& a,
                     const Strategy& b, bool track_first) {
  FsmEvalOut out;
  out.first_r.assign(cfg.rounds(), 0.0);
  for (const Atom& atom : cfg.prior.finite_support().atoms) {
    TreeCtx ctx;
    ctx.cfg = &cfg;
    ctx.sa = &a;
    ctx.sb = &b;
    ctx.theta = atom.x;
    ctx.track_first = track_first;
    std::vector<double> fr(cfg.rounds(), 0.0);
    double never = 0.0;
    ctx.first_r = &fr;
    ctx.never = &never;
    tree_walk(ctx, 0, atom.w, false);
    out.acc.gamma_a += ctx.acc.gamma_a;
    out.acc.gamma_b += ctx.acc.gamma_b;
    for (int t = 0; t < cfg.rounds(); ++t) out.first_r[t] += fr[t];
    out.never += never;
  }
  return out;
}

FsmEvalOut run_eval(const GameConfig& cfg, const Strategy& a,
                    const Strategy& b, bool track_first) {
  cfg.validate_exact();
  if (a.fsm() && b.fsm()) return fsm_eval(cfg, *a.fsm(), *b.fsm(), track_first);
  return tree_eval(cfg, a, b, track_first);
}

}  // namespace

EvalResult evaluate_profile(const GameConfig& config, const Strategy& a,
                            const Strategy& b) {
  const FsmEvalOut r = run_eval(config, a, b, /*track_first=*/false);
  EvalResult out;
  out.gamma_a = r.acc.gamma_a;
  out.gamma_b = r.acc.gamma_b;
  out.u_a = out.gamma_a + config.lambda * out.gamma_b;
  out.u_b = out.gamma_b + config.lambda * out.gamma_a;
  out.error_bound = config.tail_bound();
  return out;
}

FirstExploration first_exploration_stats(const GameConfig& config,
                                         const Strategy& a, const Strategy& b) {
  const FsmEvalOut r = run_eval(config, a, b, /*track_first=*/true);
  FirstExploration out;
  out.by_round = r.first_r;
  out.never = r.never;
  return out;
}

std::string EvalResult::to_json(const GameConfig& config) const {
  nlohmann::json j;
  j["gamma_a"] = gamma_a;
  j["gamma_b"] = gamma_b;
  j["u_a"] = u_a;
  j["u_b"] = u_b;
  j["error_bound"] = error_bound;
  nlohmann::json c;
  c["p"] = config.p;
  c["lambda"] = config.lambda;
  c["prior"] = nlohmann::json::parse(config.prior.to_json());
  if (config.mode == HorizonMode::Discounted) {
    c["mode"] = "discounted";
    c["beta"] = config.beta;
    c["h"] = config.last_round;
  } else {
    c["mode"] = "finite";
    c["t"] = config.last_round;
  }
  j["config"] = c;
  return j.dump();
}

}  // namespace onearm

#include "onearm/seqform.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "onearm/simplex.hpp"

namespace onearm {

namespace {

using Rational = boost::multiprecision::cpp_rational;

int forced_lookup(const std::vector<ForcedMove>& forced, PlayerId who,
                  int round, ForcedMove::Kind* kind) {
  for (const ForcedMove& f : forced) {
    if (f.player == who && f.round == round) {
      *kind = f.kind;
      return 1;
    }
  }
  return 0;
}

// Allowed actions at an info set, honoring forced openings. last_bit is the
// risky bit from the previous round, or -1.
std::array<bool, 2> allowed_actions(const std::vector<ForcedMove>& forced,
                                    PlayerId who, int round, int last_bit) {
  ForcedMove::Kind kind;
  if (!forced_lookup(forced, who, round, &kind)) return {true, true};
  switch (kind) {
    case ForcedMove::Kind::Left:
      return {true, false};
    case ForcedMove::Kind::Right:
      return {false, true};
    case ForcedMove::Kind::Reveal: {
      if (last_bit < 0)
        throw DomainError(
            "a revealing move needs a forced risky pull in the previous round");
      return {last_bit == 0, last_bit == 1};
    }
  }
  return {true, true};
}

void validate_forced(const GameConfig& config,
                     const std::vector<ForcedMove>& forced) {
  for (const ForcedMove& f : forced) {
    if (f.round < 0 || f.round >= config.rounds())
      throw DomainError("forced move outside the truncated horizon");
    if (f.kind == ForcedMove::Kind::Reveal) {
      ForcedMove::Kind prev;
      if (f.round == 0 ||
          !forced_lookup(forced, f.player, f.round - 1, &prev) ||
          prev != ForcedMove::Kind::Right)
        throw DomainError(
            "a revealing move needs a forced risky pull in the previous round");
    }
  }
}

struct TreeBuilder {
  const GameConfig* cfg;
  const std::vector<ForcedMove>* forced;
  PlayerId who;
  std::vector<SequenceFormLP::InfoSet> sets;
  int num_seqs = 1;

  // last_bit per info set, needed for revealing moves
  std::vector<int> last_bit;

  int make_node(int round, int parent_seq, int bit) {
    SequenceFormLP::InfoSet node;
    node.id = static_cast<int>(sets.size());
    node.round = round;
    node.parent_seq = parent_seq;
    const auto allow = allowed_actions(*forced, who, round, bit);
    for (int a = 0; a < 2; ++a)
      if (allow[a]) node.action_seq[a] = num_seqs++;
    sets.push_back(node);
    last_bit.push_back(bit);
    return node.id;
  }

  void build() {
    make_node(0, 0, -1);
    std::size_t head = 0;
    while (head < sets.size()) {
      const int id = static_cast<int>(head++);
      if (sets[id].round + 1 >= cfg->rounds()) continue;
      for (int a = 0; a < 2; ++a) {
        const int seq = sets[id].action_seq[a];
        if (seq < 0) continue;
        const bool risky = a == static_cast<int>(Arm::Right);
        for (int bit = risky ? 0 : -1; bit <= (risky ? 1 : -1); ++bit) {
          for (int opp = 0; opp < 2; ++opp) {
            const int child =
                make_node(sets[id].round + 1, seq, risky ? bit : -1);
            sets[id].child[a][{bit, opp}] = child;
          }
        }
      }
    }
  }
};

struct PayoffWalker {
  const GameConfig* cfg;
  SequenceFormLP* lp;
  double theta = 0.0;

  void walk(int t, int node_a, int node_b, int seq_a, int seq_b,
            double chance) {
    if (t == cfg->rounds()) return;
    const double disc = cfg->discount(t);
    const auto& na = lp->infosets[0][node_a];
    const auto& nb = lp->infosets[1][node_b];
    for (int aa = 0; aa < 2; ++aa) {
      const int sa = na.action_seq[aa];
      if (sa < 0) continue;
      for (int ab = 0; ab < 2; ++ab) {
        const int sb = nb.action_seq[ab];
        if (sb < 0) continue;
        const double mean_a = aa == 0 ? cfg->p : theta;
        const double mean_b = ab == 0 ? cfg->p : theta;
        lp->payoff[{sa, sb}] += chance * disc * (mean_a - mean_b);
        if (t + 1 == cfg->rounds()) continue;
        const bool risky_a = aa == 1, risky_b = ab == 1;
        for (int ra = risky_a ? 0 : -1; ra <= (risky_a ? 1 : -1); ++ra) {
          const double wa = risky_a ? (ra ? theta : 1.0 - theta) : 1.0;
          if (wa == 0.0) continue;
          for (int rb = risky_b ? 0 : -1; rb <= (risky_b ? 1 : -1); ++rb) {
            const double wb = risky_b ? (rb ? theta : 1.0 - theta) : 1.0;
            if (wb == 0.0) continue;
            const int ca = na.child[aa].at({ra, ab});
            const int cb = nb.child[ab].at({rb, aa});
            walk(t + 1, ca, cb, sa, sb, chance * wa * wb);
          }
        }
      }
    }
  }
};

// rows of the sequence-constraint system: x_empty = 1, then per info set
// sum of child sequences minus the parent sequence = 0
template <typename T>
void constraint_rows(const SequenceFormLP& lp, int who,
                     std::vector<std::vector<T>>* rows) {
  const int n = lp.num_seqs[who];
  rows->clear();
  rows->emplace_back(n, T(0));
  (*rows)[0][0] = T(1);
  for (const auto& node : lp.infosets[who]) {
    std::vector<T> row(n, T(0));
    row[node.parent_seq] -= T(1);
    for (int a = 0; a < 2; ++a)
      if (node.action_seq[a] >= 0) row[node.action_seq[a]] += T(1);
    rows->push_back(std::move(row));
  }
}

template <typename T>
T from_double(double x) {
  if constexpr (std::is_same_v<T, double>)
    return x;
  else
    return Rational(x);  // doubles are exact rationals
}

// Maximin LP for `who`: max f.q s.t. F^T q <= A^T x, E x = e, x >= 0,
// where A is the payoff to `who`. Free q is split into q+ - q-.
template <typename T>
std::pair<T, std::vector<T>> solve_side(const SequenceFormLP& lp, int who,
                                        double tol) {
  const int opp = 1 - who;
  std::vector<std::vector<T>> own_rows, opp_rows;
  constraint_rows<T>(lp, who, &own_rows);
  constraint_rows<T>(lp, opp, &opp_rows);
  const int nx = lp.num_seqs[who];
  const int nq = static_cast<int>(opp_rows.size());
  const int nvars = nx + 2 * nq;

  LinearProgram<T> prog;
  prog.c.assign(nvars, T(0));
  // maximize q_0  ->  minimize -(q0+ - q0-)
  prog.c[nx] = T(-1);
  prog.c[nx + nq] = T(1);

  // one inequality per opponent sequence tau:
  //   sum_i F[i][tau] q_i - sum_sigma A[sigma][tau] x_sigma <= 0
  const int ntau = lp.num_seqs[opp];
  std::vector<std::vector<T>> ineq(ntau, std::vector<T>(nvars, T(0)));
  for (int i = 0; i < nq; ++i)
    for (int tau = 0; tau < ntau; ++tau) {
      const T f = opp_rows[i][tau];
      if (f == T(0)) continue;
      ineq[tau][nx + i] += f;
      ineq[tau][nx + nq + i] -= f;
    }
  for (const auto& [key, pay] : lp.payoff) {
    const int sigma = who == 0 ? key.first : key.second;
    const int tau = who == 0 ? key.second : key.first;
    const T a = from_double<T>(who == 0 ? pay : -pay);
    ineq[tau][sigma] -= a;
  }
  for (auto& row : ineq) {
    prog.a.push_back(std::move(row));
    prog.b.push_back(T(0));
    prog.rel.push_back(Rel::Le);
  }
  // own sequence constraints
  for (std::size_t i = 0; i < own_rows.size(); ++i) {
    std::vector<T> row(nvars, T(0));
    for (int j = 0; j < nx; ++j) row[j] = own_rows[i][j];
    prog.a.push_back(std::move(row));
    prog.b.push_back(i == 0 ? T(1) : T(0));
    prog.rel.push_back(Rel::Eq);
  }

  const auto sol = solve_lp<T>(prog, tol);
  if (!sol.ok)
    throw DomainError("sequence-form LP reported " + sol.status +
                      "; the game LP should always be solvable");
  std::vector<T> plan(sol.z.begin(), sol.z.begin() + nx);
  return {-sol.objective, std::move(plan)};
}

template <typename T>
GameValue solve_impl(const SequenceFormLP& lp, double tol) {
  auto [va, plan_a] = solve_side<T>(lp, 0, tol);
  auto [vb, plan_b] = solve_side<T>(lp, 1, tol);
  GameValue out;
  // vb is B's guarantee on -payoff; primal/dual agreement means va = -vb
  out.value = static_cast<double>(va);
  out.certificate_gap = std::abs(static_cast<double>(va) +
                                 static_cast<double>(vb));
  out.plan_a.reserve(plan_a.size());
  for (const T& x : plan_a) out.plan_a.push_back(static_cast<double>(x));
  out.plan_b.reserve(plan_b.size());
  for (const T& x : plan_b) out.plan_b.push_back(static_cast<double>(x));
  return out;
}

}  // namespace

SequenceFormLP build_sequence_form(const GameConfig& config,
                                   const std::vector<ForcedMove>& forced,
                                   int round_budget) {
  config.validate_exact();
  if (config.rounds() > round_budget)
    throw BudgetError("sequence form refused: " +
                      std::to_string(config.rounds()) +
                      " rounds exceed the budget of " +
                      std::to_string(round_budget));
  validate_forced(config, forced);

  SequenceFormLP lp;
  lp.rounds = config.rounds();
  for (int who = 0; who < 2; ++who) {
    TreeBuilder tb;
    tb.cfg = &config;
    tb.forced = &forced;
    tb.who = static_cast<PlayerId>(who);
    tb.build();
    lp.infosets[who] = std::move(tb.sets);
    lp.num_seqs[who] = tb.num_seqs;
  }
  for (const Atom& atom : config.prior.finite_support().atoms) {
    PayoffWalker w;
    w.cfg = &config;
    w.lp = &lp;
    w.theta = atom.x;
    w.walk(0, 0, 0, 0, 0, atom.w);
  }
  return lp;
}

GameValue solve(const SequenceFormLP& lp, double tol) {
  return solve_impl<double>(lp, tol);
}

GameValue solve_exact(const SequenceFormLP& lp) {
  return solve_impl<Rational>(lp, 0.0);
}

SequenceFormLP matrix_game_lp(const std::array<std::array<double, 2>, 2>& m) {
  SequenceFormLP lp;
  lp.rounds = 1;
  for (int who = 0; who < 2; ++who) {
    SequenceFormLP::InfoSet node;
    node.id = 0;
    node.round = 0;
    node.parent_seq = 0;
    node.action_seq = {1, 2};
    lp.infosets[who].push_back(node);
    lp.num_seqs[who] = 3;
  }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) lp.payoff[{a + 1, b + 1}] = m[a][b];
  return lp;
}

namespace {

class PlanStrategy final : public Strategy {
 public:
  PlanStrategy(const SequenceFormLP& lp, PlayerId who,
               std::vector<double> plan, std::string name)
      : infosets_(lp.infosets[static_cast<int>(who)]),
        plan_(std::move(plan)),
        rounds_(lp.rounds),
        name_(std::move(name)) {}

  double prob_right(const History& h) const override {
    if (h.t() >= rounds_) return 0.0;
    int node = 0;
    for (int i = 0; i < h.t(); ++i) {
      const auto& n = infosets_[node];
      const int a = static_cast<int>(h.own_actions[i]);
      const int bit = h.own_actions[i] == Arm::Right ? h.own_rewards[i] : -1;
      const auto it = n.child[a].find({bit, static_cast<int>(h.opp_actions[i])});
      if (it == n.child[a].end()) return 0.0;  // off the solved tree
      node = it->second;
    }
    const auto& n = infosets_[node];
    const double xl = n.action_seq[0] >= 0 ? plan_[n.action_seq[0]] : 0.0;
    const double xr = n.action_seq[1] >= 0 ? plan_[n.action_seq[1]] : 0.0;
    if (xl + xr <= 1e-12) return n.action_seq[0] >= 0 ? 0.0 : 1.0;
    return xr / (xl + xr);
  }

  std::string name() const override { return name_; }

 private:
  std::vector<SequenceFormLP::InfoSet> infosets_;
  std::vector<double> plan_;
  int rounds_;
  std::string name_;
};

}  // namespace

StrategyPtr realization_plan_strategy(const SequenceFormLP& lp, PlayerId who,
                                      std::vector<double> plan,
                                      std::string name) {
  return std::make_shared<PlanStrategy>(lp, who, std::move(plan),
                                        std::move(name));
}

std::string SequenceFormLP::dump_tableau() const {
  std::string out;
  out += "rounds " + std::to_string(rounds) + "\n";
  for (int who = 0; who < 2; ++who) {
    out += "player " + std::string(who == 0 ? "A" : "B") + ": " +
           std::to_string(infosets[who].size()) + " infosets, " +
           std::to_string(num_seqs[who]) + " sequences\n";
    for (const auto& n : infosets[who]) {
      out += "  h" + std::to_string(n.id) + " round " +
             std::to_string(n.round) + " parent x" +
             std::to_string(n.parent_seq) + " ->";
      for (int a = 0; a < 2; ++a)
        if (n.action_seq[a] >= 0)
          out += std::string(" ") + (a == 0 ? "L" : "R") + "=x" +
                 std::to_string(n.action_seq[a]);
      out += "\n";
    }
  }
  out += "payoff entries (xA, xB, value):\n";
  for (const auto& [key, v] : payoff)
    out += "  " + std::to_string(key.first) + " " +
           std::to_string(key.second) + " " + fmt9(v) + "\n";
  return out;
}

std::string GameValue::to_json() const {
  nlohmann::json j;
  j["value"] = value;
  j["certificate_gap"] = certificate_gap;
  j["plan_a"] = plan_a;
  j["plan_b"] = plan_b;
  return j.dump();
}

}  // namespace onearm

#include "onearm/sim.hpp"

#include <cmath>

#include <boost/math/special_functions/beta.hpp>

#include "json.hpp"

namespace onearm {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double draw_theta(const Prior& prior, SubstreamRng& rng) {
  const double u = rng.uniform();
  if (prior.is_beta()) {
    const auto& [a, b] = prior.beta_params();
    return boost::math::ibeta_inv(a, b, u);
  }
  double acc = 0.0;
  const auto& atoms = prior.finite_support().atoms;
  for (const Atom& atom : atoms) {
    acc += atom.w;
    if (u < acc) return atom.x;
  }
  return atoms.back().x;
}

Estimate estimate(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  Estimate e;
  e.mean = pairwise_sum(xs) / static_cast<double>(n);
  if (n < 2) return e;
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = xs[i] - e.mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
  e.half_width = 1.96 * std::sqrt(var / static_cast<double>(n));
  return e;
}

}  // namespace

SubstreamRng::SubstreamRng(uint64_t seed, uint64_t stream) {
  state_ = splitmix64(seed ^ splitmix64(stream * 0x9e3779b97f4a7c15ull + 1));
  if (state_ == 0) state_ = 0x853c49e6748fea9bull;
}

uint64_t SubstreamRng::next_raw() {
  // xorshift64*, tiny and fully portable
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 0x2545f4914f6cdd1dull;
}

double SubstreamRng::uniform() {
  return static_cast<double>(next_raw() >> 11) * 0x1.0p-53;
}

SimResult simulate(const GameConfig& config, const Strategy& a,
                   const Strategy& b, int horizon, int reps, uint64_t seed) {
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  if (reps < 1) throw DomainError("reps must be at least 1");
  SimResult out;
  out.traces.reserve(reps);
  std::vector<double> ga(reps), gb(reps), ua(reps), ub(reps);
  for (int rep = 0; rep < reps; ++rep) {
    SubstreamRng rng(seed, static_cast<uint64_t>(rep));
    SimTrace trace;
    trace.seed = static_cast<uint64_t>(rep);
    trace.theta = draw_theta(config.prior, rng);
    History ha, hb;
    double sum_a = 0.0, sum_b = 0.0;
    for (int t = 0; t < horizon; ++t) {
      TraceRound r;
      r.t = t;
      r.action_a = rng.bernoulli(a.prob_right(ha)) ? Arm::Right : Arm::Left;
      r.action_b = rng.bernoulli(b.prob_right(hb)) ? Arm::Right : Arm::Left;
      const double mean_a = r.action_a == Arm::Left ? config.p : trace.theta;
      const double mean_b = r.action_b == Arm::Left ? config.p : trace.theta;
      r.reward_a = rng.bernoulli(mean_a) ? 1 : 0;
      r.reward_b = rng.bernoulli(mean_b) ? 1 : 0;
      const double disc = config.discount(t);
      sum_a += disc * r.reward_a;
      sum_b += disc * r.reward_b;
      ha.push(r.action_a, r.reward_a, r.action_b);
      hb.push(r.action_b, r.reward_b, r.action_a);
      trace.rounds.push_back(r);
    }
    ga[rep] = sum_a;
    gb[rep] = sum_b;
    ua[rep] = sum_a + config.lambda * sum_b;
    ub[rep] = sum_b + config.lambda * sum_a;
    out.traces.push_back(std::move(trace));
  }
  out.summary.reps = reps;
  out.summary.horizon = horizon;
  out.summary.gamma_a = estimate(ga);
  out.summary.gamma_b = estimate(gb);
  out.summary.u_a = estimate(ua);
  out.summary.u_b = estimate(ub);
  return out;
}

ConcentrationReport concentration_check(const Prior& prior,
                                        const Strategy& exploration, int k,
                                        double epsilon, int reps,
                                        uint64_t seed, double p_safe,
                                        int horizon_cap) {
  if (k < 1) throw DomainError("k must be at least 1");
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (reps < 1) throw DomainError("reps must be at least 1");
  if (horizon_cap <= 0) horizon_cap = 4 * k;
  int events = 0;
  for (int rep = 0; rep < reps; ++rep) {
    SubstreamRng rng(seed, static_cast<uint64_t>(rep));
    const double theta = draw_theta(prior, rng);
    History h;
    int pulls = 0, successes = 0;
    for (int t = 0; t < horizon_cap && pulls < k; ++t) {
      const Arm action =
          rng.bernoulli(exploration.prob_right(h)) ? Arm::Right : Arm::Left;
      const double mean = action == Arm::Left ? p_safe : theta;
      const uint8_t reward = rng.bernoulli(mean) ? 1 : 0;
      if (action == Arm::Right) {
        ++pulls;
        successes += reward;
      }
      h.push(action, reward, Arm::Left);  // opponent stays left
    }
    if (pulls >= k &&
        std::abs(successes - k * theta) > k * epsilon)
      ++events;
  }
  ConcentrationReport out;
  out.k = k;
  out.epsilon = epsilon;
  out.reps = reps;
  out.empirical = static_cast<double>(events) / reps;
  out.bound = 2.0 * std::exp(-2.0 * k * epsilon * epsilon);
  out.std_error =
      std::sqrt(out.empirical * (1.0 - out.empirical) / reps);
  out.pass = out.empirical <= out.bound + 3.0 * out.std_error;
  return out;
}

SettleReport settle_diagnostic(const std::vector<SimTrace>& traces,
                               int window) {
  if (traces.empty()) throw DomainError("no traces");
  const int horizon = static_cast<int>(traces[0].rounds.size());
  if (window < 1 || window >= horizon)
    throw DomainError("window must lie in [1, horizon)");
  int settled = 0;
  for (const SimTrace& tr : traces) {
    bool ok = true;
    const Arm arm = tr.rounds[horizon - window].action_a;
    for (int t = horizon - window; t < horizon && ok; ++t)
      ok = tr.rounds[t].action_a == arm && tr.rounds[t].action_b == arm;
    settled += ok;
  }
  SettleReport out;
  const double n = static_cast<double>(traces.size());
  out.fraction = settled / n;
  out.half_width = 1.96 * std::sqrt(out.fraction * (1.0 - out.fraction) / n);
  return out;
}

std::string traces_csv(const std::vector<SimTrace>& traces) {
  std::string out = "t,action_A,reward_A,action_B,reward_B,theta,rep\n";
  for (std::size_t rep = 0; rep < traces.size(); ++rep) {
    const SimTrace& tr = traces[rep];
    for (const TraceRound& r : tr.rounds) {
      out += std::to_string(r.t);
      out += ',';
      out += arm_char(r.action_a);
      out += ',';
      out += std::to_string(static_cast<int>(r.reward_a));
      out += ',';
      out += arm_char(r.action_b);
      out += ',';
      out += std::to_string(static_cast<int>(r.reward_b));
      out += ',';
      out += fmt9(tr.theta);
      out += ',';
      out += std::to_string(rep);
      out += '\n';
    }
  }
  return out;
}

namespace {

nlohmann::json estimate_json(const Estimate& e) {
  return {{"mean", e.mean}, {"half_width_95", e.half_width}};
}

}  // namespace

std::string SimSummary::to_json() const {
  nlohmann::json j;
  j["reps"] = reps;
  j["horizon"] = horizon;
  j["gamma_a"] = estimate_json(gamma_a);
  j["gamma_b"] = estimate_json(gamma_b);
  j["u_a"] = estimate_json(u_a);
  j["u_b"] = estimate_json(u_b);
  return j.dump();
}

std::string ConcentrationReport::to_json() const {
  nlohmann::json j;
  j["k"] = k;
  j["epsilon"] = epsilon;
  j["reps"] = reps;
  j["empirical"] = empirical;
  j["bound"] = bound;
  j["std_error"] = std_error;
  j["pass"] = pass;
  return j.dump();
}

std::string SettleReport::to_json() const {
  nlohmann::json j;
  j["fraction"] = fraction;
  j["half_width_95"] = half_width;
  return j.dump();
}

}  // namespace onearm

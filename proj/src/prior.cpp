#include "onearm/prior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/beta.hpp>

#include "json.hpp"

namespace onearm {

namespace {

constexpr double kNormTol = 1e-12;

void validate_atoms(const std::vector<Atom>& atoms) {
  if (atoms.empty()) throw DomainError("finite prior needs at least one atom");
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Atom& a = atoms[i];
    if (!(a.x >= 0.0 && a.x <= 1.0))
      throw DomainError("atom location outside [0,1]");
    if (!(a.w > 0.0)) throw DomainError("atom weight must be positive");
    if (i > 0 && !(atoms[i - 1].x < a.x))
      throw DomainError("atoms must be distinct and sorted ascending");
    total += a.w;
  }
  if (std::abs(total - 1.0) > kNormTol)
    throw DomainError("atom weights must sum to 1");
}

std::vector<Atom> normalized(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.x < b.x; });
  double total = 0.0;
  for (const Atom& a : atoms) total += a.w;
  if (!(total > 0.0)) throw DomainError("atom weights must have positive mass");
  for (Atom& a : atoms) a.w /= total;
  return atoms;
}

}  // namespace

Prior Prior::finite(std::vector<Atom> atoms) {
  Prior p;
  atoms = normalized(std::move(atoms));
  validate_atoms(atoms);
  p.repr_ = FiniteSupport{std::move(atoms)};
  return p;
}

Prior Prior::two_point(double lo, double hi, double w_lo) {
  return finite({{lo, w_lo}, {hi, 1.0 - w_lo}});
}

Prior Prior::point_mass(double x) { return finite({{x, 1.0}}); }

Prior Prior::beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw DomainError("Beta parameters must be strictly positive");
  Prior p;
  p.repr_ = BetaParams{a, b};
  return p;
}

const FiniteSupport& Prior::finite_support() const {
  if (!is_finite()) throw DomainError("prior is not finitely supported");
  return std::get<FiniteSupport>(repr_);
}

const BetaParams& Prior::beta_params() const {
  if (!is_beta()) throw DomainError("prior is not Beta");
  return std::get<BetaParams>(repr_);
}

bool Prior::is_point_mass() const {
  return is_finite() && finite_support().atoms.size() == 1;
}

Moments moments(const Prior& prior) {
  Moments out;
  if (prior.is_beta()) {
    const auto& [a, b] = prior.beta_params();
    out.m = a / (a + b);
    out.w = a * b / ((a + b) * (a + b) * (a + b + 1.0));
    out.m1 = (a + 1.0) / (a + b + 1.0);
    out.m0 = a / (a + b + 1.0);
    out.m_star = 1.0;
    out.point_mass = false;
    return out;
  }
  const auto& atoms = prior.finite_support().atoms;
  double m = 0.0, ex2 = 0.0;
  for (const Atom& a : atoms) {
    m += a.w * a.x;
    ex2 += a.w * a.x * a.x;
  }
  out.m = m;
  out.w = std::max(0.0, ex2 - m * m);
  out.m_star = atoms.back().x;
  out.point_mass = atoms.size() == 1;
  out.m1 = m > 0.0 ? ex2 / m : m;
  out.m0 = m < 1.0 ? (m - ex2) / (1.0 - m) : m;
  return out;
}

Prior update(const Prior& prior, Outcome outcome) {
  const bool success = outcome == Outcome::Success;
  if (prior.is_beta()) {
    const auto& [a, b] = prior.beta_params();
    return success ? Prior::beta(a + 1.0, b) : Prior::beta(a, b + 1.0);
  }
  std::vector<Atom> atoms = prior.finite_support().atoms;
  double total = 0.0;
  for (Atom& a : atoms) {
    a.w *= success ? a.x : (1.0 - a.x);
    total += a.w;
  }
  if (!(total > 0.0))
    throw DomainError("update conditions on an outcome of probability zero");
  std::vector<Atom> kept;
  for (const Atom& a : atoms)
    if (a.w > 0.0) kept.push_back({a.x, a.w / total});
  return Prior::finite(std::move(kept));
}

double expected_best_mean(const Prior& prior, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0,1]");
  if (prior.is_beta()) {
    const auto& [a, b] = prior.beta_params();
    const double m = a / (a + b);
    // p * Pr(X <= p) + E[X; X > p], the tail via the mean of Beta(a+1, b).
    const double cdf = boost::math::ibeta(a, b, p);
    const double tail = m * (1.0 - boost::math::ibeta(a + 1.0, b, p));
    return p * cdf + tail;
  }
  double out = 0.0;
  for (const Atom& a : prior.finite_support().atoms)
    out += a.w * (a.x <= p ? p : a.x);
  return out;
}

std::optional<double> posterior_mean(const Prior& prior, int s, int f) {
  if (s < 0 || f < 0) throw DomainError("negative evidence counts");
  if (prior.is_beta()) {
    const auto& [a, b] = prior.beta_params();
    return (a + s) / (a + b + s + f);
  }
  const auto& atoms = prior.finite_support().atoms;
  // log weights, shifted by the max to avoid underflow
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> lw(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Atom& a = atoms[i];
    if ((s > 0 && a.x == 0.0) || (f > 0 && a.x == 1.0)) {
      lw[i] = -std::numeric_limits<double>::infinity();
      continue;
    }
    lw[i] = std::log(a.w);
    if (s > 0) lw[i] += s * std::log(a.x);
    if (f > 0) lw[i] += f * std::log1p(-a.x);
    best = std::max(best, lw[i]);
  }
  if (!std::isfinite(best)) return std::nullopt;
  double z = 0.0, num = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!std::isfinite(lw[i])) continue;
    const double w = std::exp(lw[i] - best);
    z += w;
    num += w * atoms[i].x;
  }
  return num / z;
}

std::string Prior::to_json() const {
  nlohmann::json j;
  if (is_beta()) {
    j["type"] = "beta";
    j["a"] = beta_params().a;
    j["b"] = beta_params().b;
  } else {
    j["type"] = "finite";
    auto arr = nlohmann::json::array();
    for (const Atom& a : finite_support().atoms)
      arr.push_back({a.x, a.w});
    j["atoms"] = arr;
  }
  return j.dump();
}

Prior Prior::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad prior JSON: ") + e.what());
  }
  const std::string type = j.value("type", "");
  if (type == "beta") {
    if (!j.contains("a") || !j.contains("b"))
      throw DomainError("beta prior needs fields a and b");
    return Prior::beta(j["a"].get<double>(), j["b"].get<double>());
  }
  if (type == "finite") {
    if (!j.contains("atoms") || !j["atoms"].is_array())
      throw DomainError("finite prior needs an atoms array");
    std::vector<Atom> atoms;
    for (const auto& e : j["atoms"]) {
      if (!e.is_array() || e.size() != 2)
        throw DomainError("each atom must be a [x, weight] pair");
      atoms.push_back({e[0].get<double>(), e[1].get<double>()});
    }
    return Prior::finite(std::move(atoms));
  }
  throw DomainError("prior type must be \"finite\" or \"beta\"");
}

}  // namespace onearm

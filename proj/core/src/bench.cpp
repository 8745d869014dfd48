#include "pacekit/bench.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace pacekit {

namespace {

struct FluidItem {
  double ratio = 0.0;
  double weight = 0.0;  // prob * b_coeff * cap
  double value = 0.0;   // prob * f_coeff * cap
  std::size_t period = 0;
  std::size_t atom = 0;
};

}  // namespace

FluidSolution fluid_value(std::span<const FiniteSupport> dists, double budget,
                          double action_cap) {
  FluidSolution sol;
  sol.per_period_consumption.assign(dists.size(), 0.0);

  std::vector<FluidItem> items;
  double always_value = 0.0;  // positive reward at zero consumption
  double total_weight = 0.0;
  for (std::size_t t = 0; t < dists.size(); ++t) {
    if (dists[t].atoms.empty()) throw EmptySupport("fluid period has no atoms");
    for (std::size_t a = 0; a < dists[t].atoms.size(); ++a) {
      const auto& atom = dists[t].atoms[a];
      if (atom.prob < 0.0) throw NegativeProbability("fluid atom probability < 0");
      if (atom.f_coeff <= 0.0) continue;
      if (atom.b_coeff <= 0.0) {
        always_value += atom.prob * atom.f_coeff * action_cap;
        continue;
      }
      FluidItem item;
      item.ratio = atom.f_coeff / atom.b_coeff;
      item.weight = atom.prob * atom.b_coeff * action_cap;
      item.value = atom.prob * atom.f_coeff * action_cap;
      item.period = t;
      item.atom = a;
      items.push_back(item);
      total_weight += item.weight;
    }
  }

  // Minimize the dual by slope enumeration; the slope below every breakpoint
  // is budget minus the consumption of everything still accepted.
  double optimal = 0.0;
  if (budget - total_weight < 0.0) {
    std::sort(items.begin(), items.end(),
              [](const FluidItem& a, const FluidItem& b) { return a.ratio < b.ratio; });
    // The walk must land somewhere: above the top breakpoint the slope is
    // the budget itself. Presetting guards the zero-budget case, where the
    // final remaining can carry rounding dust.
    optimal = items.back().ratio;
    double remaining = total_weight;
    for (std::size_t i = 0; i < items.size();) {
      std::size_t j = i;
      double group = 0.0;
      while (j < items.size() && items[j].ratio == items[i].ratio) group += items[j++].weight;
      remaining -= group;
      if (budget - remaining >= 0.0) {
        optimal = items[i].ratio;
        break;
      }
      i = j;
    }
  }
  sol.optimal_dual = optimal;

  // Primal recovery: everything strictly above the dual is accepted, the
  // boundary mass is filled in (period, atom) order until the budget is
  // exactly exhausted.
  double above_weight = 0.0;
  double boundary_weight = 0.0;
  for (const FluidItem& it : items) {
    if (it.ratio > optimal) above_weight += it.weight;
    else if (it.ratio == optimal) boundary_weight += it.weight;
  }

  double value = always_value;
  for (const FluidItem& it : items) {
    if (it.ratio > optimal) {
      value += it.value;
      sol.per_period_consumption[it.period] += it.weight;
    }
  }

  double fill = 0.0;
  if (optimal > 0.0 && boundary_weight > 0.0) {
    fill = std::clamp(budget - above_weight, 0.0, boundary_weight);
    std::vector<const FluidItem*> boundary;
    for (const FluidItem& it : items) {
      if (it.ratio == optimal) boundary.push_back(&it);
    }
    std::sort(boundary.begin(), boundary.end(), [](const FluidItem* a, const FluidItem* b) {
      return std::tie(a->period, a->atom) < std::tie(b->period, b->atom);
    });
    double left = fill;
    for (const FluidItem* it : boundary) {
      const double take = std::min(left, it->weight);
      if (take <= 0.0) break;
      value += it->value * (take / it->weight);
      sol.per_period_consumption[it->period] += take;
      left -= take;
    }
    sol.boundary_fraction = fill / boundary_weight;
  }
  sol.value = value;
  return sol;
}

double distributional_dual(std::span<const FiniteSupport> dists, double budget,
                           double action_cap, double price) {
  double total = price * budget;
  for (const FiniteSupport& dist : dists) {
    for (const auto& atom : dist.atoms) {
      const double profit = atom.f_coeff - price * atom.b_coeff;
      if (profit > 0.0) total += atom.prob * profit * action_cap;
    }
  }
  return total;
}

double hindsight_opt(std::span<const Request> requests, double budget, double action_cap) {
  struct Item {
    double ratio, weight, value;
  };
  std::vector<Item> items;
  double total = 0.0;
  for (const Request& r : requests) {
    if (r.f_coeff <= 0.0) continue;
    if (r.b_coeff <= 0.0) {
      total += r.f_coeff * action_cap;  // free reward
      continue;
    }
    items.push_back({r.f_coeff / r.b_coeff, r.b_coeff * action_cap, r.f_coeff * action_cap});
  }
  std::sort(items.begin(), items.end(),
            [](const Item& a, const Item& b) { return a.ratio > b.ratio; });
  double remaining = budget;
  for (const Item& it : items) {
    if (remaining <= 0.0) break;
    const double take = std::min(remaining, it.weight);
    total += it.value * (take / it.weight);
    remaining -= take;
  }
  return total;
}

namespace {

// Piecewise-linear quantile function over the reward coefficient: value(u) =
// start + slope * (u - lo) on each piece, pieces covering [0, 1].
struct QuantilePiece {
  double lo, hi, start, slope;
};

struct RewardQuantile {
  std::vector<QuantilePiece> pieces;
  double b_coeff = 0.0;
};

// Reduces a spec to a reward quantile when its consumption coefficient is a
// single value across the whole support.
bool to_reward_quantile(const DistSpec& dist, RewardQuantile& out) {
  if (const auto* p = std::get_if<PointMass>(&dist)) {
    out.b_coeff = p->b_coeff;
    out.pieces = {{0.0, 1.0, p->f_coeff, 0.0}};
    return true;
  }
  if (const auto* u = std::get_if<UniformReward>(&dist)) {
    out.b_coeff = u->b_coeff;
    out.pieces = {{0.0, 1.0, u->lo, u->hi - u->lo}};
    return true;
  }
  const auto& fin = std::get<FiniteSupport>(dist);
  for (const auto& a : fin.atoms) {
    if (a.b_coeff != fin.atoms.front().b_coeff) return false;
  }
  out.b_coeff = fin.atoms.front().b_coeff;
  auto atoms = fin.atoms;
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.f_coeff < b.f_coeff; });
  out.pieces.clear();
  double cum = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    double next = (i + 1 == atoms.size()) ? 1.0 : cum + atoms[i].prob;
    if (next > cum) out.pieces.push_back({cum, next, atoms[i].f_coeff, 0.0});
    cum = next;
  }
  return true;
}

double piece_value(const QuantilePiece& p, double u) { return p.start + p.slope * (u - p.lo); }

// Exact integral of |Fp^{-1}(u) - Fq^{-1}(u)| over [0, 1].
double quantile_gap_integral(const RewardQuantile& p, const RewardQuantile& q) {
  std::vector<double> cuts;
  for (const auto& piece : p.pieces) {
    cuts.push_back(piece.lo);
    cuts.push_back(piece.hi);
  }
  for (const auto& piece : q.pieces) {
    cuts.push_back(piece.lo);
    cuts.push_back(piece.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto piece_at = [](const std::vector<QuantilePiece>& pieces, double u) {
    for (const auto& piece : pieces) {
      if (u >= piece.lo && u < piece.hi) return piece;
    }
    return pieces.back();
  };

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const QuantilePiece pp = piece_at(p.pieces, a);
    const QuantilePiece qp = piece_at(q.pieces, a);
    // Difference is linear on [a, b]: d(u) = da + m * (u - a).
    const double da = piece_value(pp, a) - piece_value(qp, a);
    const double db = piece_value(pp, b) - piece_value(qp, b);
    const double len = b - a;
    if (len <= 0.0) continue;
    if (da * db >= 0.0) {
      total += 0.5 * std::abs(da + db) * len;
    } else {
      // Sign change at the root; integrate the two triangles.
      const double root = a + len * (da / (da - db));
      total += 0.5 * std::abs(da) * (root - a) + 0.5 * std::abs(db) * (b - root);
    }
  }
  return total;
}

}  // namespace

double wasserstein(const DistSpec& p, const DistSpec& q, double action_cap) {
  if (p == q) return 0.0;

  RewardQuantile qp, qq;
  if (to_reward_quantile(p, qp) && to_reward_quantile(q, qq)) {
    // Consumption is deterministic on each side, so it contributes a constant
    // |db| to every coupling and the reward marginals couple comonotonically.
    return action_cap * (quantile_gap_integral(qp, qq) + std::abs(qp.b_coeff - qq.b_coeff));
  }

  const bool p_finite = !std::holds_alternative<UniformReward>(p);
  const bool q_finite = !std::holds_alternative<UniformReward>(q);
  if (!p_finite || !q_finite) {
    throw UnsupportedFamilyPair(
        "no exact Wasserstein routine for a continuous family against varying consumption");
  }

  const FiniteSupport fp = to_finite(p, 1);
  const FiniteSupport fq = to_finite(q, 1);
  std::vector<double> supply, demand;
  for (const auto& a : fp.atoms) supply.push_back(a.prob);
  for (const auto& a : fq.atoms) demand.push_back(a.prob);
  std::vector<std::vector<double>> cost(fp.atoms.size(), std::vector<double>(fq.atoms.size()));
  for (std::size_t i = 0; i < fp.atoms.size(); ++i) {
    for (std::size_t j = 0; j < fq.atoms.size(); ++j) {
      cost[i][j] = request_distance(Request{fp.atoms[i].f_coeff, fp.atoms[i].b_coeff},
                                    Request{fq.atoms[j].f_coeff, fq.atoms[j].b_coeff},
                                    action_cap);
    }
  }
  return exact_transport(supply, demand, cost);
}

std::vector<double> benchmark_consumption(std::span<const DistSpec> sample_dists,
                                          double empirical_dual, double action_cap) {
  std::vector<double> beta(sample_dists.size());
  for (std::size_t t = 0; t < sample_dists.size(); ++t) {
    beta[t] = expected_consumption(sample_dists[t], empirical_dual, action_cap);
  }
  return beta;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double total = 0.0;
    for (double v : values) total += v;
    return total;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

RegretReport make_regret_report(double fluid_value, std::span<const double> rewards,
                                std::span<const double> r2_per_trial,
                                std::span<const double> r3_per_trial,
                                double total_wasserstein) {
  RegretReport report;
  report.fluid_value = fluid_value;
  report.trials = static_cast<std::int64_t>(rewards.size());
  report.total_wasserstein = total_wasserstein;
  if (rewards.empty()) return report;

  const double n = static_cast<double>(rewards.size());
  report.mean_reward = pairwise_sum(rewards) / n;
  if (rewards.size() >= 2) {
    std::vector<double> sq(rewards.size());
    for (std::size_t i = 0; i < rewards.size(); ++i) {
      const double d = rewards[i] - report.mean_reward;
      sq[i] = d * d;
    }
    const double sample_var = pairwise_sum(sq) / (n - 1.0);
    report.std_error = std::sqrt(sample_var / n);
  }
  report.regret = fluid_value - report.mean_reward;
  report.r2 = r2_per_trial.empty() ? 0.0
                                   : *std::max_element(r2_per_trial.begin(), r2_per_trial.end());
  if (!r3_per_trial.empty()) {
    report.r3_estimate = pairwise_sum(r3_per_trial) / static_cast<double>(r3_per_trial.size());
  }
  return report;
}

}  // namespace pacekit

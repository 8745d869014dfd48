#include "pacekit/dist.hpp"

#include <algorithm>
#include <cmath>

#include "pacekit/rng.hpp"

namespace pacekit {

namespace {

template <class... Ts>
struct Overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

void check_coeffs(double f, double b) {
  if (!std::isfinite(f) || !std::isfinite(b)) throw BoundViolation("non-finite coefficient");
  if (f < 0.0) throw BoundViolation("f_coeff < 0 in distribution");
  if (b < 0.0) throw BoundViolation("b_coeff < 0 in distribution");
}

}  // namespace

void validate_dist(const DistSpec& dist) {
  std::visit(Overload{
                 [](const PointMass& p) { check_coeffs(p.f_coeff, p.b_coeff); },
                 [](const UniformReward& u) {
                   check_coeffs(u.lo, u.b_coeff);
                   check_coeffs(u.hi, u.b_coeff);
                   if (u.lo > u.hi) throw BoundViolation("uniform_f needs lo <= hi");
                 },
                 [](const FiniteSupport& f) {
                   if (f.atoms.empty()) throw EmptySupport("finite distribution has no atoms");
                   double total = 0.0;
                   for (const auto& a : f.atoms) {
                     check_coeffs(a.f_coeff, a.b_coeff);
                     if (a.prob < 0.0) throw NegativeProbability("atom probability < 0");
                     total += a.prob;
                   }
                   if (std::abs(total - 1.0) > 1e-9)
                     throw NegativeProbability("atom probabilities must sum to 1");
                 },
             },
             dist);
}

void validate_dist_bounds(const DistSpec& dist, const InstanceParams& params) {
  std::visit(Overload{
                 [&](const PointMass& p) {
                   validate_request_bounds(params, {p.f_coeff, p.b_coeff});
                 },
                 [&](const UniformReward& u) {
                   validate_request_bounds(params, {u.lo, u.b_coeff});
                   validate_request_bounds(params, {u.hi, u.b_coeff});
                 },
                 [&](const FiniteSupport& f) {
                   for (const auto& a : f.atoms) {
                     validate_request_bounds(params, {a.f_coeff, a.b_coeff});
                   }
                 },
             },
             dist);
}

FiniteSupport to_finite(const DistSpec& dist, int grid) {
  return std::visit(
      Overload{
          [](const PointMass& p) {
            return FiniteSupport{{{p.f_coeff, p.b_coeff, 1.0}}};
          },
          [grid](const UniformReward& u) {
            if (u.lo == u.hi) return FiniteSupport{{{u.lo, u.b_coeff, 1.0}}};
            FiniteSupport out;
            out.atoms.reserve(static_cast<std::size_t>(grid));
            const double width = (u.hi - u.lo) / grid;
            for (int i = 0; i < grid; ++i) {
              out.atoms.push_back({u.lo + (i + 0.5) * width, u.b_coeff, 1.0 / grid});
            }
            return out;
          },
          [](const FiniteSupport& f) { return f; },
      },
      dist);
}

double discretization_bound(const DistSpec& dist, int grid, double action_cap) {
  if (const auto* u = std::get_if<UniformReward>(&dist)) {
    if (u->hi > u->lo) return action_cap * (u->hi - u->lo) / (2.0 * grid);
  }
  return 0.0;
}

namespace {

// Acceptance rule shared with best_response: nonnegative profit with
// nonzero reward, evaluated as a ratio comparison so that prices which are
// themselves ratios keep ties exact.
bool atom_accepted(double f, double b, double price) {
  return f > 0.0 && (b == 0.0 || price <= f / b);
}

}  // namespace

double expected_consumption(const DistSpec& dist, double price, double action_cap) {
  return std::visit(
      Overload{
          [&](const PointMass& p) {
            return atom_accepted(p.f_coeff, p.b_coeff, price) ? p.b_coeff * action_cap : 0.0;
          },
          [&](const UniformReward& u) {
            if (u.lo == u.hi)
              return atom_accepted(u.lo, u.b_coeff, price) ? u.b_coeff * action_cap : 0.0;
            // P(f >= price * b) over f ~ Unif[lo, hi]; the f = 0 boundary has
            // measure zero.
            const double threshold = price * u.b_coeff;
            const double mass =
                std::clamp((u.hi - std::max(u.lo, threshold)) / (u.hi - u.lo), 0.0, 1.0);
            return mass * u.b_coeff * action_cap;
          },
          [&](const FiniteSupport& f) {
            double total = 0.0;
            for (const auto& a : f.atoms) {
              if (atom_accepted(a.f_coeff, a.b_coeff, price)) {
                total += a.prob * a.b_coeff * action_cap;
              }
            }
            return total;
          },
      },
      dist);
}

double expected_profit(const DistSpec& dist, double price, double action_cap) {
  return std::visit(
      Overload{
          [&](const PointMass& p) {
            return std::max(p.f_coeff - price * p.b_coeff, 0.0) * action_cap;
          },
          [&](const UniformReward& u) {
            if (u.lo == u.hi) return std::max(u.lo - price * u.b_coeff, 0.0) * action_cap;
            // Integral of (f - price * b)^+ over Unif[lo, hi].
            const double top = std::max(u.hi - price * u.b_coeff, 0.0);
            const double bot = std::max(u.lo - price * u.b_coeff, 0.0);
            return action_cap * (top * top - bot * bot) / (2.0 * (u.hi - u.lo));
          },
          [&](const FiniteSupport& f) {
            double total = 0.0;
            for (const auto& a : f.atoms) {
              total += a.prob * std::max(a.f_coeff - price * a.b_coeff, 0.0) * action_cap;
            }
            return total;
          },
      },
      dist);
}

std::vector<double> support_breakpoints(const DistSpec& dist) {
  std::vector<double> out = std::visit(
      Overload{
          [](const PointMass& p) {
            std::vector<double> v;
            if (p.f_coeff > 0.0 && p.b_coeff > 0.0) v.push_back(p.f_coeff / p.b_coeff);
            return v;
          },
          [](const UniformReward& u) {
            std::vector<double> v;
            if (u.b_coeff > 0.0) {
              if (u.lo > 0.0) v.push_back(u.lo / u.b_coeff);
              if (u.hi > 0.0) v.push_back(u.hi / u.b_coeff);
            }
            return v;
          },
          [](const FiniteSupport& f) {
            std::vector<double> v;
            for (const auto& a : f.atoms) {
              if (a.f_coeff > 0.0 && a.b_coeff > 0.0) v.push_back(a.f_coeff / a.b_coeff);
            }
            return v;
          },
      },
      dist);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Request sample_request(const DistSpec& dist, Rng& rng) {
  return std::visit(
      Overload{
          [](const PointMass& p) { return Request{p.f_coeff, p.b_coeff}; },
          [&rng](const UniformReward& u) {
            return Request{rng.next_uniform(u.lo, u.hi), u.b_coeff};
          },
          [&rng](const FiniteSupport& f) {
            const double u = rng.next_unit();
            double cum = 0.0;
            for (const auto& a : f.atoms) {
              cum += a.prob;
              if (u < cum) return Request{a.f_coeff, a.b_coeff};
            }
            // Rounding can leave cum a hair under 1; the last atom absorbs it.
            return Request{f.atoms.back().f_coeff, f.atoms.back().b_coeff};
          },
      },
      dist);
}

}  // namespace pacekit

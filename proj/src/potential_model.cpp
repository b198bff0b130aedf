#include "adhesion/potential_model.hpp"

#include "adhesion/errors.hpp"

#include <algorithm>
#include <cmath>

namespace adhesion {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace

int dimension(const PotentialModel& model) {
  return std::visit([](const auto& m) { return m.dimension(); }, model);
}

std::vector<Branch> branches(const PotentialModel& model, const Vec& x, double t) {
  if (x.size() != dimension(model)) throw DimensionMismatch("point dimension mismatch");
  return std::visit(overloaded{
                        [&](const HopfLaxPotential& m) { return m.evaluate_branches(x, t); },
                        [&](const FiniteMinFamily& m) { return m.evaluate_branches(x, t); },
                        [&](const LocalLinearModel& m) { return m.evaluate_branches(x, t); },
                        [&](const A3EndpointModel& m) { return a3_branches(m, x, t); },
                    },
                    model);
}

std::optional<Branch> follow(const PotentialModel& model, const Branch& branch, const Vec& x, double t) {
  return std::visit(
      overloaded{
          [&](const HopfLaxPotential& m) { return m.follow(branch, x, t); },
          [&](const FiniteMinFamily& m) -> std::optional<Branch> {
            const auto i = static_cast<std::size_t>(branch.key[0]);
            if (!m.branches()[i].defined_at(t)) return std::nullopt;
            return m.branch(i, x, t);
          },
          [&](const LocalLinearModel& m) -> std::optional<Branch> {
            return m.evaluate_branches(x, t)[static_cast<std::size_t>(branch.key[0])];
          },
          [&](const A3EndpointModel& m) { return a3_follow(m, branch, x, t); },
      },
      model);
}

double evaluate(const PotentialModel& model, const Vec& x, double t) {
  if (const auto* hl = std::get_if<HopfLaxPotential>(&model)) return hl->evaluate(x, t);
  const auto bs = branches(model, x, t);
  double best = bs.front().value;
  for (const auto& b : bs) best = std::min(best, b.value);
  return best;
}

std::vector<Branch> active_branches(const PotentialModel& model, const Vec& x, double t, double tol) {
  auto bs = branches(model, x, t);
  if (bs.empty()) throw InvalidPotential("no branch attains the minimum");
  std::stable_sort(bs.begin(), bs.end(), [](const Branch& a, const Branch& b) { return a.value < b.value; });
  const double best = bs.front().value;
  std::vector<Branch> out;
  for (auto& b : bs)
    if (b.value <= best + tol) out.push_back(std::move(b));
  return out;
}

MomentumSet active_momenta(const PotentialModel& model, const Vec& x, double t, double tol) {
  std::vector<Momentum> ps;
  for (auto& b : active_branches(model, x, t, tol)) ps.push_back(std::move(b.momentum));
  return MomentumSet(std::move(ps));
}

Vec limit_velocity(const PotentialModel& model, const Vec& x, double t, double tol) {
  return min_enclosing_ball(active_momenta(model, x, t, tol)).center;
}

double default_tolerance(const PotentialModel& model) {
  if (const auto* hl = std::get_if<HopfLaxPotential>(&model)) return hl->default_tolerance();
  return 1e-9;
}

}  // namespace adhesion

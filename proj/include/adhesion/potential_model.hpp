#pragma once

#include "adhesion/a3_endpoint.hpp"
#include "adhesion/convex_core.hpp"
#include "adhesion/limit_potential.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace adhesion {

/// Any representation of the limit potential. LocalLinearModel and
/// A3EndpointModel read (x, t) as local coordinates (q, tau).
using PotentialModel = std::variant<HopfLaxPotential, FiniteMinFamily, LocalLinearModel, A3EndpointModel>;

int dimension(const PotentialModel& model);
double evaluate(const PotentialModel& model, const Vec& x, double t);

/// Candidate branches at (x, t); the global minimum is the smallest value.
std::vector<Branch> branches(const PotentialModel& model, const Vec& x, double t);
/// The same branch continued to (x, t); empty when it ceased to exist.
std::optional<Branch> follow(const PotentialModel& model, const Branch& branch, const Vec& x, double t);

/// Branches within tol of the minimum value, lowest first.
std::vector<Branch> active_branches(const PotentialModel& model, const Vec& x, double t, double tol);
MomentumSet active_momenta(const PotentialModel& model, const Vec& x, double t, double tol);
Vec limit_velocity(const PotentialModel& model, const Vec& x, double t, double tol);

/// Model-specific default activation tolerance.
double default_tolerance(const PotentialModel& model);

}  // namespace adhesion

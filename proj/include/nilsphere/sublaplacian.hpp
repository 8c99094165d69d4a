#pragma once

// Left-invariant second derivatives X_i^2 f(n) = d^2/dt^2 f(n exp(t X_i)) at
// t = 0 and the sub-Laplacian L = -sum_i X_i^2, by central differences.

#include "nilsphere/haar.hpp"
#include "nilsphere/lie.hpp"

#include <functional>

namespace nilsphere {

inline constexpr double kDefaultFdStep = 1e-2;

using GroupFn = std::function<Complex(const GroupPoint&)>;

/// Five-point second difference of t -> f(n exp(t X_i)), zero-based i.
Complex second_derivative(const GroupFn& f, const GroupPoint& n, int i, double h = kDefaultFdStep);

/// -sum_i second_derivative(f, n, i, h).
Complex sublap_apply(const GroupFn& f, const GroupPoint& n, double h = kDefaultFdStep);

/// Richardson combination (16 D(h/2) - D(h)) / 15 of the five-point stencil.
Complex second_derivative_richardson(const GroupFn& f, const GroupPoint& n, int i, double h = kDefaultFdStep);
Complex sublap_apply_richardson(const GroupFn& f, const GroupPoint& n, double h = kDefaultFdStep);

}  // namespace nilsphere

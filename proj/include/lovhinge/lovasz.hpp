#pragma once

#include <span>
#include <vector>

#include "lovhinge/set_function.hpp"

namespace lovhinge {

/// Permutation sorting s into decreasing order, stable with ties broken by
/// ascending original index.  Entries are 0-based element indices.
std::vector<int> sort_decreasing(std::span<const double> s);

/// Piecewise-linear extension of a normalized set function: with pi sorting s
/// decreasing, sum_j s[pi_j] * (l(prefix_j) - l(prefix_{j-1})).  Defined for
/// any real s as the positively homogeneous continuation; on 0/1 indicator
/// vectors it reproduces l of the indicated set.  Requires l(empty) = 0.
double lovasz_extension(const SetFunction& l, std::span<const double> s);

/// Chain increments mu[pi_j] = l(prefix_j) - l(prefix_{j-1}) along the
/// decreasing sort of s.  For submodular l this is a maximizer of <s, mu>
/// over the base polyhedron, and <s, mu> equals the extension value.
std::vector<double> greedy_subgradient(const SetFunction& l, std::span<const double> s);

/// True iff sum_{i in A} mu_i <= l(A) for every subset and the total equals
/// l(V), within tol.  Requires p <= 16.
bool in_base_polyhedron(const SetFunction& l, std::span<const double> mu,
                        double tol = kStructuralTol);

/// Hinge margins s_j = 1 - g_j * y_j.
std::vector<double> margins(const LabelVector& y, std::span<const double> g);

/// Convex surrogate for a normalized submodular loss.  Dispatches on the
/// resolved monotonicity: increasing losses threshold each margin component
/// at zero, otherwise the whole sum is thresholded.  Throws
/// std::invalid_argument for non-submodular or non-normalized l.
double lovasz_hinge(const SetFunction& l, const LabelVector& y,
                    std::span<const double> g);

/// Subgradient of lovasz_hinge with respect to g.  At kinks (a margin
/// component at zero, or the unthresholded sum at zero) the flat side is
/// returned, matching the usual hinge-loss convention.
std::vector<double> lovasz_hinge_subgradient(const SetFunction& l,
                                             const LabelVector& y,
                                             std::span<const double> g);

/// Component-thresholded variant applied regardless of monotonicity.  For
/// non-increasing losses this surface is not convex; it exists as a probe
/// target, not a training objective.
double lovasz_hinge_thresholded(const SetFunction& l, const LabelVector& y,
                                std::span<const double> g);

}  // namespace lovhinge

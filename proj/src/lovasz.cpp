#include "lovhinge/lovasz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lovhinge {

namespace {

void require_finite(std::span<const double> s, const char* what) {
  for (double v : s)
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

void require_normalized(const SetFunction& l, const char* what) {
  if (!l.is_normalized())
    throw std::invalid_argument(std::string(what) +
                                ": set function is not normalized (l(empty) != 0)");
}

void require_sizes(const SetFunction& l, std::span<const double> s, const char* what) {
  if (static_cast<int>(s.size()) != l.ground_size())
    throw std::invalid_argument(std::string(what) + ": vector length does not match ground set");
}

// The hinge is defined for submodular losses; modular counts as submodular.
void require_submodular(const SetFunction& l, const char* what) {
  const Modularity mod = l.resolved_modularity();
  if (mod != Modularity::submodular && mod != Modularity::modular)
    throw std::invalid_argument(std::string(what) + ": loss is not submodular");
}

// Chain increments along the decreasing sort; shared by the evaluation and
// subgradient paths so their arithmetic is identical.
struct Chain {
  std::vector<int> order;
  std::vector<double> increments;  // increments[j] pairs with order[j]
};

Chain build_chain(const SetFunction& l, std::span<const double> s) {
  Chain c;
  c.order = sort_decreasing(s);
  c.increments.resize(c.order.size());
  SubsetMask prefix = 0;
  double prev = l(0);
  for (std::size_t j = 0; j < c.order.size(); ++j) {
    prefix |= SubsetMask{1} << c.order[j];
    const double cur = l(prefix);
    c.increments[j] = cur - prev;
    prev = cur;
  }
  return c;
}

}  // namespace

std::vector<int> sort_decreasing(std::span<const double> s) {
  require_finite(s, "sort_decreasing");
  std::vector<int> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return s[a] > s[b]; });
  return order;
}

double lovasz_extension(const SetFunction& l, std::span<const double> s) {
  require_sizes(l, s, "lovasz_extension");
  require_normalized(l, "lovasz_extension");
  const Chain c = build_chain(l, s);
  double total = 0.0;
  for (std::size_t j = 0; j < c.order.size(); ++j)
    total += s[c.order[j]] * c.increments[j];
  return total;
}

std::vector<double> greedy_subgradient(const SetFunction& l, std::span<const double> s) {
  require_sizes(l, s, "greedy_subgradient");
  require_normalized(l, "greedy_subgradient");
  const Chain c = build_chain(l, s);
  std::vector<double> mu(s.size());
  for (std::size_t j = 0; j < c.order.size(); ++j) mu[c.order[j]] = c.increments[j];
  return mu;
}

bool in_base_polyhedron(const SetFunction& l, std::span<const double> mu, double tol) {
  require_sizes(l, mu, "in_base_polyhedron");
  if (l.ground_size() > kBruteForceMaxGround)
    throw std::invalid_argument("in_base_polyhedron: ground set exceeds the brute-force cap");
  const int p = l.ground_size();
  const SubsetMask n = SubsetMask{1} << p;
  // sums[a] accumulates mu over the bits of a via the lowest-bit recurrence.
  std::vector<double> sums(n, 0.0);
  for (SubsetMask a = 1; a < n; ++a) {
    const int low = std::countr_zero(a);
    sums[a] = sums[a & (a - 1)] + mu[low];
    if (sums[a] > l(a) + tol) return false;
  }
  return std::abs(sums[n - 1] - l(n - 1)) <= tol;
}

std::vector<double> margins(const LabelVector& y, std::span<const double> g) {
  if (y.size() != g.size())
    throw std::invalid_argument("margins: label/score length mismatch");
  require_finite(g, "margins");
  std::vector<double> s(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) s[j] = 1.0 - g[j] * y[j];
  return s;
}

double lovasz_hinge(const SetFunction& l, const LabelVector& y,
                    std::span<const double> g) {
  require_normalized(l, "lovasz_hinge");
  require_submodular(l, "lovasz_hinge");
  const std::vector<double> s = margins(y, g);
  const Chain c = build_chain(l, s);
  if (l.resolved_monotonicity() == Monotonicity::increasing) {
    double total = 0.0;
    for (std::size_t j = 0; j < c.order.size(); ++j)
      total += std::max(s[c.order[j]], 0.0) * c.increments[j];
    return total;
  }
  double total = 0.0;
  for (std::size_t j = 0; j < c.order.size(); ++j)
    total += s[c.order[j]] * c.increments[j];
  return std::max(total, 0.0);
}

std::vector<double> lovasz_hinge_subgradient(const SetFunction& l,
                                             const LabelVector& y,
                                             std::span<const double> g) {
  require_normalized(l, "lovasz_hinge_subgradient");
  require_submodular(l, "lovasz_hinge_subgradient");
  const std::vector<double> s = margins(y, g);
  const Chain c = build_chain(l, s);
  std::vector<double> grad(s.size(), 0.0);
  if (l.resolved_monotonicity() == Monotonicity::increasing) {
    for (std::size_t j = 0; j < c.order.size(); ++j) {
      const int idx = c.order[j];
      if (s[idx] > 0.0) grad[idx] = -static_cast<double>(y[idx]) * c.increments[j];
    }
    return grad;
  }
  double total = 0.0;
  for (std::size_t j = 0; j < c.order.size(); ++j)
    total += s[c.order[j]] * c.increments[j];
  if (total > 0.0) {
    for (std::size_t j = 0; j < c.order.size(); ++j) {
      const int idx = c.order[j];
      grad[idx] = -static_cast<double>(y[idx]) * c.increments[j];
    }
  }
  return grad;
}

double lovasz_hinge_thresholded(const SetFunction& l, const LabelVector& y,
                                std::span<const double> g) {
  require_normalized(l, "lovasz_hinge_thresholded");
  const std::vector<double> s = margins(y, g);
  const Chain c = build_chain(l, s);
  double total = 0.0;
  for (std::size_t j = 0; j < c.order.size(); ++j)
    total += std::max(s[c.order[j]], 0.0) * c.increments[j];
  return total;
}

}  // namespace lovhinge

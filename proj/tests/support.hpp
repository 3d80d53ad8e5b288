#pragma once

// Shared generators and independent oracles for the test suites.  The oracles
// recompute expected values through routes that do not share code with the
// implementation paths they check: permutation enumeration instead of
// sorting, labeling recursion instead of mask loops, finite differences
// instead of the analytic subgradient.

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "lovhinge/losses.hpp"
#include "lovhinge/model.hpp"
#include "lovhinge/rng.hpp"
#include "lovhinge/set_function.hpp"

namespace lovhinge::testing {

// --- visualization loss tables -------------------------------------------

inline SetFunction vis_table(double l12) {
  return build_loss(LossSpec::table_loss(2, {0.0, 1.0, 1.0, l12}));
}

inline SetFunction vis_increasing() { return vis_table(1.2); }
inline SetFunction vis_nonmonotonic() { return vis_table(0.4); }
inline SetFunction vis_supermodular() { return vis_table(2.8); }

// --- independent oracles ---------------------------------------------------

// Max over all p! permutations of the chain sum; each candidate is
// accumulated in permutation order, the same arithmetic shape the greedy
// path uses.
inline double permutation_chain_max(const SetFunction& l, std::span<const double> s) {
  const int p = l.ground_size();
  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  do {
    SubsetMask prefix = 0;
    double prev = l(0);
    double total = 0.0;
    for (int j = 0; j < p; ++j) {
      prefix |= SubsetMask{1} << perm[j];
      const double cur = l(prefix);
      total += s[perm[j]] * (cur - prev);
      prev = cur;
    }
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Loss-augmented maxima by recursion over labelings; scores and losses are
// combined through inner products on label vectors, not mask arithmetic.
inline double enumerate_labelings(const SetFunction& l, const LabelVector& y,
                                  std::span<const double> g, bool slack,
                                  double gamma = 1.0) {
  const int p = l.ground_size();
  double g_dot_y = 0.0;
  for (int j = 0; j < p; ++j) g_dot_y += g[j] * y[j];
  LabelVector yt(p, +1);
  double best = -std::numeric_limits<double>::infinity();
  const std::function<void(int)> rec = [&](int j) {
    if (j == p) {
      const double delta = l(misprediction_set(y, yt));
      double g_dot_yt = 0.0;
      for (int i = 0; i < p; ++i) g_dot_yt += g[i] * yt[i];
      const double margin_term = g_dot_yt - g_dot_y;
      best = std::max(best, slack ? delta * (1.0 + margin_term)
                                  : gamma * delta + margin_term);
      return;
    }
    yt[j] = +1;
    rec(j + 1);
    yt[j] = -1;
    rec(j + 1);
  };
  rec(0);
  return best;
}

inline double margin_oracle(const SetFunction& l, const LabelVector& y,
                            std::span<const double> g, double gamma = 1.0) {
  return enumerate_labelings(l, y, g, false, gamma);
}

inline double slack_oracle(const SetFunction& l, const LabelVector& y,
                           std::span<const double> g) {
  return enumerate_labelings(l, y, g, true);
}

// Scale bound for margin rescaling by direct scan over nonempty subset pairs.
inline double gamma_bound_oracle(const SetFunction& l) {
  const SubsetMask n = SubsetMask{1} << l.ground_size();
  double bound = std::numeric_limits<double>::infinity();
  for (SubsetMask i1 = 1; i1 < n; ++i1)
    for (SubsetMask i2 = 1; i2 < n; ++i2)
      if (l(i2) < l(i1))
        bound = std::min(bound, 2.0 * mask_cardinality(i1 & ~i2) / (l(i1) - l(i2)));
  return bound;
}

inline std::vector<double> finite_difference_gradient(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> g, double h) {
  std::vector<double> grad(g.size());
  std::vector<double> probe(g.begin(), g.end());
  for (std::size_t j = 0; j < g.size(); ++j) {
    probe[j] = g[j] + h;
    const double up = f(probe);
    probe[j] = g[j] - h;
    const double down = f(probe);
    probe[j] = g[j];
    grad[j] = (up - down) / (2.0 * h);
  }
  return grad;
}

// --- random instances -------------------------------------------------------

// Normalized increasing submodular function built from concave-of-coverage
// terms plus a nonnegative modular part, rescaled so l(V) stays below
// range_cap.  Keeping the range below 2 also keeps margin and slack
// rescaling tight at gamma = 1 (marginals never exceed the +-1 labeling
// geometry), which the dominance property relies on.
inline SetFunction random_increasing_submodular(int p, Rng& rng,
                                                double range_cap = 1.8) {
  struct Term {
    SubsetMask support;
    double weight;
    int cap;        // cardinality cap; 0 selects the exponential shape
  };
  const SubsetMask full = (SubsetMask{1} << p) - 1;
  std::vector<Term> terms;
  const int n_terms = 1 + static_cast<int>(rng.integer(3));
  for (int k = 0; k < n_terms; ++k) {
    Term t;
    t.support = 1 + rng.integer(full);  // nonempty
    t.weight = rng.uniform(0.2, 1.0);
    const int size = mask_cardinality(t.support);
    t.cap = rng.bernoulli(0.5) ? 1 + static_cast<int>(rng.integer(size)) : 0;
    terms.push_back(t);
  }
  std::vector<double> modular(p);
  for (int j = 0; j < p; ++j) modular[j] = rng.uniform(0.0, 0.3);

  auto raw = [terms, modular](SubsetMask a) {
    double v = 0.0;
    for (const Term& t : terms) {
      const int hit = mask_cardinality(a & t.support);
      v += t.weight * (t.cap > 0 ? std::min(hit, t.cap)
                                 : 1.0 - std::exp(-static_cast<double>(hit)));
    }
    SubsetMask rest = a;
    while (rest) {
      v += modular[std::countr_zero(rest)];
      rest &= rest - 1;
    }
    return v;
  };
  double top = raw(full);
  const double scale = rng.uniform(0.5, 1.0) * range_cap / top;
  return SetFunction(
      p, [raw, scale](SubsetMask a) { return raw(a) * scale; },
      Monotonicity::increasing, Modularity::submodular);
}

// Normalized nonnegative submodular function without a monotonicity
// guarantee: a random weighted cut plus a damped increasing part and a
// strictly concave cardinality term.  Cut functions vanish on the full set,
// so the mix is usually non-monotonic; the strictly concave term makes every
// submodularity inequality strict, which in turn makes the decreasing sort
// the unique chain maximizer for tie-free score vectors.
inline SetFunction random_submodular(int p, Rng& rng) {
  struct Edge {
    int u, v;
    double weight;
  };
  std::vector<Edge> edges;
  for (int u = 0; u < p; ++u)
    for (int v = u + 1; v < p; ++v)
      if (rng.bernoulli(0.6)) edges.push_back({u, v, rng.uniform(0.05, 0.5)});
  if (edges.empty()) edges.push_back({0, p - 1, rng.uniform(0.05, 0.5)});
  const SetFunction base = random_increasing_submodular(p, rng, rng.uniform(0.0, 0.6));
  const double strict_weight = rng.uniform(0.1, 0.5);
  const double strict_rate = rng.uniform(0.2, 0.6);
  return SetFunction(
      p,
      [edges, base, strict_weight, strict_rate](SubsetMask a) {
        double v = base(a);
        v += strict_weight * (1.0 - std::exp(-strict_rate * mask_cardinality(a)));
        for (const Edge& e : edges) {
          const bool in_u = (a >> e.u) & 1;
          const bool in_v = (a >> e.v) & 1;
          if (in_u != in_v) v += e.weight;
        }
        return v;
      },
      Monotonicity::unknown, Modularity::submodular);
}

inline SetFunction random_nonmonotonic_submodular(int p, Rng& rng) {
  for (;;) {
    SetFunction l = random_submodular(p, rng);
    if (!is_increasing(l).increasing) return l;
  }
}

inline LabelVector random_labels(int p, Rng& rng) {
  LabelVector y(p);
  for (int j = 0; j < p; ++j) y[j] = rng.bernoulli(0.5) ? +1 : -1;
  return y;
}

inline std::vector<double> random_vector(int p, Rng& rng, double lo, double hi) {
  std::vector<double> v(p);
  for (int j = 0; j < p; ++j) v[j] = rng.uniform(lo, hi);
  return v;
}

// --- datasets ---------------------------------------------------------------

// Two bags, p = 2, d = 2, orthogonal per-slot features with opposite labels;
// linearly separable per slot.
inline std::vector<Bag> separable_toy() {
  Bag a;
  a.features = Matrix(2, 2);
  a.features.at(0, 0) = 1.0;
  a.features.at(1, 1) = 1.0;
  a.labels = {+1, -1};
  Bag b;
  b.features = Matrix(2, 2);
  b.features.at(0, 0) = -1.0;
  b.features.at(1, 1) = -1.0;
  b.labels = {-1, +1};
  return {a, b};
}

// --- independent per-element hinge trainer ----------------------------------

// Deterministic full-batch subgradient descent on
//   1/2 |w|^2 + c_eff * (1/n) sum_i sum_j (1 - y_ij <w_j, x_ij>)_+
// used as the reference SVM for the coincidence checks.  Shares nothing with
// the library's training stack.
struct HingeSvmResult {
  Matrix weights;
  double objective = 0.0;
};

inline double hinge_objective(const Matrix& w, std::span<const Bag> data,
                              double c_eff) {
  double risk = 0.0;
  for (const Bag& bag : data)
    for (int j = 0; j < w.rows; ++j) {
      double g = 0.0;
      for (int c = 0; c < w.cols; ++c) g += w.at(j, c) * bag.features.at(j, c);
      risk += std::max(0.0, 1.0 - bag.labels[j] * g);
    }
  risk /= static_cast<double>(data.size());
  double reg = 0.0;
  for (double x : w.data) reg += x * x;
  return 0.5 * reg + c_eff * risk;
}

inline HingeSvmResult independent_hinge_svm(std::span<const Bag> data, double c_eff,
                                            int iterations) {
  const int p = data.front().features.rows;
  const int d = data.front().features.cols;
  const double lambda = 1.0 / c_eff;
  Matrix w(p, d);
  Matrix best = w;
  double best_objective = hinge_objective(w, data, c_eff);
  for (int t = 1; t <= iterations; ++t) {
    Matrix grad(p, d);
    for (double& x : grad.data) x = 0.0;
    for (const Bag& bag : data)
      for (int j = 0; j < p; ++j) {
        double g = 0.0;
        for (int c = 0; c < d; ++c) g += w.at(j, c) * bag.features.at(j, c);
        if (bag.labels[j] * g < 1.0)
          for (int c = 0; c < d; ++c)
            grad.at(j, c) -= bag.labels[j] * bag.features.at(j, c);
      }
    const double inv_n = 1.0 / static_cast<double>(data.size());
    const double eta = 1.0 / (lambda * (t + 10.0));
    for (std::size_t c = 0; c < w.data.size(); ++c)
      w.data[c] -= eta * (lambda * w.data[c] + inv_n * grad.data[c]);
    const double objective = hinge_objective(w, data, c_eff);
    if (objective < best_objective) {
      best_objective = objective;
      best = w;
    }
  }
  return {best, best_objective};
}

}  // namespace lovhinge::testing

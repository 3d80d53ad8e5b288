#include "lovhinge/surrogates.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "lovhinge/lovasz.hpp"
#include "lovhinge/rng.hpp"

namespace lovhinge {

namespace {

void require_label_sizes(const SetFunction& l, const LabelVector& y,
                         std::span<const double> g, const char* what) {
  if (static_cast<int>(y.size()) != l.ground_size() ||
      static_cast<int>(g.size()) != l.ground_size())
    throw std::invalid_argument(std::string(what) + ": size mismatch with ground set");
}

double flip_alignment(std::span<const double> g, const LabelVector& y, SubsetMask m) {
  // sum of g_j y_j over the flipped positions
  double s = 0.0;
  while (m) {
    const int j = std::countr_zero(m);
    s += g[j] * y[j];
    m &= m - 1;
  }
  return s;
}

LabelVector flipped_labels(const LabelVector& y, SubsetMask m) {
  LabelVector yt = y;
  while (m) {
    const int j = std::countr_zero(m);
    yt[j] = -yt[j];
    m &= m - 1;
  }
  return yt;
}

// Loss-augmented objectives as a function of the misprediction mask.
// <g, yt> - <g, y> = -2 * flip_alignment over the mask.
struct MarginObjective {
  const SetFunction& l;
  double gamma;
  std::span<const double> g;
  const LabelVector& y;
  double operator()(SubsetMask m, double align) const { return gamma * l(m) - 2.0 * align; }
};

struct SlackObjective {
  const SetFunction& l;
  std::span<const double> g;
  const LabelVector& y;
  double operator()(SubsetMask m, double align) const { return l(m) * (1.0 - 2.0 * align); }
};

template <class Objective>
InferenceResult exact_argmax(const Objective& obj, const SetFunction& l,
                             const LabelVector& y, std::span<const double> g) {
  const int p = l.ground_size();
  if (p > kExactInferenceMaxGround)
    throw std::invalid_argument("exact inference: ground set exceeds the 2^p cap (p <= 20)");
  const SubsetMask n = SubsetMask{1} << p;
  SubsetMask best_mask = 0;
  double best = obj(0, 0.0);
  for (SubsetMask m = 1; m < n; ++m) {
    const double v = obj(m, flip_alignment(g, y, m));
    if (v > best) {
      best = v;
      best_mask = m;
    }
  }
  return {best, flipped_labels(y, best_mask)};
}

template <class Objective>
InferenceResult greedy_argmax(const Objective& obj, const SetFunction& l,
                              const LabelVector& y, std::span<const double> g) {
  const int p = l.ground_size();
  SubsetMask cur = 0;
  double align = 0.0;
  double value = obj(cur, align);
  for (int step = 0; step < p * p; ++step) {
    int best_j = -1;
    double best_value = value;
    for (int j = 0; j < p; ++j) {
      const SubsetMask bit = SubsetMask{1} << j;
      const double sign = (cur & bit) ? -1.0 : 1.0;
      const double v = obj(cur ^ bit, align + sign * g[j] * y[j]);
      if (v > best_value) {
        best_value = v;
        best_j = j;
      }
    }
    if (best_j < 0) break;
    const SubsetMask bit = SubsetMask{1} << best_j;
    align += ((cur & bit) ? -1.0 : 1.0) * g[best_j] * y[best_j];
    cur ^= bit;
    value = best_value;
  }
  return {value, flipped_labels(y, cur)};
}

}  // namespace

InferenceResult margin_rescale_value(const SetFunction& l, const LabelVector& y,
                                     std::span<const double> g, Inference inference,
                                     double gamma) {
  require_label_sizes(l, y, g, "margin_rescale_value");
  if (!(gamma > 0.0)) throw std::invalid_argument("margin_rescale_value: gamma must be positive");
  const MarginObjective obj{l, gamma, g, y};
  return inference == Inference::exact ? exact_argmax(obj, l, y, g)
                                       : greedy_argmax(obj, l, y, g);
}

InferenceResult slack_rescale_value(const SetFunction& l, const LabelVector& y,
                                    std::span<const double> g, Inference inference) {
  require_label_sizes(l, y, g, "slack_rescale_value");
  const SlackObjective obj{l, g, y};
  return inference == Inference::exact ? exact_argmax(obj, l, y, g)
                                       : greedy_argmax(obj, l, y, g);
}

double max_margin_gamma(const SetFunction& l) {
  if (l.ground_size() > kBruteForceMaxGround)
    throw std::invalid_argument("max_margin_gamma: ground set exceeds the brute-force cap");
  if (!l.is_normalized())
    throw std::invalid_argument("max_margin_gamma: set function is not normalized");
  if (l.resolved_monotonicity() != Monotonicity::increasing)
    throw std::invalid_argument("max_margin_gamma: loss is not increasing");
  const SubsetMask n = SubsetMask{1} << l.ground_size();
  double best = std::numeric_limits<double>::infinity();
  for (SubsetMask i1 = 1; i1 < n; ++i1) {
    const double l1 = l(i1);
    for (SubsetMask i2 = 1; i2 < n; ++i2) {
      const double l2 = l(i2);
      if (!(l2 < l1)) continue;
      const int outside = mask_cardinality(i1 & ~i2);
      if (outside == 0) continue;  // cannot happen for increasing l
      best = std::min(best, 2.0 * outside / (l1 - l2));
    }
  }
  return best;
}

std::vector<double> vertex_scores(SubsetMask vertex, const LabelVector& y) {
  if (vertex >> y.size())
    throw std::invalid_argument("vertex_scores: mask has bits outside the label vector");
  std::vector<double> g(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double u = (vertex >> j) & 1 ? 1.0 : 0.0;
    g[j] = (1.0 - u) * y[j];
  }
  return g;
}

double surrogate_value(const SurrogateKind& kind, const SetFunction& l,
                       const LabelVector& y, std::span<const double> g) {
  switch (kind.tag) {
    case SurrogateTag::lovasz_hinge:
      return lovasz_hinge(l, y, g);
    case SurrogateTag::margin_rescale:
      return margin_rescale_value(l, y, g, Inference::exact, kind.gamma).value;
    case SurrogateTag::slack_rescale:
      return slack_rescale_value(l, y, g, Inference::exact).value;
  }
  throw std::logic_error("surrogate_value: unreachable");
}

ExtensionReport is_extension(const SurrogateKind& kind, const SetFunction& l,
                             const LabelVector& y, double tol) {
  if (l.ground_size() > kBruteForceMaxGround)
    throw std::invalid_argument("is_extension: ground set exceeds the brute-force cap");
  if (static_cast<int>(y.size()) != l.ground_size())
    throw std::invalid_argument("is_extension: label length mismatch");
  const bool margin = kind.tag == SurrogateTag::margin_rescale;
  const double scale = margin ? kind.gamma : 1.0;
  const SubsetMask n = SubsetMask{1} << l.ground_size();
  ExtensionReport report;
  report.extension = true;
  for (SubsetMask vertex = margin ? 1 : 0; vertex < n; ++vertex) {
    const std::vector<double> g = vertex_scores(vertex, y);
    const double sv = surrogate_value(kind, l, y, g);
    const double target = scale * l(vertex);
    if (std::abs(sv - target) > tol) {
      report.extension = false;
      report.witnesses.push_back({vertex, sv, target});
    }
  }
  return report;
}

ConvexityReport midpoint_convexity_probe(
    const std::function<double(std::span<const double>)>& f, int p, int n_trials,
    std::uint64_t seed, double lo, double hi, double tol) {
  Rng rng(seed);
  std::vector<double> a(p), b(p), mid(p);
  for (int t = 0; t < n_trials; ++t) {
    for (int j = 0; j < p; ++j) a[j] = rng.uniform(lo, hi);
    for (int j = 0; j < p; ++j) b[j] = rng.uniform(lo, hi);
    const double lambda = rng.uniform();
    for (int j = 0; j < p; ++j) mid[j] = lambda * a[j] + (1.0 - lambda) * b[j];
    const double chord = lambda * f(a) + (1.0 - lambda) * f(b);
    const double at_mid = f(mid);
    if (chord < at_mid - tol)
      return {false, ConvexityWitness{a, b, lambda, chord, at_mid}};
  }
  return {true, std::nullopt};
}

ConvexityReport convexity_probe(const SurrogateKind& kind, const SetFunction& l,
                                const LabelVector& y, int n_trials,
                                std::uint64_t seed) {
  auto f = [&](std::span<const double> g) { return surrogate_value(kind, l, y, g); };
  return midpoint_convexity_probe(f, l.ground_size(), n_trials, seed);
}

DominanceReport dominance_check(const SetFunction& l, const LabelVector& y,
                                int n_points, std::uint64_t seed, double tol) {
  const Modularity mod = l.resolved_modularity();
  if (mod != Modularity::submodular && mod != Modularity::modular)
    throw std::invalid_argument("dominance_check: loss is not submodular");
  const int p = l.ground_size();
  Rng rng(seed);
  std::vector<double> s(p), g(p);
  for (int t = 0; t < n_points; ++t) {
    for (int j = 0; j < p; ++j) s[j] = rng.uniform();
    for (int j = 0; j < p; ++j) g[j] = (1.0 - s[j]) * y[j];
    const double lh = lovasz_hinge(l, y, g);
    const double m = margin_rescale_value(l, y, g, Inference::exact).value;
    const double sl = slack_rescale_value(l, y, g, Inference::exact).value;
    if (lh < m - tol || lh < sl - tol)
      return {false, DominanceWitness{s, lh, m, sl}};
  }
  return {true, std::nullopt};
}

std::vector<SurfaceRow> surface_grid(const SurrogateKind& kind, const SetFunction& l,
                                     double grid_min, double grid_max, int resolution) {
  if (l.ground_size() != 2)
    throw std::invalid_argument("surface_grid: requires a two-element ground set");
  if (resolution < 2) throw std::invalid_argument("surface_grid: resolution must be >= 2");
  if (!(grid_max > grid_min))
    throw std::invalid_argument("surface_grid: empty grid range");
  const LabelVector y{+1, +1};
  std::vector<SurfaceRow> rows;
  rows.reserve(static_cast<std::size_t>(resolution) * resolution);
  std::vector<double> g(2);
  for (int i = 0; i < resolution; ++i) {
    const double s1 = grid_min + (grid_max - grid_min) * i / (resolution - 1);
    for (int j = 0; j < resolution; ++j) {
      const double s2 = grid_min + (grid_max - grid_min) * j / (resolution - 1);
      g[0] = (1.0 - s1) * y[0];
      g[1] = (1.0 - s2) * y[1];
      rows.push_back({s1, s2, surrogate_value(kind, l, y, g)});
    }
  }
  return rows;
}

void write_surface_csv(std::ostream& os, std::span<const SurfaceRow> rows) {
  os << "s1,s2,value\n";
  char buf[96];
  for (const SurfaceRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.9f,%.9f,%.9f\n", r.s1, r.s2, r.value);
    os << buf;
  }
}

}  // namespace lovhinge

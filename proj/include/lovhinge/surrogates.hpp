#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "lovhinge/set_function.hpp"

namespace lovhinge {

enum class SurrogateTag { lovasz_hinge, margin_rescale, slack_rescale };
enum class Inference { exact, greedy };

// Exact loss-augmented inference enumerates all 2^p labelings.
inline constexpr int kExactInferenceMaxGround = 20;

struct SurrogateKind {
  SurrogateTag tag = SurrogateTag::lovasz_hinge;
  Inference inference = Inference::exact;
  double gamma = 1.0;  // loss scale, used by margin rescaling
};

struct InferenceResult {
  double value = 0.0;
  LabelVector argmax;
};

/// max over labelings of  gamma*l(I) + <g, yt> - <g, y>, I the mispredicted
/// set.  Exact mode enumerates (p <= 20); greedy mode ascends from yt = y by
/// single-label flips, taking the best positive gain each step (ties to the
/// lowest index), for at most p^2 flips.
InferenceResult margin_rescale_value(const SetFunction& l, const LabelVector& y,
                                     std::span<const double> g, Inference inference,
                                     double gamma = 1.0);

/// max over labelings of  l(I) * (1 + <g, yt> - <g, y>), same inference modes.
InferenceResult slack_rescale_value(const SetFunction& l, const LabelVector& y,
                                    std::span<const double> g, Inference inference);

/// Largest loss scale for which margin rescaling stays tight at every
/// nonempty misprediction vertex: min over nonempty pairs with l(I2) < l(I1)
/// of 2|I1 \ I2| / (l(I1) - l(I2)); +infinity when no such pair exists.
/// Requires an increasing normalized l with p <= 16.
double max_margin_gamma(const SetFunction& l);

/// Scores that realize hypercube vertex I under the margin mapping:
/// g_j = (1 - u_j) y_j with u the indicator of I.
std::vector<double> vertex_scores(SubsetMask vertex, const LabelVector& y);

/// Surrogate value at (y, g); margin and slack use exact inference here.
double surrogate_value(const SurrogateKind& kind, const SetFunction& l,
                       const LabelVector& y, std::span<const double> g);

struct ExtensionWitness {
  SubsetMask vertex = 0;
  double surrogate = 0.0;
  double loss = 0.0;
};

struct ExtensionReport {
  bool extension = false;
  std::vector<ExtensionWitness> witnesses;
};

/// Compares the surrogate with the discrete loss at hypercube vertices under
/// the margin mapping (target gamma*l(I) for margin rescaling, l(I)
/// otherwise).  Margin rescaling is checked over nonempty vertices only: the
/// gamma rule keeps the surrogate tight on nonempty misprediction sets and
/// carries no guarantee at the origin vertex.  Requires p <= 16.
ExtensionReport is_extension(const SurrogateKind& kind, const SetFunction& l,
                             const LabelVector& y, double tol = kStructuralTol);

struct ConvexityWitness {
  std::vector<double> a;
  std::vector<double> b;
  double lambda = 0.0;
  double chord = 0.0;     // lambda f(a) + (1 - lambda) f(b)
  double midpoint = 0.0;  // f(lambda a + (1 - lambda) b)
};

struct ConvexityReport {
  bool convex = false;
  std::optional<ConvexityWitness> witness;
};

/// Midpoint-convexity check of an arbitrary evaluator over random triples in
/// a box in g-space.
ConvexityReport midpoint_convexity_probe(
    const std::function<double(std::span<const double>)>& f, int p, int n_trials,
    std::uint64_t seed, double lo = -2.0, double hi = 2.0,
    double tol = kStructuralTol);

/// Midpoint-convexity check of the chosen surrogate on (l, y).
ConvexityReport convexity_probe(const SurrogateKind& kind, const SetFunction& l,
                                const LabelVector& y, int n_trials,
                                std::uint64_t seed);

struct DominanceWitness {
  std::vector<double> s;
  double lovasz = 0.0;
  double margin = 0.0;
  double slack = 0.0;
};

struct DominanceReport {
  bool dominant = false;
  std::optional<DominanceWitness> witness;
};

/// Verifies that the Lovasz hinge is at least as large as margin and slack
/// rescaling (exact inference) at random interior points of the unit cube in
/// margin space.  Requires submodular l.
DominanceReport dominance_check(const SetFunction& l, const LabelVector& y,
                                int n_points, std::uint64_t seed,
                                double tol = kStructuralTol);

struct SurfaceRow {
  double s1 = 0.0;
  double s2 = 0.0;
  double value = 0.0;
};

/// Evaluates the surrogate over a regular grid in margin space for p = 2,
/// rows in row-major order (s1 outer, s2 inner); labels fixed to (+1, +1).
std::vector<SurfaceRow> surface_grid(const SurrogateKind& kind, const SetFunction& l,
                                     double grid_min, double grid_max, int resolution);

/// CSV with header "s1,s2,value" and fixed 9-decimal formatting.
void write_surface_csv(std::ostream& os, std::span<const SurfaceRow> rows);

}  // namespace lovhinge

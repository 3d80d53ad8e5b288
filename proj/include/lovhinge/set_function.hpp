#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace lovhinge {

// Subsets of the ground set V = {0, .., p-1} encoded as bitmasks: element j
// is in the subset iff bit j is set.
using SubsetMask = std::uint64_t;

// Per-element labels in {-1, +1}.
using LabelVector = std::vector<int>;

// Absolute tolerance for the brute-force structural checks; loss values in
// this library are O(1).
inline constexpr double kStructuralTol = 1e-9;

// Hard cap on the ground-set size for anything that enumerates 2^p subsets.
inline constexpr int kBruteForceMaxGround = 16;

enum class Monotonicity { increasing, non_monotonic, unknown };
enum class Modularity { submodular, modular, supermodular, unknown };

int mask_cardinality(SubsetMask a);

/// A real-valued set function over subsets of {0..p-1}, accessed through an
/// oracle.  Values are cached in a dense table at construction when p <= 16
/// and memoized lazily (with internal locking) above, so a constructed
/// instance can be shared freely across threads.
///
/// Copies are cheap: they share the immutable evaluation state.
class SetFunction {
 public:
  SetFunction() = default;
  SetFunction(int p, std::function<double(SubsetMask)> oracle,
              Monotonicity mono = Monotonicity::unknown,
              Modularity mod = Modularity::unknown);

  int ground_size() const;

  /// Oracle value l(A).  Throws std::invalid_argument if the mask has bits
  /// at or above ground_size().
  double value(SubsetMask a) const;
  double operator()(SubsetMask a) const { return value(a); }

  Monotonicity declared_monotonicity() const;
  Modularity declared_modularity() const;

  /// Declared flag when available, otherwise runs the brute-force verifier
  /// once (p <= 16 required) and caches the answer.
  Monotonicity resolved_monotonicity() const;
  Modularity resolved_modularity() const;

  bool is_normalized() const { return value(0) == 0.0; }

  /// l'(A) = l(A) - l(empty); idempotent.
  SetFunction normalized() const;

  /// c * l for c >= 0; keeps the declared structure flags.
  SetFunction scaled(double c) const;

  /// -l; swaps the declared sub/supermodular flags.
  SetFunction negated() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

struct PairWitness {
  SubsetMask a = 0;
  SubsetMask b = 0;
};

struct ElementWitness {
  SubsetMask set = 0;
  int element = -1;
};

struct SubmodularityReport {
  bool submodular = false;
  std::optional<PairWitness> witness;  // violating (A, B) when not submodular
};

struct MonotonicityReport {
  bool increasing = false;
  std::optional<ElementWitness> witness;  // (A, x) with l(A + x) < l(A)
};

/// Checks l(A) + l(B) >= l(A|B) + l(A&B) over all subset pairs.
/// Requires p <= 16.
SubmodularityReport is_submodular(const SetFunction& l,
                                  double tol = kStructuralTol);

/// Checks l(A + x) >= l(A) for every subset A and element x not in A.
/// Requires p <= 16.
MonotonicityReport is_increasing(const SetFunction& l,
                                 double tol = kStructuralTol);

/// Bitmask of positions where the two label vectors disagree.
SubsetMask misprediction_set(const LabelVector& truth,
                             const LabelVector& prediction);

}  // namespace lovhinge

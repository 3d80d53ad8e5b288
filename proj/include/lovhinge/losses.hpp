#pragma once

#include <string>
#include <vector>

#include "lovhinge/set_function.hpp"

namespace lovhinge {

// Built-in set losses over misprediction sets.
//
//   hamming               |I|
//   jaccard               1 - |P_y & P_yt| / |P_y | P_yt|
//   capped_weighted       min(l_max, sum_{j in I} beta_j)
//   concave_plus_modular  1 - exp(-|I|) + sum_{j in I} beta_j
//   exp_size              1 - exp(-alpha |I|)
//   sqrt_modular          sqrt(sum_{j in I} beta_j)
//   early_detection       sum_i exp(-(i+1)) * min(|I & {0..i}|, (i+1)/2)
//   table                 user-supplied value per mask
//
// For early_detection the ground-set index order is the chronological order.
enum class LossKind {
  hamming,
  jaccard,
  capped_weighted,
  concave_plus_modular,
  exp_size,
  sqrt_modular,
  early_detection,
  table,
};

struct LossSpec {
  LossKind kind = LossKind::hamming;
  int p = 0;
  std::vector<double> beta;   // per-element weights (capped_weighted,
                              // concave_plus_modular, sqrt_modular)
  double l_max = 0.0;         // capped_weighted cap
  double alpha = 1.0;         // exp_size rate
  std::vector<double> table;  // table variant: value per mask, size 2^p

  /// Throws std::invalid_argument when the parameters violate the variant's
  /// constraints (e.g. capped_weighted needs 0 < l_max < sum(beta), beta > 0).
  void validate() const;

  std::string name() const;

  static LossSpec hamming_loss(int p);
  static LossSpec jaccard_loss(int p);
  static LossSpec capped_weighted_loss(int p, std::vector<double> beta, double l_max);
  static LossSpec concave_plus_modular_loss(int p, std::vector<double> beta);
  static LossSpec exp_size_loss(int p, double alpha);
  static LossSpec sqrt_modular_loss(int p, std::vector<double> weights);
  static LossSpec early_detection_loss(int p);
  static LossSpec table_loss(int p, std::vector<double> values);
};

/// Loss value at a single misprediction mask.  The label vector matters only
/// for the jaccard variant, where flipped positives are false negatives and
/// flipped negatives false positives; jaccard requires at least one positive
/// label (std::domain_error otherwise).
double loss_value(const LossSpec& spec, const LabelVector& y, SubsetMask mispredictions);

/// The loss as a set function over misprediction masks.  Structure flags
/// (submodular/increasing) are declared for the built-in variants so callers
/// do not pay for brute-force verification.
SetFunction build_loss(const LossSpec& spec, const LabelVector& y);

/// Convenience overload for label-independent variants; jaccard is built
/// against the all-positive labeling.
SetFunction build_loss(const LossSpec& spec);

}  // namespace lovhinge

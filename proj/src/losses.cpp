#include "lovhinge/losses.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lovhinge {

namespace {

void require_p(const LossSpec& spec) {
  if (spec.p < 1 || spec.p > 63)
    throw std::invalid_argument("LossSpec: p must be in [1, 63]");
}

double weighted_sum(const std::vector<double>& beta, SubsetMask m) {
  double s = 0.0;
  while (m) {
    const int j = std::countr_zero(m);
    s += beta[j];
    m &= m - 1;
  }
  return s;
}

}  // namespace

void LossSpec::validate() const {
  require_p(*this);
  switch (kind) {
    case LossKind::hamming:
    case LossKind::jaccard:
    case LossKind::early_detection:
      break;
    case LossKind::capped_weighted: {
      if (static_cast<int>(beta.size()) != p)
        throw std::invalid_argument("capped_weighted: beta must have p entries");
      double total = 0.0;
      for (double b : beta) {
        if (!(b > 0.0))
          throw std::invalid_argument("capped_weighted: beta must be positive componentwise");
        total += b;
      }
      if (!(l_max > 0.0) || !(l_max < total))
        throw std::invalid_argument("capped_weighted: need 0 < l_max < sum(beta)");
      break;
    }
    case LossKind::concave_plus_modular:
      if (static_cast<int>(beta.size()) != p)
        throw std::invalid_argument("concave_plus_modular: beta must have p entries");
      break;
    case LossKind::exp_size:
      if (!(alpha > 0.0))
        throw std::invalid_argument("exp_size: alpha must be positive");
      break;
    case LossKind::sqrt_modular:
      if (static_cast<int>(beta.size()) != p)
        throw std::invalid_argument("sqrt_modular: weights must have p entries");
      for (double b : beta)
        if (!(b >= 0.0))
          throw std::invalid_argument("sqrt_modular: weights must be nonnegative");
      break;
    case LossKind::table:
      if (table.size() != (std::size_t{1} << p))
        throw std::invalid_argument("table: need exactly 2^p values");
      break;
  }
}

std::string LossSpec::name() const {
  switch (kind) {
    case LossKind::hamming: return "hamming";
    case LossKind::jaccard: return "jaccard";
    case LossKind::capped_weighted: return "capped_weighted";
    case LossKind::concave_plus_modular: return "concave_plus_modular";
    case LossKind::exp_size: return "exp_size";
    case LossKind::sqrt_modular: return "sqrt_modular";
    case LossKind::early_detection: return "early_detection";
    case LossKind::table: return "table";
  }
  return "unknown";
}

LossSpec LossSpec::hamming_loss(int p) { return LossSpec{LossKind::hamming, p, {}, 0, 1, {}}; }

LossSpec LossSpec::jaccard_loss(int p) { return LossSpec{LossKind::jaccard, p, {}, 0, 1, {}}; }

LossSpec LossSpec::capped_weighted_loss(int p, std::vector<double> beta, double l_max) {
  LossSpec s{LossKind::capped_weighted, p, std::move(beta), l_max, 1, {}};
  s.validate();
  return s;
}

LossSpec LossSpec::concave_plus_modular_loss(int p, std::vector<double> beta) {
  LossSpec s{LossKind::concave_plus_modular, p, std::move(beta), 0, 1, {}};
  s.validate();
  return s;
}

LossSpec LossSpec::exp_size_loss(int p, double alpha) {
  LossSpec s{LossKind::exp_size, p, {}, 0, alpha, {}};
  s.validate();
  return s;
}

LossSpec LossSpec::sqrt_modular_loss(int p, std::vector<double> weights) {
  LossSpec s{LossKind::sqrt_modular, p, std::move(weights), 0, 1, {}};
  s.validate();
  return s;
}

LossSpec LossSpec::early_detection_loss(int p) {
  return LossSpec{LossKind::early_detection, p, {}, 0, 1, {}};
}

LossSpec LossSpec::table_loss(int p, std::vector<double> values) {
  LossSpec s{LossKind::table, p, {}, 0, 1, std::move(values)};
  s.validate();
  return s;
}

double loss_value(const LossSpec& spec, const LabelVector& y, SubsetMask mispredictions) {
  require_p(spec);
  if (mispredictions >> spec.p)
    throw std::invalid_argument("loss_value: mask has bits outside the ground set");
  switch (spec.kind) {
    case LossKind::hamming:
      return static_cast<double>(mask_cardinality(mispredictions));
    case LossKind::jaccard: {
      if (static_cast<int>(y.size()) != spec.p)
        throw std::invalid_argument("jaccard: labels must have p entries");
      SubsetMask positives = 0;
      for (int j = 0; j < spec.p; ++j)
        if (y[j] > 0) positives |= SubsetMask{1} << j;
      const int m = mask_cardinality(positives);
      if (m == 0)
        throw std::domain_error("jaccard: labeling has no positive elements");
      const int fn = mask_cardinality(mispredictions & positives);
      const int fp = mask_cardinality(mispredictions & ~positives);
      return 1.0 - static_cast<double>(m - fn) / static_cast<double>(m + fp);
    }
    case LossKind::capped_weighted:
      return std::min(spec.l_max, weighted_sum(spec.beta, mispredictions));
    case LossKind::concave_plus_modular:
      return 1.0 - std::exp(-static_cast<double>(mask_cardinality(mispredictions))) +
             weighted_sum(spec.beta, mispredictions);
    case LossKind::exp_size:
      return 1.0 - std::exp(-spec.alpha * mask_cardinality(mispredictions));
    case LossKind::sqrt_modular:
      return std::sqrt(weighted_sum(spec.beta, mispredictions));
    case LossKind::early_detection: {
      // Chronological prefix sets; slot j (0-based) is time i = j + 1.
      double total = 0.0;
      int prefix_errors = 0;
      for (int j = 0; j < spec.p; ++j) {
        if (mispredictions & (SubsetMask{1} << j)) ++prefix_errors;
        const double i = static_cast<double>(j + 1);
        total += std::exp(-i) * std::min(static_cast<double>(prefix_errors), i / 2.0);
      }
      return total;
    }
    case LossKind::table:
      return spec.table[mispredictions];
  }
  throw std::logic_error("loss_value: unreachable");
}

SetFunction build_loss(const LossSpec& spec, const LabelVector& y) {
  spec.validate();
  Monotonicity mono = Monotonicity::increasing;
  Modularity mod = Modularity::submodular;
  switch (spec.kind) {
    case LossKind::hamming:
      mod = Modularity::modular;
      break;
    case LossKind::concave_plus_modular:
      // Increasing only when the modular part cannot outweigh the concave
      // part's unit marginals downward; beta >= 0 suffices.
      for (double b : spec.beta)
        if (b < 0.0) mono = Monotonicity::unknown;
      break;
    case LossKind::table:
      mono = Monotonicity::unknown;
      mod = Modularity::unknown;
      break;
    default:
      break;
  }
  if (spec.kind == LossKind::jaccard) {
    // Fail fast on labelings without positives.
    (void)loss_value(spec, y, 0);
  }
  LossSpec copy = spec;
  LabelVector labels = y;
  return SetFunction(
      spec.p,
      [copy, labels](SubsetMask m) { return loss_value(copy, labels, m); },
      mono, mod);
}

SetFunction build_loss(const LossSpec& spec) {
  return build_loss(spec, LabelVector(static_cast<std::size_t>(spec.p), +1));
}

}  // namespace lovhinge

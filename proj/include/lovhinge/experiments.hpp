#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lovhinge/model.hpp"

namespace lovhinge {

struct GaussianSpec {
  std::vector<double> mean;  // d entries
  std::vector<double> cov;   // d x d, row-major, positive definite
};

// Early-detection synthetic task: each bag holds p chronologically ordered
// slots; positive samples drift between an early and a late distribution
// while negatives are stationary.
struct SyntheticSpec {
  int n_bags = 0;
  int p = 15;
  int d = 2;
  std::uint64_t seed = 0;
  double positive_rate = 0.5;
  GaussianSpec early_positive;
  GaussianSpec late_positive;
  GaussianSpec negative;

  // Negatives N((0,-1.7,0,..), I); early positives N((2,2,0,..), 0.5 I);
  // late positives N((-2,2,0,..), 0.5 I).  All means sit off the origin so
  // bias-free per-element separators exist.
  static SyntheticSpec with_defaults(int n_bags, int p = 15, int d = 2,
                                     std::uint64_t seed = 0);
};

/// Slot i (1-based) draws positives from the early distribution when
/// i <= p/2 and from the late one otherwise; labels are Bernoulli per slot.
/// Deterministic under the seed.
std::vector<Bag> gen_early_detection(const SyntheticSpec& spec);

struct TrainSpec {
  std::string name;
  TrainConfig config;
};

/// The standard comparison rows: the Lovasz hinge on the given loss, a 0-1
/// (per-element hinge) baseline, and slack/margin rescaling on the loss.
std::vector<TrainSpec> default_train_specs(const LossSpec& loss, double C,
                                           double epsilon, int max_iterations,
                                           Inference ms_inference);

struct CrossCell {
  double mean = 0.0;
  double std_error = 0.0;
  int failed_repeats = 0;  // repeats where training did not converge
};

struct CrossTable {
  std::vector<std::string> row_names;
  std::vector<std::string> col_names;
  std::vector<std::vector<CrossCell>> cells;  // [row][col]
};

/// Regenerates train/test data per repeat (spec seed + repeat index), trains
/// every row spec, and evaluates every test loss; cells aggregate the mean
/// and standard error (stddev / sqrt(repeats)) across repeats.
CrossTable run_cross_comparison(const SyntheticSpec& train_proto,
                                const SyntheticSpec& test_proto,
                                std::span<const TrainSpec> train_specs,
                                std::span<const LossSpec> test_losses, int repeats);

/// Fixed-dataset variant: bootstrap-resamples the training bags per repeat
/// (seed + repeat index), keeps the test set fixed.
CrossTable run_cross_comparison(std::span<const Bag> train, std::span<const Bag> test,
                                std::span<const TrainSpec> train_specs,
                                std::span<const LossSpec> test_losses, int repeats,
                                std::uint64_t seed);

struct NamedTrace {
  std::string name;
  std::vector<GapRecord> trace;
};

/// Runs every config on the dataset and collects the primal-dual gap traces.
std::vector<NamedTrace> capture_gap_traces(std::span<const Bag> data,
                                           std::span<const TrainSpec> configs);

// CSV emitters with fixed headers and 9-decimal values.
void write_cross_table_csv(std::ostream& os, const CrossTable& table);
void write_traces_csv(std::ostream& os, std::span<const NamedTrace> traces);

}  // namespace lovhinge

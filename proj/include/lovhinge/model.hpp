#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lovhinge/losses.hpp"
#include "lovhinge/set_function.hpp"
#include "lovhinge/surrogates.hpp"

namespace lovhinge {

struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // row-major

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

// One training instance: p elements with d features each, one label per
// element.
struct Bag {
  Matrix features;     // p x d
  LabelVector labels;  // p entries in {-1, +1}
};

// Per-element linear predictor; row j scores element j.
struct LinearModel {
  Matrix weights;  // p x d
};

/// g_j = <w_j, x_j> per element.
std::vector<double> score(const LinearModel& model, const Bag& x);

/// sign(g) with sign(0) = +1.
LabelVector predict(const LinearModel& model, const Bag& x);

/// <g(x), y>.
double joint_score(const LinearModel& model, const Bag& x, const LabelVector& y);

/// Mean discrete loss of the model's predictions over the dataset.
double empirical_risk(const LinearModel& model, std::span<const Bag> data,
                      const LossSpec& loss);

struct TrainConfig {
  double C = 1.0;        // trade-off in 1/2 |w|^2 + C sum_i xi_i
  double epsilon = 0.01; // primal-dual gap tolerance
  int max_iterations = 200;
  SurrogateKind surrogate;
  LossSpec loss;
  int qp_max_passes = 10000;
  std::uint64_t seed = 0;

  void validate() const;
};

// An aggregated cutting plane: risk(w) >= offset - <direction, w> for all w,
// with equality at the point of generation.
struct Cut {
  std::vector<double> direction;  // flattened p*d
  double offset = 0.0;
};

struct RiskCut {
  double value = 0.0;  // surrogate risk at the query point
  Cut cut;
};

/// Averaged most-violated cut of the surrogate risk at the current model.
/// For the Lovasz hinge the cut comes from sorting-based subgradients; for
/// margin/slack rescaling from the (exact or greedy) loss-augmented argmax.
RiskCut surrogate_risk_and_cut(const LinearModel& model, std::span<const Bag> data,
                               const TrainConfig& config);

struct GapRecord {
  int iteration = 0;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

struct CuttingPlaneState {
  std::vector<Cut> constraints;
  std::vector<double> alpha;  // dual coefficients, sum <= C*n
  double xi = 0.0;            // single shared slack
  std::vector<GapRecord> gap_trace;
  bool converged = false;
  int iterations = 0;
};

struct TrainResult {
  LinearModel model;
  CuttingPlaneState state;
};

/// One-slack cutting-plane training: alternate between adding the averaged
/// most-violated cut and re-solving the master QP, until the primal-dual gap
/// drops below epsilon or the iteration cap is reached.  Non-convergence
/// returns the best model seen with state.converged = false.
TrainResult train_cutting_plane(std::span<const Bag> data, const TrainConfig& config);

struct QpSolution {
  std::vector<double> w;
  double xi = 0.0;
  double dual_objective = 0.0;
  std::vector<double> alpha;
};

/// Master problem  min_w 1/2 |w|^2 + C max(0, max_k(offset_k - <dir_k, w>))
/// solved in the dual by coordinate ascent with pairwise exchanges, warm
/// started from warm_alpha when given.
QpSolution master_qp_solve(std::span<const Cut> cuts, double C,
                           int max_passes = 10000,
                           std::span<const double> warm_alpha = {});

/// Projected subgradient descent on  1/2 lambda |w|^2 + surrogate risk,
/// lambda = 1/(C n); runs config.max_iterations steps and returns the iterate
/// with the best objective (never worse than w = 0).
LinearModel train_subgradient(std::span<const Bag> data, const TrainConfig& config,
                              const std::function<double(int)>& learning_rate);

}  // namespace lovhinge

#include "lovhinge/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "lovhinge/lovasz.hpp"

namespace lovhinge {

namespace {

void require_model_bag(const LinearModel& model, const Bag& x) {
  if (model.weights.rows != x.features.rows || model.weights.cols != x.features.cols)
    throw std::invalid_argument("model/bag dimension mismatch");
  if (static_cast<int>(x.labels.size()) != x.features.rows)
    throw std::invalid_argument("bag labels/features dimension mismatch");
}

void require_dataset(std::span<const Bag> data) {
  if (data.empty()) throw std::invalid_argument("empty dataset");
  const int p = data.front().features.rows;
  const int d = data.front().features.cols;
  for (const Bag& b : data) {
    if (b.features.rows != p || b.features.cols != d ||
        static_cast<int>(b.labels.size()) != p)
      throw std::invalid_argument("inconsistent dataset dimensions");
  }
}

double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Per-bag loss set functions.  Only the jaccard variant depends on the
// labels, so everything else shares a single instance.
class LossBank {
 public:
  LossBank(std::span<const Bag> data, const LossSpec& spec) {
    if (spec.kind == LossKind::jaccard) {
      per_bag_.reserve(data.size());
      for (const Bag& b : data) per_bag_.push_back(build_loss(spec, b.labels));
    } else {
      shared_ = build_loss(spec);
    }
  }
  const SetFunction& at(std::size_t i) const {
    return per_bag_.empty() ? *shared_ : per_bag_[i];
  }

 private:
  std::optional<SetFunction> shared_;
  std::vector<SetFunction> per_bag_;
};

// Training objective pieces for one dataset/config pair; builds the loss
// oracles once and reuses them across iterations.
class SurrogateObjective {
 public:
  SurrogateObjective(std::span<const Bag> data, const TrainConfig& config)
      : data_(data), config_(config), bank_(data, config.loss) {
    require_dataset(data);
    config.validate();
    p_ = data.front().features.rows;
    d_ = data.front().features.cols;
    if (config.loss.p != p_)
      throw std::invalid_argument("loss ground-set size does not match the data");
  }

  int p() const { return p_; }
  int d() const { return d_; }

  RiskCut risk_and_cut(const LinearModel& model) const { return evaluate(model, true); }
  double risk(const LinearModel& model) const { return evaluate(model, false).value; }

 private:
  RiskCut evaluate(const LinearModel& model, bool with_cut) const {
    const double inv_n = 1.0 / static_cast<double>(data_.size());
    RiskCut rc;
    std::vector<double> grad_g;  // d(risk_i)/dg, when needed
    if (with_cut) rc.cut.direction.assign(static_cast<std::size_t>(p_) * d_, 0.0);
    for (std::size_t i = 0; i < data_.size(); ++i) {
      const Bag& bag = data_[i];
      require_model_bag(model, bag);
      const SetFunction& l = bank_.at(i);
      const std::vector<double> g = score(model, bag);
      double value = 0.0;
      grad_g.assign(p_, 0.0);
      switch (config_.surrogate.tag) {
        case SurrogateTag::lovasz_hinge: {
          value = lovasz_hinge(l, bag.labels, g);
          if (with_cut) grad_g = lovasz_hinge_subgradient(l, bag.labels, g);
          break;
        }
        case SurrogateTag::margin_rescale: {
          const InferenceResult res = margin_rescale_value(
              l, bag.labels, g, config_.surrogate.inference, config_.surrogate.gamma);
          value = res.value;
          if (with_cut)
            for (int j = 0; j < p_; ++j)
              grad_g[j] = static_cast<double>(res.argmax[j] - bag.labels[j]);
          break;
        }
        case SurrogateTag::slack_rescale: {
          const InferenceResult res =
              slack_rescale_value(l, bag.labels, g, config_.surrogate.inference);
          value = res.value;
          if (with_cut) {
            const double lval = l(misprediction_set(bag.labels, res.argmax));
            for (int j = 0; j < p_; ++j)
              grad_g[j] = lval * static_cast<double>(res.argmax[j] - bag.labels[j]);
          }
          break;
        }
      }
      rc.value += inv_n * value;
      if (with_cut) {
        // direction = -(1/n) sum_i d(risk_i)/dw;  d/dw_j = grad_g[j] * x_j
        for (int j = 0; j < p_; ++j) {
          const double coeff = -inv_n * grad_g[j];
          if (coeff == 0.0) continue;
          for (int c = 0; c < d_; ++c)
            rc.cut.direction[static_cast<std::size_t>(j) * d_ + c] +=
                coeff * bag.features.at(j, c);
        }
      }
    }
    if (with_cut)
      rc.cut.offset = rc.value + dot(rc.cut.direction, model.weights.data);
    return rc;
  }

  std::span<const Bag> data_;
  TrainConfig config_;
  LossBank bank_;
  int p_ = 0;
  int d_ = 0;
};

double cut_value_at(const Cut& cut, std::span<const double> w) {
  return cut.offset - dot(cut.direction, w);
}

bool cuts_equal(const Cut& a, const Cut& b, double tol) {
  if (std::abs(a.offset - b.offset) > tol) return false;
  for (std::size_t i = 0; i < a.direction.size(); ++i)
    if (std::abs(a.direction[i] - b.direction[i]) > tol) return false;
  return true;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(C > 0.0)) throw std::invalid_argument("TrainConfig: C must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("TrainConfig: epsilon must be positive");
  if (max_iterations < 0) throw std::invalid_argument("TrainConfig: negative iteration cap");
  if (qp_max_passes < 1) throw std::invalid_argument("TrainConfig: qp_max_passes must be >= 1");
  if (!(surrogate.gamma > 0.0)) throw std::invalid_argument("TrainConfig: gamma must be positive");
  loss.validate();
}

std::vector<double> score(const LinearModel& model, const Bag& x) {
  require_model_bag(model, x);
  std::vector<double> g(model.weights.rows, 0.0);
  for (int j = 0; j < model.weights.rows; ++j) {
    double s = 0.0;
    for (int c = 0; c < model.weights.cols; ++c)
      s += model.weights.at(j, c) * x.features.at(j, c);
    g[j] = s;
  }
  return g;
}

LabelVector predict(const LinearModel& model, const Bag& x) {
  const std::vector<double> g = score(model, x);
  LabelVector out(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) out[j] = g[j] >= 0.0 ? +1 : -1;
  return out;
}

double joint_score(const LinearModel& model, const Bag& x, const LabelVector& y) {
  if (y.size() != static_cast<std::size_t>(model.weights.rows))
    throw std::invalid_argument("joint_score: label length mismatch");
  const std::vector<double> g = score(model, x);
  double s = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) s += g[j] * y[j];
  return s;
}

double empirical_risk(const LinearModel& model, std::span<const Bag> data,
                      const LossSpec& loss) {
  require_dataset(data);
  loss.validate();
  double total = 0.0;
  for (const Bag& bag : data) {
    const LabelVector pred = predict(model, bag);
    total += loss_value(loss, bag.labels, misprediction_set(bag.labels, pred));
  }
  return total / static_cast<double>(data.size());
}

RiskCut surrogate_risk_and_cut(const LinearModel& model, std::span<const Bag> data,
                               const TrainConfig& config) {
  return SurrogateObjective(data, config).risk_and_cut(model);
}

QpSolution master_qp_solve(std::span<const Cut> cuts, double C, int max_passes,
                           std::span<const double> warm_alpha) {
  if (cuts.empty()) throw std::invalid_argument("master_qp_solve: no constraints");
  if (!(C > 0.0)) throw std::invalid_argument("master_qp_solve: C must be positive");
  const std::size_t k = cuts.size();
  const std::size_t dim = cuts.front().direction.size();
  for (const Cut& c : cuts)
    if (c.direction.size() != dim)
      throw std::invalid_argument("master_qp_solve: inconsistent cut dimensions");

  std::vector<double> gram(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j)
      gram[i * k + j] = gram[j * k + i] = dot(cuts[i].direction, cuts[j].direction);

  std::vector<double> alpha(k, 0.0);
  for (std::size_t i = 0; i < std::min(k, warm_alpha.size()); ++i)
    alpha[i] = std::max(0.0, warm_alpha[i]);

  // q_i = <a_i, w(alpha)> maintained incrementally through the Gram matrix.
  std::vector<double> q(k, 0.0);
  double sum_alpha = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sum_alpha += alpha[i];
    if (alpha[i] != 0.0)
      for (std::size_t j = 0; j < k; ++j) q[j] += alpha[i] * gram[j * k + i];
  }

  constexpr double kImprovementTol = 1e-12;
  for (int pass = 0; pass < max_passes; ++pass) {
    double improvement = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double cap = std::max(0.0, C - (sum_alpha - alpha[i]));
      const double grad = cuts[i].offset - q[i];
      double target;
      if (gram[i * k + i] > 0.0)
        target = std::clamp(alpha[i] + grad / gram[i * k + i], 0.0, cap);
      else
        target = grad > 0.0 ? cap : 0.0;
      const double delta = target - alpha[i];
      if (delta == 0.0) continue;
      improvement += delta * grad - 0.5 * delta * delta * gram[i * k + i];
      alpha[i] = target;
      sum_alpha += delta;
      for (std::size_t j = 0; j < k; ++j) q[j] += delta * gram[j * k + i];
    }
    // Once the simplex cap binds, single-coordinate moves stall; exchange
    // mass between the most violated pair instead (receiver with the largest
    // gradient, donor with the smallest among the active coefficients).
    if (sum_alpha >= C - 1e-10 * (1.0 + C)) {
      const std::size_t exchange_cap = std::min<std::size_t>(k, 64);
      for (std::size_t step = 0; step < exchange_cap; ++step) {
        std::size_t best_i = 0, best_j = k;
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < k; ++m) {
          const double grad = cuts[m].offset - q[m];
          if (grad > hi) {
            hi = grad;
            best_i = m;
          }
          if (alpha[m] > 0.0 && grad < lo) {
            lo = grad;
            best_j = m;
          }
        }
        if (best_j == k || best_i == best_j || hi - lo <= kImprovementTol) break;
        const std::size_t i = best_i, j = best_j;
        const double grad = hi - lo;
        const double curv = gram[i * k + i] - 2.0 * gram[i * k + j] + gram[j * k + j];
        const double t = curv > 0.0 ? std::min(grad / curv, alpha[j]) : alpha[j];
        if (t <= 0.0) break;
        const double gain = t * grad - 0.5 * t * t * curv;
        if (gain <= 0.0) break;
        improvement += gain;
        alpha[i] += t;
        alpha[j] -= t;
        for (std::size_t m = 0; m < k; ++m)
          q[m] += t * (gram[m * k + i] - gram[m * k + j]);
      }
    }
    if (improvement < kImprovementTol) break;
  }

  QpSolution sol;
  sol.alpha = alpha;
  sol.w.assign(dim, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (alpha[i] == 0.0) continue;
    for (std::size_t c = 0; c < dim; ++c) sol.w[c] += alpha[i] * cuts[i].direction[c];
  }
  double max_violation = 0.0;
  double dual_linear = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    max_violation = std::max(max_violation, cut_value_at(cuts[i], sol.w));
    dual_linear += alpha[i] * cuts[i].offset;
  }
  sol.xi = max_violation;
  sol.dual_objective = dual_linear - 0.5 * squared_norm(sol.w);
  return sol;
}

TrainResult train_cutting_plane(std::span<const Bag> data, const TrainConfig& config) {
  const SurrogateObjective objective(data, config);
  const double c_eff = config.C * static_cast<double>(data.size());

  TrainResult result;
  result.model.weights = Matrix(objective.p(), objective.d());
  CuttingPlaneState& st = result.state;

  LinearModel current = result.model;
  double best_objective = std::numeric_limits<double>::infinity();
  LinearModel best_model = current;
  double dual = 0.0;
  std::vector<int> inactive_solves;  // consecutive solves with alpha = 0

  constexpr double kDedupeTol = 1e-10;
  constexpr int kPruneAfter = 50;

  for (int t = 1; t <= config.max_iterations; ++t) {
    const RiskCut rc = objective.risk_and_cut(current);
    const double reg = 0.5 * squared_norm(current.weights.data);

    // Best iterate bookkeeping uses the fresh risk value at this point.
    const double objective_here = reg + c_eff * rc.value;
    if (objective_here < best_objective) {
      best_objective = objective_here;
      best_model = current;
    }

    bool duplicate = false;
    for (const Cut& c : st.constraints)
      if (cuts_equal(c, rc.cut, kDedupeTol)) {
        duplicate = true;
        break;
      }

    // Primal bound from the cut model at the query point; the fresh cut
    // touches here, so this equals the true objective under exact inference.
    double risk_model = std::max(0.0, rc.value);
    for (const Cut& c : st.constraints)
      risk_model = std::max(risk_model, cut_value_at(c, current.weights.data));
    const double primal = reg + c_eff * risk_model;

    if (!duplicate) {
      st.constraints.push_back(rc.cut);
      st.alpha.push_back(0.0);
      inactive_solves.push_back(0);
      const QpSolution sol =
          master_qp_solve(st.constraints, c_eff, config.qp_max_passes, st.alpha);
      st.alpha = sol.alpha;
      st.xi = sol.xi;
      dual = sol.dual_objective;
      current.weights.data = sol.w;

      // retire cuts whose dual coefficient stayed at zero for many
      // consecutive solves; clamps and full pair donations land on exact
      // zero, so this never discards dual mass
      std::size_t keep = 0;
      for (std::size_t i = 0; i < st.constraints.size(); ++i) {
        inactive_solves[i] = st.alpha[i] == 0.0 ? inactive_solves[i] + 1 : 0;
        if (inactive_solves[i] >= kPruneAfter) continue;
        if (keep != i) {
          st.constraints[keep] = std::move(st.constraints[i]);
          st.alpha[keep] = st.alpha[i];
          inactive_solves[keep] = inactive_solves[i];
        }
        ++keep;
      }
      st.constraints.resize(keep);
      st.alpha.resize(keep);
      inactive_solves.resize(keep);
    }

    const double gap = primal - dual;
    st.gap_trace.push_back({t, primal, dual, gap});
    st.iterations = t;
    if (gap <= config.epsilon) {
      st.converged = true;
      break;
    }
    if (duplicate) break;  // working set unchanged
  }

  // The last QP iterate may beat every recorded point; give it a chance.
  if (config.max_iterations > 0) {
    const double final_objective =
        0.5 * squared_norm(current.weights.data) + c_eff * objective.risk(current);
    if (final_objective < best_objective) best_model = current;
  }
  result.model = best_model;
  return result;
}

LinearModel train_subgradient(std::span<const Bag> data, const TrainConfig& config,
                              const std::function<double(int)>& learning_rate) {
  if (!learning_rate) throw std::invalid_argument("train_subgradient: null schedule");
  const SurrogateObjective objective(data, config);
  const double lambda = 1.0 / (config.C * static_cast<double>(data.size()));
  const std::size_t dim = static_cast<std::size_t>(objective.p()) * objective.d();

  LinearModel w;
  w.weights = Matrix(objective.p(), objective.d());
  double best_value = objective.risk(w);  // objective at w = 0
  LinearModel best = w;

  // Any minimizer satisfies 0.5 lambda |w*|^2 <= J(0), which bounds the
  // projection radius.
  const double radius = std::sqrt(std::max(0.0, 2.0 * best_value / lambda));

  for (int t = 1; t <= config.max_iterations; ++t) {
    const double eta = learning_rate(t);
    if (!(eta > 0.0)) throw std::invalid_argument("train_subgradient: schedule must be positive");
    const RiskCut rc = objective.risk_and_cut(w);
    const double value = 0.5 * lambda * squared_norm(w.weights.data) + rc.value;
    if (value < best_value) {
      best_value = value;
      best = w;
    }
    // risk subgradient = -direction
    for (std::size_t c = 0; c < dim; ++c)
      w.weights.data[c] -= eta * (lambda * w.weights.data[c] - rc.cut.direction[c]);
    const double norm = std::sqrt(squared_norm(w.weights.data));
    if (norm > radius && norm > 0.0) {
      const double shrink = radius / norm;
      for (double& x : w.weights.data) x *= shrink;
    }
  }
  if (config.max_iterations > 0) {
    const double final_value =
        0.5 * lambda * squared_norm(w.weights.data) + objective.risk(w);
    if (final_value < best_value) best = w;
  }
  return best;
}

}  // namespace lovhinge

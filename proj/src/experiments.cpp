#include "lovhinge/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "lovhinge/rng.hpp"

namespace lovhinge {

namespace {

// Lower Cholesky factor; throws on non-positive-definite input.
std::vector<double> cholesky(const std::vector<double>& cov, int d) {
  if (static_cast<int>(cov.size()) != d * d)
    throw std::invalid_argument("covariance must be d x d");
  std::vector<double> lower(d * d, 0.0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = cov[i * d + j];
      for (int m = 0; m < j; ++m) s -= lower[i * d + m] * lower[j * d + m];
      if (i == j) {
        if (!(s > 0.0))
          throw std::invalid_argument("covariance is not positive definite");
        lower[i * d + i] = std::sqrt(s);
      } else {
        lower[i * d + j] = s / lower[j * d + j];
      }
    }
  }
  return lower;
}

struct GaussianSampler {
  std::vector<double> mean;
  std::vector<double> lower;
  int d;

  GaussianSampler(const GaussianSpec& spec, int dim)
      : mean(spec.mean), lower(cholesky(spec.cov, dim)), d(dim) {
    if (static_cast<int>(mean.size()) != dim)
      throw std::invalid_argument("gaussian mean must have d entries");
  }

  void sample(Rng& rng, double* out) const {
    std::vector<double> z(d);
    for (int i = 0; i < d; ++i) z[i] = rng.normal();
    for (int i = 0; i < d; ++i) {
      double v = mean[i];
      for (int j = 0; j <= i; ++j) v += lower[i * d + j] * z[j];
      out[i] = v;
    }
  }
};

GaussianSpec isotropic(std::vector<double> mean, double variance, int d) {
  GaussianSpec g;
  g.mean = std::move(mean);
  g.mean.resize(d, 0.0);
  g.cov.assign(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) g.cov[i * d + i] = variance;
  return g;
}

}  // namespace

SyntheticSpec SyntheticSpec::with_defaults(int n_bags, int p, int d,
                                           std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n_bags = n_bags;
  spec.p = p;
  spec.d = d;
  spec.seed = seed;
  // The predictor has no bias term, so every class mean sits away from the
  // origin; an origin-centered cloud would be bisected by any separator.
  spec.early_positive = isotropic({2.0, 2.0}, 0.5, d);
  spec.late_positive = isotropic({-2.0, 2.0}, 0.5, d);
  spec.negative = isotropic({0.0, -1.7}, 1.0, d);
  return spec;
}

std::vector<Bag> gen_early_detection(const SyntheticSpec& spec) {
  if (spec.p < 1) throw std::invalid_argument("gen_early_detection: p must be >= 1");
  if (spec.n_bags < 0) throw std::invalid_argument("gen_early_detection: negative bag count");
  const GaussianSampler early(spec.early_positive, spec.d);
  const GaussianSampler late(spec.late_positive, spec.d);
  const GaussianSampler negative(spec.negative, spec.d);
  Rng rng(spec.seed);
  std::vector<Bag> bags;
  bags.reserve(spec.n_bags);
  for (int b = 0; b < spec.n_bags; ++b) {
    Bag bag;
    bag.features = Matrix(spec.p, spec.d);
    bag.labels.resize(spec.p);
    for (int j = 0; j < spec.p; ++j) {
      const bool positive = rng.bernoulli(spec.positive_rate);
      bag.labels[j] = positive ? +1 : -1;
      double* row = &bag.features.at(j, 0);
      if (!positive)
        negative.sample(rng, row);
      else if (j + 1 <= spec.p / 2.0)  // 1-based slot within the early half
        early.sample(rng, row);
      else
        late.sample(rng, row);
    }
    bags.push_back(std::move(bag));
  }
  return bags;
}

std::vector<TrainSpec> default_train_specs(const LossSpec& loss, double C,
                                           double epsilon, int max_iterations,
                                           Inference ms_inference) {
  TrainConfig base;
  base.C = C;
  base.epsilon = epsilon;
  base.max_iterations = max_iterations;
  base.loss = loss;

  std::vector<TrainSpec> specs;
  TrainConfig lovasz = base;
  lovasz.surrogate = {SurrogateTag::lovasz_hinge, Inference::exact, 1.0};
  specs.push_back({"L", lovasz});

  TrainConfig zero_one = base;
  zero_one.surrogate = {SurrogateTag::lovasz_hinge, Inference::exact, 1.0};
  zero_one.loss = LossSpec::hamming_loss(loss.p);
  specs.push_back({"0-1", zero_one});

  TrainConfig slack = base;
  slack.surrogate = {SurrogateTag::slack_rescale, ms_inference, 1.0};
  specs.push_back({"S", slack});

  TrainConfig margin = base;
  margin.surrogate = {SurrogateTag::margin_rescale, ms_inference, 1.0};
  specs.push_back({"M", margin});
  return specs;
}

namespace {

CrossTable aggregate_table(std::span<const TrainSpec> train_specs,
                           std::span<const LossSpec> test_losses,
                           const std::vector<std::vector<std::vector<double>>>& values,
                           const std::vector<std::vector<int>>& failures,
                           int repeats) {
  CrossTable table;
  for (const TrainSpec& ts : train_specs) table.row_names.push_back(ts.name);
  for (const LossSpec& loss : test_losses) table.col_names.push_back(loss.name());
  table.cells.resize(train_specs.size());
  for (std::size_t r = 0; r < train_specs.size(); ++r) {
    table.cells[r].resize(test_losses.size());
    for (std::size_t c = 0; c < test_losses.size(); ++c) {
      const std::vector<double>& xs = values[r][c];
      CrossCell cell;
      cell.failed_repeats = failures[r][c];
      double mean = 0.0;
      for (double x : xs) mean += x;
      mean /= static_cast<double>(xs.size());
      cell.mean = mean;
      if (repeats > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        cell.std_error = std::sqrt(ss / (repeats - 1)) / std::sqrt(repeats);
      }
      table.cells[r][c] = cell;
    }
  }
  return table;
}

template <class MakeData>
CrossTable cross_comparison_impl(MakeData&& make_data,
                                 std::span<const TrainSpec> train_specs,
                                 std::span<const LossSpec> test_losses, int repeats) {
  if (repeats < 1) throw std::invalid_argument("run_cross_comparison: repeats must be >= 1");
  if (train_specs.empty() || test_losses.empty())
    throw std::invalid_argument("run_cross_comparison: empty specs");
  std::vector<std::vector<std::vector<double>>> values(
      train_specs.size(),
      std::vector<std::vector<double>>(test_losses.size()));
  std::vector<std::vector<int>> failures(train_specs.size(),
                                         std::vector<int>(test_losses.size(), 0));
  for (int r = 0; r < repeats; ++r) {
    const auto [train, test] = make_data(r);
    for (std::size_t row = 0; row < train_specs.size(); ++row) {
      const TrainResult result = train_cutting_plane(train, train_specs[row].config);
      for (std::size_t col = 0; col < test_losses.size(); ++col) {
        values[row][col].push_back(
            empirical_risk(result.model, test, test_losses[col]));
        if (!result.state.converged) ++failures[row][col];
      }
    }
  }
  return aggregate_table(train_specs, test_losses, values, failures, repeats);
}

}  // namespace

CrossTable run_cross_comparison(const SyntheticSpec& train_proto,
                                const SyntheticSpec& test_proto,
                                std::span<const TrainSpec> train_specs,
                                std::span<const LossSpec> test_losses, int repeats) {
  auto make_data = [&](int r) {
    SyntheticSpec train_spec = train_proto;
    train_spec.seed = train_proto.seed + static_cast<std::uint64_t>(r);
    SyntheticSpec test_spec = test_proto;
    test_spec.seed = test_proto.seed + static_cast<std::uint64_t>(r);
    return std::make_pair(gen_early_detection(train_spec), gen_early_detection(test_spec));
  };
  return cross_comparison_impl(make_data, train_specs, test_losses, repeats);
}

CrossTable run_cross_comparison(std::span<const Bag> train, std::span<const Bag> test,
                                std::span<const TrainSpec> train_specs,
                                std::span<const LossSpec> test_losses, int repeats,
                                std::uint64_t seed) {
  if (train.empty() || test.empty())
    throw std::invalid_argument("run_cross_comparison: empty dataset");
  auto make_data = [&](int r) {
    Rng rng(seed + static_cast<std::uint64_t>(r));
    std::vector<Bag> sample;
    sample.reserve(train.size());
    for (std::size_t i = 0; i < train.size(); ++i)
      sample.push_back(train[rng.integer(train.size())]);
    return std::make_pair(std::move(sample),
                          std::vector<Bag>(test.begin(), test.end()));
  };
  return cross_comparison_impl(make_data, train_specs, test_losses, repeats);
}

std::vector<NamedTrace> capture_gap_traces(std::span<const Bag> data,
                                           std::span<const TrainSpec> configs) {
  std::vector<NamedTrace> traces;
  traces.reserve(configs.size());
  for (const TrainSpec& spec : configs) {
    const TrainResult result = train_cutting_plane(data, spec.config);
    traces.push_back({spec.name, result.state.gap_trace});
  }
  return traces;
}

void write_cross_table_csv(std::ostream& os, const CrossTable& table) {
  os << "train";
  for (const std::string& col : table.col_names)
    os << ',' << col << "_mean," << col << "_stderr," << col << "_failed";
  os << '\n';
  char buf[64];
  for (std::size_t r = 0; r < table.row_names.size(); ++r) {
    os << table.row_names[r];
    for (const CrossCell& cell : table.cells[r]) {
      std::snprintf(buf, sizeof(buf), ",%.9f,%.9f,%d", cell.mean, cell.std_error,
                    cell.failed_repeats);
      os << buf;
    }
    os << '\n';
  }
}

void write_traces_csv(std::ostream& os, std::span<const NamedTrace> traces) {
  os << "surrogate,iteration,gap\n";
  char buf[64];
  for (const NamedTrace& t : traces)
    for (const GapRecord& rec : t.trace) {
      std::snprintf(buf, sizeof(buf), ",%d,%.9f\n", rec.iteration, rec.gap);
      os << t.name << buf;
    }
}

}  // namespace lovhinge

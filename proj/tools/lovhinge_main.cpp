// Command-line surface for the lovhinge library: structural property checks,
// loss-surface export, synthetic data generation, training, evaluation,
// cross-comparison tables, and primal-dual gap traces.
//
// Exit codes: 0 success, 1 property failure, 2 usage or data error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lovhinge/dataset_io.hpp"
#include "lovhinge/experiments.hpp"
#include "lovhinge/losses.hpp"
#include "lovhinge/lovasz.hpp"
#include "lovhinge/model.hpp"
#include "lovhinge/set_function.hpp"
#include "lovhinge/surrogates.hpp"

namespace {

using namespace lovhinge;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitUsage = 2;

struct LossFlags {
  std::string loss = "hamming";
  int p = 2;
  std::vector<double> beta;
  double lmax = 0.0;
  double alpha = 1.0;
  std::vector<double> values;
};

void add_loss_flags(CLI::App* cmd, LossFlags& f) {
  cmd->add_option("--loss", f.loss, "loss family")
      ->check(CLI::IsMember({"hamming", "jaccard", "capped", "concave_modular",
                             "exp_size", "sqrt_modular", "early", "table"}));
  cmd->add_option("--p", f.p, "number of elements per bag");
  cmd->add_option("--beta", f.beta, "per-element weights (comma separated)")
      ->delimiter(',');
  cmd->add_option("--lmax", f.lmax, "cap for the capped loss");
  cmd->add_option("--alpha", f.alpha, "rate for the exp_size loss");
  cmd->add_option("--values", f.values,
                  "table loss values indexed by misprediction mask")
      ->delimiter(',');
}

LossSpec make_loss_spec(const LossFlags& f, int p) {
  if (f.loss == "hamming") return LossSpec::hamming_loss(p);
  if (f.loss == "jaccard") return LossSpec::jaccard_loss(p);
  if (f.loss == "capped") return LossSpec::capped_weighted_loss(p, f.beta, f.lmax);
  if (f.loss == "concave_modular") return LossSpec::concave_plus_modular_loss(p, f.beta);
  if (f.loss == "exp_size") return LossSpec::exp_size_loss(p, f.alpha);
  if (f.loss == "sqrt_modular") return LossSpec::sqrt_modular_loss(p, f.beta);
  if (f.loss == "early") return LossSpec::early_detection_loss(p);
  if (f.loss == "table") return LossSpec::table_loss(p, f.values);
  throw std::invalid_argument("unknown loss: " + f.loss);
}

struct SurrogateFlags {
  std::string surrogate = "lovasz";
  std::string inference = "greedy";  // exact enumerates 2^p labelings
  std::string gamma = "1";
};

void add_surrogate_flags(CLI::App* cmd, SurrogateFlags& f) {
  cmd->add_option("--surrogate", f.surrogate, "training surrogate")
      ->check(CLI::IsMember({"lovasz", "margin", "slack", "zeroone"}));
  cmd->add_option("--inference", f.inference, "loss-augmented inference mode")
      ->check(CLI::IsMember({"exact", "greedy"}));
  cmd->add_option("--gamma", f.gamma, "margin-rescaling loss scale (auto or a float)");
}

double resolve_gamma(const std::string& flag, const LossSpec& spec) {
  if (flag != "auto") return std::stod(flag);
  const double g = max_margin_gamma(build_loss(spec));
  return std::isfinite(g) ? g : 1.0;
}

SurrogateKind make_surrogate(const SurrogateFlags& f, LossSpec& spec) {
  SurrogateKind kind;
  kind.inference = f.inference == "greedy" ? Inference::greedy : Inference::exact;
  if (f.surrogate == "lovasz") {
    kind.tag = SurrogateTag::lovasz_hinge;
  } else if (f.surrogate == "zeroone") {
    kind.tag = SurrogateTag::lovasz_hinge;
    spec = LossSpec::hamming_loss(spec.p);
  } else if (f.surrogate == "margin") {
    kind.tag = SurrogateTag::margin_rescale;
    kind.gamma = resolve_gamma(f.gamma, spec);
  } else if (f.surrogate == "slack") {
    kind.tag = SurrogateTag::slack_rescale;
  } else {
    throw std::invalid_argument("unknown surrogate: " + f.surrogate);
  }
  return kind;
}

std::string mask_to_string(SubsetMask m) {
  std::string out = "{";
  bool first = true;
  for (int j = 0; m >> j; ++j) {
    if (!(m >> j & 1)) continue;
    if (!first) out += ",";
    out += std::to_string(j + 1);  // 1-based elements in printed sets
    first = false;
  }
  return out + "}";
}

std::ostream& open_or_stdout(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  return file;
}

void add_config_flag(CLI::App* cmd) {
  // consumed before parsing (see expand_config); registered for --help only
  static std::string ignored;
  cmd->add_option("--config", ignored, "config file with key=value lines");
}

std::string fmt9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  return buf;
}

// --config FILE support: plain key=value lines, one flag per line, '#'
// comments allowed.  The file's tokens are spliced in right after the
// subcommand name so explicit command-line flags parse later and win.

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config file: expected key=value, got \"" + line + "\"");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::runtime_error("config file: empty key");
    tokens.push_back("--" + key);
    if (!value.empty()) tokens.push_back(value);
  }
  return tokens;
}

std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    std::size_t consumed = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      consumed = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      consumed = 1;
    }
    if (consumed == 0) continue;
    const std::vector<std::string> tokens = config_tokens(path);
    args.erase(args.begin() + i, args.begin() + i + consumed);
    // after the subcommand name when present, else at the front
    const std::size_t at = args.empty() ? 0 : 1;
    args.insert(args.begin() + std::min(at, args.size()), tokens.begin(), tokens.end());
    break;
  }
  return args;
}

// ---------------------------------------------------------------------------
// check

struct CheckRow {
  std::string name;
  bool asserted = true;  // informational rows never fail the command
  bool pass = true;
  std::string detail;
};

int cmd_check(const LossFlags& loss_flags, const std::string& gamma_flag,
              std::uint64_t seed, int trials, int points) {
  const LossSpec spec = make_loss_spec(loss_flags, loss_flags.p);
  // Alternating labels exercise both false-negative and false-positive
  // structure for label-dependent losses; all-positive would make jaccard
  // collapse to a modular function.
  LabelVector y(spec.p, +1);
  if (spec.kind == LossKind::jaccard)
    for (int j = 1; j < spec.p; j += 2) y[j] = -1;
  const SetFunction l = build_loss(spec, y).normalized();
  std::vector<CheckRow> rows;

  const SubmodularityReport sub = is_submodular(l);
  const SubmodularityReport super = is_submodular(l.negated());
  {
    CheckRow row{"submodular", true, sub.submodular, ""};
    if (sub.submodular)
      row.detail = super.submodular ? "modular" : "submodular";
    else
      row.detail = "violated at A=" + mask_to_string(sub.witness->a) +
                   " B=" + mask_to_string(sub.witness->b) +
                   (super.submodular ? " (supermodular)" : "");
    rows.push_back(row);
  }

  const MonotonicityReport mono = is_increasing(l);
  {
    CheckRow row{"increasing", false, true, ""};
    row.detail = mono.increasing
                     ? "increasing"
                     : "non-monotonic: l decreases adding element " +
                           std::to_string(mono.witness->element + 1) + " to " +
                           mask_to_string(mono.witness->set);
    rows.push_back(row);
  }

  if (sub.submodular) {
    const ExtensionReport ext =
        is_extension({SurrogateTag::lovasz_hinge, Inference::exact, 1.0}, l, y);
    CheckRow row{"lovasz extension", true, ext.extension, ""};
    if (!ext.extension)
      row.detail = "vertex " + mask_to_string(ext.witnesses.front().vertex) + ": " +
                   fmt9(ext.witnesses.front().surrogate) + " vs " +
                   fmt9(ext.witnesses.front().loss);
    rows.push_back(row);
  }

  {
    const ExtensionReport ext =
        is_extension({SurrogateTag::slack_rescale, Inference::exact, 1.0}, l, y);
    CheckRow row{"slack extension", mono.increasing, ext.extension, ""};
    if (!ext.extension) {
      row.detail = "vertex " + mask_to_string(ext.witnesses.front().vertex) + ": " +
                   fmt9(ext.witnesses.front().surrogate) + " vs " +
                   fmt9(ext.witnesses.front().loss);
      if (!mono.increasing) row.detail += " (expected: loss is not increasing)";
    }
    rows.push_back(row);
  }

  if (mono.increasing) {
    const double gamma =
        gamma_flag == "auto"
            ? [&] { const double g = max_margin_gamma(l); return std::isfinite(g) ? g : 1.0; }()
            : std::stod(gamma_flag);
    const ExtensionReport ext =
        is_extension({SurrogateTag::margin_rescale, Inference::exact, gamma}, l, y);
    CheckRow row{"margin extension", true, ext.extension, "gamma=" + fmt9(gamma)};
    if (!ext.extension)
      row.detail += ", vertex " + mask_to_string(ext.witnesses.front().vertex) + ": " +
                    fmt9(ext.witnesses.front().surrogate) + " vs " +
                    fmt9(ext.witnesses.front().loss);
    rows.push_back(row);
  }

  if (sub.submodular) {
    const ConvexityReport conv =
        convexity_probe({SurrogateTag::lovasz_hinge, Inference::exact, 1.0}, l, y,
                        trials, seed);
    CheckRow row{"lovasz convexity", true, conv.convex, ""};
    if (!conv.convex)
      row.detail = "chord " + fmt9(conv.witness->chord) + " < midpoint " +
                   fmt9(conv.witness->midpoint);
    rows.push_back(row);
  }

  if (sub.submodular && mono.increasing && spec.p <= 10) {
    const DominanceReport dom = dominance_check(l, y, points, seed);
    CheckRow row{"dominance", true, dom.dominant, ""};
    if (!dom.dominant)
      row.detail = "L=" + fmt9(dom.witness->lovasz) + " M=" + fmt9(dom.witness->margin) +
                   " S=" + fmt9(dom.witness->slack);
    rows.push_back(row);
  }

  bool all_pass = true;
  for (const CheckRow& row : rows) {
    const char* tag = row.asserted ? (row.pass ? "PASS" : "FAIL") : "info";
    std::printf("[%s] %-18s %s\n", tag, row.name.c_str(), row.detail.c_str());
    if (row.asserted && !row.pass) all_pass = false;
  }
  return all_pass ? kExitOk : kExitPropertyFailure;
}

// ---------------------------------------------------------------------------
// surface

int cmd_surface(const LossFlags& loss_flags, const SurrogateFlags& surrogate_flags,
                double grid_min, double grid_max, int resolution,
                const std::string& out) {
  if (loss_flags.p != 2)
    throw std::invalid_argument("surface: requires --p 2");
  LossSpec spec = make_loss_spec(loss_flags, 2);
  if (surrogate_flags.surrogate == "zeroone")
    throw std::invalid_argument("surface: use --surrogate lovasz with --loss hamming");
  const SurrogateKind kind = make_surrogate(surrogate_flags, spec);
  const SetFunction l = build_loss(spec).normalized();
  const std::vector<SurfaceRow> rows = surface_grid(kind, l, grid_min, grid_max, resolution);
  std::ofstream file;
  write_surface_csv(open_or_stdout(out, file), rows);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth

int cmd_synth(int n, int p, int d, std::uint64_t seed, double rate,
              const std::string& out) {
  SyntheticSpec spec = SyntheticSpec::with_defaults(n, p, d, seed);
  spec.positive_rate = rate;
  const std::vector<Bag> bags = gen_early_detection(spec);
  if (out.empty()) {
    write_dataset_jsonl(std::cout, bags);
  } else {
    save_dataset_jsonl(out, bags);
    std::printf("wrote %zu bags (p=%d, d=%d) to %s\n", bags.size(), p, d, out.c_str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train / eval

struct TrainFlags {
  double C = 1.0;
  double epsilon = 0.01;
  int max_iterations = 200;
  int qp_max_passes = 10000;
  std::uint64_t seed = 0;
};

void add_train_flags(CLI::App* cmd, TrainFlags& f) {
  cmd->add_option("--C", f.C, "regularization trade-off");
  cmd->add_option("--epsilon", f.epsilon, "primal-dual gap tolerance");
  cmd->add_option("--max-iter", f.max_iterations, "cutting-plane iteration cap");
  cmd->add_option("--qp-passes", f.qp_max_passes, "dual coordinate-ascent pass cap");
  cmd->add_option("--seed", f.seed, "random seed");
}

TrainConfig make_train_config(const LossFlags& loss_flags,
                              const SurrogateFlags& surrogate_flags,
                              const TrainFlags& train_flags, int p) {
  TrainConfig config;
  config.C = train_flags.C;
  config.epsilon = train_flags.epsilon;
  config.max_iterations = train_flags.max_iterations;
  config.qp_max_passes = train_flags.qp_max_passes;
  config.seed = train_flags.seed;
  config.loss = make_loss_spec(loss_flags, p);
  config.surrogate = make_surrogate(surrogate_flags, config.loss);
  return config;
}

int cmd_train(const std::string& data_path, const LossFlags& loss_flags,
              const SurrogateFlags& surrogate_flags, const TrainFlags& train_flags,
              const std::string& model_out, const std::string& gap_out) {
  const std::vector<Bag> data = load_dataset_jsonl(data_path);
  if (data.empty()) throw std::runtime_error("empty dataset: " + data_path);
  const int p = data.front().features.rows;
  const TrainConfig config = make_train_config(loss_flags, surrogate_flags, train_flags, p);
  const TrainResult result = train_cutting_plane(data, config);

  save_model(model_out, result.model);
  if (!gap_out.empty()) {
    std::ofstream gap_file(gap_out);
    if (!gap_file) throw std::runtime_error("cannot write " + gap_out);
    gap_file << "iteration,primal,dual,gap\n";
    for (const GapRecord& rec : result.state.gap_trace)
      gap_file << rec.iteration << ',' << fmt9(rec.primal) << ',' << fmt9(rec.dual)
               << ',' << fmt9(rec.gap) << '\n';
  }
  const GapRecord last = result.state.gap_trace.empty() ? GapRecord{}
                                                        : result.state.gap_trace.back();
  std::printf("converged %s after %d iterations, gap %s\n",
              result.state.converged ? "yes" : "no", result.state.iterations,
              fmt9(last.gap).c_str());
  std::printf("train %s %s\n", config.loss.name().c_str(),
              fmt9(empirical_risk(result.model, data, config.loss)).c_str());
  return kExitOk;
}

int cmd_eval(const std::string& data_path, const std::string& model_path,
             const LossFlags& loss_flags) {
  const std::vector<Bag> data = load_dataset_jsonl(data_path);
  if (data.empty()) throw std::runtime_error("empty dataset: " + data_path);
  const LinearModel model = load_model(model_path);
  const int p = data.front().features.rows;
  const LossSpec spec = make_loss_spec(loss_flags, p);
  std::printf("%s %s\n", spec.name().c_str(),
              fmt9(empirical_risk(model, data, spec)).c_str());
  if (spec.kind != LossKind::hamming)
    std::printf("zeroone %s\n",
                fmt9(empirical_risk(model, data, LossSpec::hamming_loss(p))).c_str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// compare / gap

int cmd_compare(const LossFlags& loss_flags, const TrainFlags& train_flags,
                const std::string& inference, int repeats, int n_train, int n_test,
                int p, int d, const std::string& train_data,
                const std::string& test_data, const std::string& out) {
  const Inference ms_inference =
      inference == "exact" ? Inference::exact : Inference::greedy;
  CrossTable table;
  const std::vector<LossSpec> test_losses = {make_loss_spec(loss_flags, p),
                                             LossSpec::hamming_loss(p)};
  const std::vector<TrainSpec> specs =
      default_train_specs(test_losses[0], train_flags.C, train_flags.epsilon,
                          train_flags.max_iterations, ms_inference);
  if (!train_data.empty() || !test_data.empty()) {
    if (train_data.empty() || test_data.empty())
      throw std::invalid_argument("compare: need both --train-data and --test-data");
    const std::vector<Bag> train = load_dataset_jsonl(train_data);
    const std::vector<Bag> test = load_dataset_jsonl(test_data);
    if (train.empty() || test.empty()) throw std::runtime_error("empty dataset");
    if (train.front().features.rows != p)
      throw std::invalid_argument("compare: --p does not match the dataset");
    table = run_cross_comparison(train, test, specs, test_losses, repeats,
                                 train_flags.seed);
  } else {
    const SyntheticSpec train_proto =
        SyntheticSpec::with_defaults(n_train, p, d, train_flags.seed);
    const SyntheticSpec test_proto =
        SyntheticSpec::with_defaults(n_test, p, d, train_flags.seed + 777777);
    table = run_cross_comparison(train_proto, test_proto, specs, test_losses, repeats);
  }
  std::ofstream file;
  write_cross_table_csv(open_or_stdout(out, file), table);
  return kExitOk;
}

int cmd_gap(const LossFlags& loss_flags, const TrainFlags& train_flags,
            const std::string& inference, const std::string& data_path, int n, int p,
            int d, const std::string& out) {
  const Inference ms_inference =
      inference == "exact" ? Inference::exact : Inference::greedy;
  std::vector<Bag> data;
  if (!data_path.empty()) {
    data = load_dataset_jsonl(data_path);
    if (data.empty()) throw std::runtime_error("empty dataset: " + data_path);
  } else {
    data = gen_early_detection(SyntheticSpec::with_defaults(n, p, d, train_flags.seed));
  }
  const int actual_p = data.front().features.rows;
  const LossSpec spec = make_loss_spec(loss_flags, actual_p);
  const std::vector<TrainSpec> specs =
      default_train_specs(spec, train_flags.C, train_flags.epsilon,
                          train_flags.max_iterations, ms_inference);
  const std::vector<NamedTrace> traces = capture_gap_traces(data, specs);
  std::ofstream file;
  write_traces_csv(open_or_stdout(out, file), traces);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convex surrogates for submodular set losses"};
  app.require_subcommand(1);
  // repeated flags take the last value, so command-line flags override
  // config-file tokens spliced in ahead of them
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  // check
  auto* check = app.add_subcommand("check", "verify structural properties of a loss");
  LossFlags check_loss;
  std::string check_gamma = "auto";
  std::uint64_t check_seed = 0;
  int check_trials = 1000;
  int check_points = 200;
  add_loss_flags(check, check_loss);
  check->add_option("--gamma", check_gamma, "margin-rescaling scale (auto or float)");
  check->add_option("--seed", check_seed, "random seed");
  check->add_option("--trials", check_trials, "convexity probe triples");
  check->add_option("--points", check_points, "dominance sample points");
  add_config_flag(check);

  // surface
  auto* surface = app.add_subcommand("surface", "emit a surrogate surface grid as CSV");
  LossFlags surface_loss;
  SurrogateFlags surface_kind;
  double surface_min = 0.0, surface_max = 1.0;
  int surface_res = 101;
  std::string surface_out;
  add_loss_flags(surface, surface_loss);
  add_surrogate_flags(surface, surface_kind);
  surface->add_option("--min", surface_min, "grid lower bound in margin space");
  surface->add_option("--max", surface_max, "grid upper bound in margin space");
  surface->add_option("--res", surface_res, "grid resolution per axis");
  surface->add_option("--out", surface_out, "output CSV path (default stdout)");
  add_config_flag(surface);

  // synth
  auto* synth = app.add_subcommand("synth", "generate the early-detection synthetic dataset");
  int synth_n = 200, synth_p = 15, synth_d = 2;
  std::uint64_t synth_seed = 0;
  double synth_rate = 0.5;
  std::string synth_out;
  synth->add_option("--n", synth_n, "number of bags");
  synth->add_option("--p", synth_p, "elements per bag");
  synth->add_option("--d", synth_d, "feature dimension");
  synth->add_option("--seed", synth_seed, "random seed");
  synth->add_option("--rate", synth_rate, "positive rate per slot");
  synth->add_option("--out", synth_out, "output JSONL path (default stdout)");
  add_config_flag(synth);

  // train
  auto* train = app.add_subcommand("train", "cutting-plane training of a per-label linear model");
  LossFlags train_loss;
  SurrogateFlags train_kind;
  TrainFlags train_flags;
  std::string train_data, train_out, train_gap_out;
  add_loss_flags(train, train_loss);
  add_surrogate_flags(train, train_kind);
  add_train_flags(train, train_flags);
  train->add_option("--data", train_data, "training dataset (JSONL)")->required();
  train->add_option("--out", train_out, "model output path")->required();
  train->add_option("--gap-out", train_gap_out, "gap trace CSV path");
  add_config_flag(train);

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a saved model");
  LossFlags eval_loss;
  std::string eval_data, eval_model;
  add_loss_flags(eval, eval_loss);
  eval->add_option("--data", eval_data, "dataset (JSONL)")->required();
  eval->add_option("--model", eval_model, "model path")->required();
  add_config_flag(eval);

  // compare
  auto* compare = app.add_subcommand("compare", "train-loss x test-loss cross comparison");
  LossFlags compare_loss;
  TrainFlags compare_flags;
  std::string compare_inference = "greedy";
  int compare_repeats = 10, compare_n_train = 150, compare_n_test = 600;
  int compare_d = 2;
  std::string compare_train_data, compare_test_data, compare_out;
  compare_loss.loss = "early";
  compare_loss.p = 15;
  add_loss_flags(compare, compare_loss);
  add_train_flags(compare, compare_flags);
  compare->add_option("--inference", compare_inference, "inference for margin/slack rows")
      ->check(CLI::IsMember({"exact", "greedy"}));
  compare->add_option("--repeats", compare_repeats, "number of repeats");
  compare->add_option("--n-train", compare_n_train, "training bags per repeat");
  compare->add_option("--n-test", compare_n_test, "test bags per repeat");
  compare->add_option("--d", compare_d, "feature dimension");
  compare->add_option("--train-data", compare_train_data, "external training dataset");
  compare->add_option("--test-data", compare_test_data, "external test dataset");
  compare->add_option("--out", compare_out, "output CSV path (default stdout)");
  add_config_flag(compare);

  // gap
  auto* gap = app.add_subcommand("gap", "capture primal-dual gap traces per surrogate");
  LossFlags gap_loss;
  TrainFlags gap_flags;
  std::string gap_inference = "greedy";
  std::string gap_data, gap_out;
  int gap_n = 200, gap_d = 2;
  gap_loss.loss = "early";
  gap_loss.p = 15;
  add_loss_flags(gap, gap_loss);
  add_train_flags(gap, gap_flags);
  gap->add_option("--inference", gap_inference, "inference for margin/slack traces")
      ->check(CLI::IsMember({"exact", "greedy"}));
  gap->add_option("--data", gap_data, "dataset (JSONL); otherwise synthetic");
  gap->add_option("--n", gap_n, "synthetic bag count");
  gap->add_option("--d", gap_d, "synthetic feature dimension");
  gap->add_option("--out", gap_out, "output CSV path (default stdout)");
  add_config_flag(gap);

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11 takes a reversed vector
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*check)
      return cmd_check(check_loss, check_gamma, check_seed, check_trials, check_points);
    if (*surface)
      return cmd_surface(surface_loss, surface_kind, surface_min, surface_max,
                         surface_res, surface_out);
    if (*synth)
      return cmd_synth(synth_n, synth_p, synth_d, synth_seed, synth_rate, synth_out);
    if (*train)
      return cmd_train(train_data, train_loss, train_kind, train_flags, train_out,
                       train_gap_out);
    if (*eval) return cmd_eval(eval_data, eval_model, eval_loss);
    if (*compare)
      return cmd_compare(compare_loss, compare_flags, compare_inference,
                         compare_repeats, compare_n_train, compare_n_test,
                         compare_loss.p, compare_d, compare_train_data,
                         compare_test_data, compare_out);
    if (*gap)
      return cmd_gap(gap_loss, gap_flags, gap_inference, gap_data, gap_n, gap_loss.p,
                     gap_d, gap_out);
  } catch (const DataFormatError& e) {
    std::cerr << "data error at " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

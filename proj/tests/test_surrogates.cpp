#include "lovhinge/surrogates.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "lovhinge/losses.hpp"
#include "lovhinge/lovasz.hpp"
#include "lovhinge/rng.hpp"
#include "support.hpp"

using namespace lovhinge;
namespace tst = lovhinge::testing;

namespace {
const LabelVector kY2{+1, +1};
}

TEST_CASE("margin rescaling values") {
  // at the (1,1) vertex of the supermodular table the full flip dominates
  const std::vector<double> g0{0.0, 0.0};
  const InferenceResult res =
      margin_rescale_value(tst::vis_supermodular(), kY2, g0, Inference::exact);
  CHECK(res.value == doctest::Approx(2.8));
  CHECK(res.argmax == LabelVector{-1, -1});
  CHECK(res.value == doctest::Approx(tst::margin_oracle(tst::vis_supermodular(), kY2, g0)));

  // confident correct prediction: every flip loses more margin than it gains
  const SetFunction hamming = build_loss(LossSpec::hamming_loss(3));
  const LabelVector y3{+1, -1, +1};
  std::vector<double> g3{2.0, -2.0, 2.0};
  CHECK(margin_rescale_value(hamming, y3, g3, Inference::exact).value == 0.0);

  // keeping the true labeling is always feasible, so the value is nonnegative
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const SetFunction l = tst::random_increasing_submodular(3, rng);
    const LabelVector y = tst::random_labels(3, rng);
    const std::vector<double> g = tst::random_vector(3, rng, -2.0, 2.0);
    CHECK(margin_rescale_value(l, y, g, Inference::exact).value >= 0.0);
  }
}

TEST_CASE("slack rescaling values") {
  // non-monotonic table at the (1,1) vertex: singleton terms win over l({1,2})
  const InferenceResult res = slack_rescale_value(tst::vis_nonmonotonic(), kY2,
                                                  std::vector<double>{0.0, 0.0},
                                                  Inference::exact);
  CHECK(res.value == doctest::Approx(1.0));

  // increasing table at the (1,0) vertex reproduces l({1})
  const std::vector<double> g10 = vertex_scores(0b01, kY2);
  CHECK(slack_rescale_value(tst::vis_increasing(), kY2, g10, Inference::exact).value ==
        doctest::Approx(1.0));
  CHECK(slack_rescale_value(tst::vis_increasing(), kY2, g10, Inference::exact).value ==
        doctest::Approx(tst::slack_oracle(tst::vis_increasing(), kY2, g10)));

  // perfect confident prediction: all rescaled slacks are nonpositive
  Rng rng(17);
  const SetFunction l = tst::random_increasing_submodular(4, rng);
  const LabelVector y = tst::random_labels(4, rng);
  std::vector<double> g(4);
  for (int j = 0; j < 4; ++j) g[j] = 2.0 * y[j];
  CHECK(slack_rescale_value(l, y, g, Inference::exact).value == 0.0);
}

TEST_CASE("exact inference agrees with the labeling-recursion oracle") {
  Rng rng(555);
  for (int t = 0; t < 25; ++t) {
    const int p = 2 + static_cast<int>(rng.integer(4));
    const SetFunction l = tst::random_submodular(p, rng);
    const LabelVector y = tst::random_labels(p, rng);
    const std::vector<double> g = tst::random_vector(p, rng, -2.0, 2.0);
    const double gamma = rng.uniform(0.5, 3.0);
    CHECK(margin_rescale_value(l, y, g, Inference::exact, gamma).value ==
          doctest::Approx(tst::margin_oracle(l, y, g, gamma)).epsilon(1e-12));
    CHECK(slack_rescale_value(l, y, g, Inference::exact).value ==
          doctest::Approx(tst::slack_oracle(l, y, g)).epsilon(1e-12));
  }
}

TEST_CASE("greedy inference never beats exact") {
  Rng rng(888);
  for (int t = 0; t < 30; ++t) {
    const int p = 2 + static_cast<int>(rng.integer(5));
    const SetFunction l = tst::random_submodular(p, rng);
    const LabelVector y = tst::random_labels(p, rng);
    const std::vector<double> g = tst::random_vector(p, rng, -2.0, 2.0);
    CHECK(margin_rescale_value(l, y, g, Inference::greedy).value <=
          margin_rescale_value(l, y, g, Inference::exact).value + 1e-12);
    CHECK(slack_rescale_value(l, y, g, Inference::greedy).value <=
          slack_rescale_value(l, y, g, Inference::exact).value + 1e-12);
  }
}

TEST_CASE("max_margin_gamma") {
  CHECK(max_margin_gamma(tst::vis_increasing()) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(max_margin_gamma(tst::vis_increasing()) ==
        doctest::Approx(tst::gamma_bound_oracle(tst::vis_increasing())));

  CHECK(max_margin_gamma(build_loss(LossSpec::hamming_loss(2))) == doctest::Approx(2.0));

  // constant-after-empty loss admits every scale
  const SetFunction plateau(3, [](SubsetMask m) { return m ? 1.0 : 0.0; },
                            Monotonicity::increasing, Modularity::submodular);
  CHECK(std::isinf(max_margin_gamma(plateau)));

  CHECK_THROWS_AS(max_margin_gamma(tst::vis_nonmonotonic()), std::invalid_argument);
}

TEST_CASE("vertex scores reproduce the margin mapping exactly") {
  Rng rng(424242);
  for (int t = 0; t < 20; ++t) {
    const int p = 1 + static_cast<int>(rng.integer(8));
    const LabelVector y = tst::random_labels(p, rng);
    const SubsetMask vertex = rng.integer(SubsetMask{1} << p);
    const std::vector<double> g = vertex_scores(vertex, y);
    const std::vector<double> u = margins(y, g);
    for (int j = 0; j < p; ++j)
      CHECK(u[j] == ((vertex >> j) & 1 ? 1.0 : 0.0));
  }
}

TEST_CASE("is_extension on the visualization losses") {
  const SurrogateKind lovasz{SurrogateTag::lovasz_hinge, Inference::exact, 1.0};
  const SurrogateKind slack{SurrogateTag::slack_rescale, Inference::exact, 1.0};

  CHECK(is_extension(lovasz, tst::vis_increasing(), kY2).extension);
  CHECK(is_extension(lovasz, tst::vis_nonmonotonic(), kY2).extension);
  CHECK(is_extension(slack, tst::vis_increasing(), kY2).extension);
  CHECK(is_extension(slack, tst::vis_supermodular(), kY2).extension);

  const ExtensionReport bad = is_extension(slack, tst::vis_nonmonotonic(), kY2);
  REQUIRE_FALSE(bad.extension);
  REQUIRE(bad.witnesses.size() == 1);
  CHECK(bad.witnesses[0].vertex == 0b11);
  CHECK(bad.witnesses[0].surrogate == doctest::Approx(1.0));
  CHECK(bad.witnesses[0].loss == doctest::Approx(0.4));

  const double gamma = max_margin_gamma(tst::vis_increasing());
  const SurrogateKind margin{SurrogateTag::margin_rescale, Inference::exact, gamma};
  CHECK(is_extension(margin, tst::vis_increasing(), kY2).extension);
  const SurrogateKind margin_super{SurrogateTag::margin_rescale, Inference::exact,
                                   max_margin_gamma(tst::vis_supermodular())};
  CHECK(is_extension(margin_super, tst::vis_supermodular(), kY2).extension);
}

TEST_CASE("gamma rule across random increasing losses") {
  Rng rng(606);
  int finite_seen = 0;
  int doubled_failures = 0;
  for (int t = 0; t < 50; ++t) {
    const int p = 2 + static_cast<int>(rng.integer(4));  // p in [2, 5]
    const SetFunction l = tst::random_increasing_submodular(p, rng);
    const LabelVector y = tst::random_labels(p, rng);
    const double gamma = max_margin_gamma(l);
    if (!std::isfinite(gamma)) continue;
    ++finite_seen;
    const SurrogateKind at_bound{SurrogateTag::margin_rescale, Inference::exact, gamma};
    CHECK(is_extension(at_bound, l, y).extension);
    const SurrogateKind doubled{SurrogateTag::margin_rescale, Inference::exact,
                                2.0 * gamma};
    if (!is_extension(doubled, l, y).extension) ++doubled_failures;
  }
  CHECK(finite_seen > 0);
  CHECK(doubled_failures >= 1);
}

TEST_CASE("convexity probes") {
  const SurrogateKind lovasz{SurrogateTag::lovasz_hinge, Inference::exact, 1.0};
  CHECK(convexity_probe(lovasz, tst::vis_increasing(), kY2, 500, 1).convex);
  CHECK(convexity_probe(lovasz, tst::vis_nonmonotonic(), kY2, 500, 2).convex);

  // max of affine pieces is convex regardless of the loss structure
  const SurrogateKind margin{SurrogateTag::margin_rescale, Inference::exact, 1.0};
  CHECK(convexity_probe(margin, tst::vis_supermodular(), kY2, 300, 3).convex);

  // forcing per-component thresholds on a non-monotonic loss breaks it
  const SetFunction bad = tst::vis_nonmonotonic();
  const auto wrong = [&](std::span<const double> g) {
    return lovasz_hinge_thresholded(bad, kY2, g);
  };
  const ConvexityReport rep = midpoint_convexity_probe(wrong, 2, 10000, 4);
  CHECK_FALSE(rep.convex);
}

TEST_CASE("dominance inside the unit cube") {
  const DominanceReport rep = dominance_check(tst::vis_increasing(), kY2, 1000, 9);
  CHECK(rep.dominant);

  // at the vertices all three surrogates take the loss value
  for (SubsetMask vertex = 0; vertex < 4; ++vertex) {
    const std::vector<double> g = vertex_scores(vertex, kY2);
    const double lh = lovasz_hinge(tst::vis_increasing(), kY2, g);
    const double sl =
        slack_rescale_value(tst::vis_increasing(), kY2, g, Inference::exact).value;
    CHECK(lh == doctest::Approx(sl).epsilon(1e-12));
  }

  CHECK(dominance_check(build_loss(LossSpec::hamming_loss(3)), LabelVector{+1, -1, +1},
                        300, 10)
            .dominant);
  CHECK_THROWS_AS(dominance_check(tst::vis_supermodular(), kY2, 10, 0),
                  std::invalid_argument);
}

TEST_CASE("exact inference decomposes for modular losses above the dense cap") {
  // For Hamming the loss-augmented objective is modular in the flip set, so
  // the exact maximum has the closed form sum_j (1 - 2 g_j y_j)_+.
  Rng rng(13);
  const int p = 17;
  const SetFunction hamming = build_loss(LossSpec::hamming_loss(p));
  const LabelVector y = tst::random_labels(p, rng);
  const std::vector<double> g = tst::random_vector(p, rng, -1.5, 1.5);
  double expected = 0.0;
  for (int j = 0; j < p; ++j) expected += std::max(0.0, 1.0 - 2.0 * g[j] * y[j]);
  CHECK(margin_rescale_value(hamming, y, g, Inference::exact).value ==
        doctest::Approx(expected).epsilon(1e-12));

  const SetFunction too_big = build_loss(LossSpec::hamming_loss(21));
  CHECK_THROWS_AS(
      margin_rescale_value(too_big, LabelVector(21, +1),
                           std::vector<double>(21, 0.0), Inference::exact),
      std::invalid_argument);
}

TEST_CASE("surrogates are nonnegative for normalized increasing losses") {
  Rng rng(2468);
  for (int t = 0; t < 15; ++t) {
    const int p = 2 + static_cast<int>(rng.integer(4));
    const SetFunction l = tst::random_increasing_submodular(p, rng);
    const LabelVector y = tst::random_labels(p, rng);
    const std::vector<double> g = tst::random_vector(p, rng, -2.0, 2.0);
    CHECK(lovasz_hinge(l, y, g) >= 0.0);
    CHECK(margin_rescale_value(l, y, g, Inference::exact).value >= 0.0);
    CHECK(slack_rescale_value(l, y, g, Inference::exact).value >= 0.0);
  }
}

TEST_CASE("surface grids") {
  const SurrogateKind lovasz{SurrogateTag::lovasz_hinge, Inference::exact, 1.0};
  const SetFunction l = tst::vis_increasing();
  const std::vector<SurfaceRow> rows = surface_grid(lovasz, l, 0.0, 1.0, 101);
  REQUIRE(rows.size() == 101u * 101u);

  // row-major order: s1 constant across the first inner block
  CHECK(rows[0].s1 == 0.0);
  CHECK(rows[0].s2 == 0.0);
  CHECK(rows[100].s1 == 0.0);
  CHECK(rows[100].s2 == 1.0);
  CHECK(rows[0].value == 0.0);
  CHECK(rows.back().value == doctest::Approx(1.2).epsilon(1e-15));

  // the interior sample from the extension example
  const std::vector<SurfaceRow> coarse = surface_grid(lovasz, l, 0.0, 1.0, 3);
  CHECK(coarse[4].s1 == 0.5);
  CHECK(coarse[4].s2 == 0.5);
  CHECK(coarse[4].value == doctest::Approx(0.6).epsilon(1e-15));

  // determinism: identical runs, identical bytes
  std::ostringstream once, twice;
  write_surface_csv(once, rows);
  write_surface_csv(twice, surface_grid(lovasz, l, 0.0, 1.0, 101));
  CHECK(once.str() == twice.str());
  CHECK(once.str().substr(0, 12) == "s1,s2,value\n");

  const SetFunction p3 = build_loss(LossSpec::hamming_loss(3));
  CHECK_THROWS_AS(surface_grid(lovasz, p3, 0.0, 1.0, 5), std::invalid_argument);
}

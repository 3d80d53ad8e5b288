#include "lovhinge/losses.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "lovhinge/rng.hpp"
#include "support.hpp"

using namespace lovhinge;
namespace tst = lovhinge::testing;

TEST_CASE("early detection weights prefix errors by exp(-i)") {
  const LossSpec spec = LossSpec::early_detection_loss(2);
  const LabelVector y{+1, +1};
  // one error at the first slot: exp(-1)*min(1, 0.5) + exp(-2)*min(1, 1)
  const double expected = std::exp(-1.0) * 0.5 + std::exp(-2.0) * 1.0;
  CHECK(loss_value(spec, y, 0b01) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(loss_value(spec, y, 0) == 0.0);

  // an early error costs strictly more than a late one
  const LossSpec p6 = LossSpec::early_detection_loss(6);
  CHECK(loss_value(p6, LabelVector(6, +1), 0b000001) >
        loss_value(p6, LabelVector(6, +1), 0b100000));
}

TEST_CASE("exp_size and concave_plus_modular values") {
  CHECK(loss_value(LossSpec::exp_size_loss(4, 1.0), LabelVector(4, +1), 0) == 0.0);
  CHECK(loss_value(LossSpec::exp_size_loss(4, 2.0), LabelVector(4, +1), 0b11) ==
        doctest::Approx(1.0 - std::exp(-4.0)).epsilon(1e-15));

  const LossSpec mix = LossSpec::concave_plus_modular_loss(3, {1.0, 0.5, 0.2});
  CHECK(loss_value(mix, LabelVector(3, +1), 0b001) ==
        doctest::Approx((1.0 - std::exp(-1.0)) + 1.0).epsilon(1e-15));
}

TEST_CASE("jaccard counts false negatives and positives relative to y") {
  const LossSpec spec = LossSpec::jaccard_loss(4);
  const LabelVector y{+1, -1, +1, -1};  // m = 2
  // flip element 1 (false negative): 1 - (2-1)/(2+0)
  CHECK(loss_value(spec, y, 0b0001) == doctest::Approx(0.5));
  // flip element 2 (false positive): 1 - 2/(2+1)
  CHECK(loss_value(spec, y, 0b0010) == doctest::Approx(1.0 / 3.0));
  // flip everything: n=2, fp=2 -> 1 - 0/(2+2)
  CHECK(loss_value(spec, y, 0b1111) == doctest::Approx(1.0));

  CHECK_THROWS_AS(loss_value(spec, LabelVector(4, -1), 0b0001), std::domain_error);
  CHECK_THROWS_AS(build_loss(spec, LabelVector(4, -1)), std::domain_error);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(LossSpec::capped_weighted_loss(2, {1.0, 1.0}, 2.5),
                  std::invalid_argument);  // l_max >= sum(beta)
  CHECK_THROWS_AS(LossSpec::capped_weighted_loss(2, {1.0, -0.1}, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(LossSpec::capped_weighted_loss(2, {1.0}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(LossSpec::exp_size_loss(3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(LossSpec::sqrt_modular_loss(2, {0.5, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(LossSpec::table_loss(2, {0.0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("built losses are normalized at the empty set") {
  Rng rng(5);
  const LabelVector y{+1, -1, +1};
  for (const LossSpec& spec :
       {LossSpec::hamming_loss(3), LossSpec::jaccard_loss(3),
        LossSpec::capped_weighted_loss(3, {1.0, 0.5, 0.2}, 1.3),
        LossSpec::concave_plus_modular_loss(3, {0.3, 0.1, 0.2}),
        LossSpec::exp_size_loss(3, 1.1), LossSpec::sqrt_modular_loss(3, {1.0, 2.0, 0.5}),
        LossSpec::early_detection_loss(3)}) {
    CHECK(build_loss(spec, y).is_normalized());
  }
}

TEST_CASE("table losses carry no structure assumptions") {
  const SetFunction t = tst::vis_supermodular();
  CHECK(t.declared_modularity() == Modularity::unknown);
  CHECK(t.declared_monotonicity() == Monotonicity::unknown);
}

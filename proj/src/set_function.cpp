#include "lovhinge/set_function.hpp"

#include <bit>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

namespace lovhinge {

int mask_cardinality(SubsetMask a) { return std::popcount(a); }

struct SetFunction::Impl {
  int p = 0;
  std::function<double(SubsetMask)> oracle;
  Monotonicity declared_mono = Monotonicity::unknown;
  Modularity declared_mod = Modularity::unknown;

  std::vector<double> table;  // dense values, filled when p <= 16

  mutable std::unordered_map<SubsetMask, double> memo;  // p > 16
  mutable std::mutex memo_mutex;

  mutable std::once_flag mono_once;
  mutable std::once_flag mod_once;
  mutable Monotonicity resolved_mono = Monotonicity::unknown;
  mutable Modularity resolved_mod = Modularity::unknown;

  double eval(SubsetMask a) const {
    if (!table.empty()) return table[a];
    {
      std::lock_guard<std::mutex> lock(memo_mutex);
      auto it = memo.find(a);
      if (it != memo.end()) return it->second;
    }
    const double v = oracle(a);
    std::lock_guard<std::mutex> lock(memo_mutex);
    memo.emplace(a, v);
    return v;
  }
};

SetFunction::SetFunction(int p, std::function<double(SubsetMask)> oracle,
                         Monotonicity mono, Modularity mod) {
  if (p < 1 || p > 63)
    throw std::invalid_argument("SetFunction: ground-set size must be in [1, 63]");
  if (!oracle) throw std::invalid_argument("SetFunction: null oracle");
  auto impl = std::make_shared<Impl>();
  impl->p = p;
  impl->oracle = std::move(oracle);
  impl->declared_mono = mono;
  impl->declared_mod = mod;
  if (p <= kBruteForceMaxGround) {
    const SubsetMask n = SubsetMask{1} << p;
    impl->table.resize(n);
    for (SubsetMask a = 0; a < n; ++a) impl->table[a] = impl->oracle(a);
  }
  impl_ = std::move(impl);
}

int SetFunction::ground_size() const {
  if (!impl_) throw std::logic_error("SetFunction: empty");
  return impl_->p;
}

double SetFunction::value(SubsetMask a) const {
  if (!impl_) throw std::logic_error("SetFunction: empty");
  if (a >> impl_->p)
    throw std::invalid_argument("SetFunction: mask has bits outside the ground set");
  return impl_->eval(a);
}

Monotonicity SetFunction::declared_monotonicity() const {
  if (!impl_) throw std::logic_error("SetFunction: empty");
  return impl_->declared_mono;
}

Modularity SetFunction::declared_modularity() const {
  if (!impl_) throw std::logic_error("SetFunction: empty");
  return impl_->declared_mod;
}

Monotonicity SetFunction::resolved_monotonicity() const {
  if (!impl_) throw std::logic_error("SetFunction: empty");
  if (impl_->declared_mono != Monotonicity::unknown) return impl_->declared_mono;
  std::call_once(impl_->mono_once, [this] {
    impl_->resolved_mono = is_increasing(*this).increasing
                               ? Monotonicity::increasing
                               : Monotonicity::non_monotonic;
  });
  return impl_->resolved_mono;
}

Modularity SetFunction::resolved_modularity() const {
  if (!impl_) throw std::logic_error("SetFunction: empty");
  if (impl_->declared_mod != Modularity::unknown) return impl_->declared_mod;
  std::call_once(impl_->mod_once, [this] {
    const bool sub = is_submodular(*this).submodular;
    const bool super = is_submodular(negated()).submodular;
    if (sub && super)
      impl_->resolved_mod = Modularity::modular;
    else if (sub)
      impl_->resolved_mod = Modularity::submodular;
    else if (super)
      impl_->resolved_mod = Modularity::supermodular;
    else
      impl_->resolved_mod = Modularity::unknown;
  });
  return impl_->resolved_mod;
}

SetFunction SetFunction::normalized() const {
  if (!impl_) throw std::logic_error("SetFunction: empty");
  const double at_empty = value(0);
  if (at_empty == 0.0) return *this;
  auto base = impl_;
  return SetFunction(
      impl_->p, [base, at_empty](SubsetMask a) { return base->eval(a) - at_empty; },
      impl_->declared_mono, impl_->declared_mod);
}

SetFunction SetFunction::scaled(double c) const {
  if (!impl_) throw std::logic_error("SetFunction: empty");
  if (!(c >= 0.0)) throw std::invalid_argument("SetFunction::scaled: factor must be >= 0");
  auto base = impl_;
  return SetFunction(
      impl_->p, [base, c](SubsetMask a) { return c * base->eval(a); },
      impl_->declared_mono, impl_->declared_mod);
}

SetFunction SetFunction::negated() const {
  if (!impl_) throw std::logic_error("SetFunction: empty");
  auto base = impl_;
  Modularity mod = impl_->declared_mod;
  if (mod == Modularity::submodular)
    mod = Modularity::supermodular;
  else if (mod == Modularity::supermodular)
    mod = Modularity::submodular;
  return SetFunction(
      impl_->p, [base](SubsetMask a) { return -base->eval(a); },
      Monotonicity::unknown, mod);
}

namespace {

void require_brute_force_size(const SetFunction& l, const char* what) {
  if (l.ground_size() > kBruteForceMaxGround)
    throw std::invalid_argument(std::string(what) + ": ground-set size " +
                                std::to_string(l.ground_size()) +
                                " exceeds the brute-force cap of " +
                                std::to_string(kBruteForceMaxGround));
}

}  // namespace

SubmodularityReport is_submodular(const SetFunction& l, double tol) {
  require_brute_force_size(l, "is_submodular");
  const int p = l.ground_size();
  const SubsetMask n = SubsetMask{1} << p;
  for (SubsetMask a = 0; a < n; ++a) {
    const double la = l(a);
    for (SubsetMask b = a + 1; b < n; ++b) {
      if (la + l(b) < l(a | b) + l(a & b) - tol)
        return {false, PairWitness{a, b}};
    }
  }
  return {true, std::nullopt};
}

MonotonicityReport is_increasing(const SetFunction& l, double tol) {
  require_brute_force_size(l, "is_increasing");
  const int p = l.ground_size();
  const SubsetMask n = SubsetMask{1} << p;
  for (SubsetMask a = 0; a < n; ++a) {
    const double la = l(a);
    for (int x = 0; x < p; ++x) {
      const SubsetMask bit = SubsetMask{1} << x;
      if (a & bit) continue;
      if (l(a | bit) < la - tol) return {false, ElementWitness{a, x}};
    }
  }
  return {true, std::nullopt};
}

SubsetMask misprediction_set(const LabelVector& truth,
                             const LabelVector& prediction) {
  if (truth.size() != prediction.size())
    throw std::invalid_argument("misprediction_set: length mismatch");
  if (truth.size() > 63)
    throw std::invalid_argument("misprediction_set: more than 63 elements");
  SubsetMask m = 0;
  for (std::size_t i = 0; i < truth.size(); ++i)
    if (truth[i] != prediction[i]) m |= SubsetMask{1} << i;
  return m;
}

}  // namespace lovhinge

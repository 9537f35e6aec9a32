// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

// Shapley values of cooperative games over n players (text spans).

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace xabsa::explain {

/// active[i] is true when player i is in the coalition.
using Coalition = std::vector<bool>;

/// v(S) for batches of coalitions. Must be deterministic; results must not
/// depend on how a caller groups coalitions into batches.
class ValueFunction {
 public:
  virtual ~ValueFunction() = default;
  virtual std::size_t size() const = 0;
  virtual std::vector<double> evaluate(std::span<const Coalition> coalitions) const = 0;
};

class LambdaValueFunction : public ValueFunction {
 public:
  LambdaValueFunction(std::size_t n, std::function<double(const Coalition&)> fn)
      : n_(n), fn_(std::move(fn)) {}

  std::size_t size() const override { return n_; }
  std::vector<double> evaluate(std::span<const Coalition> coalitions) const override;

 private:
  std::size_t n_;
  std::function<double(const Coalition&)> fn_;
};

enum class Estimator { kExact, kPermutation, kHierarchical };

std::string_view to_string(Estimator e);

struct ShapleyValues {
  double base_value = 0.0;  // v(empty)
  double full_value = 0.0;  // v(all players)
  std::vector<double> phi;
  std::vector<double> std_error;  // zeros for the exact estimator
  Estimator estimator = Estimator::kExact;
  std::size_t sample_count = 0;  // permutations drawn, 0 when exact
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kDefaultExactLimit = 12;

/// Enumerates all 2^n coalitions:
///   phi_i = sum_{S not containing i} |S|!(n-|S|-1)!/n! (v(S+i) - v(S)).
/// Throws ConfigError when n exceeds `exact_limit` (use the permutation or
/// hierarchical estimator instead). Hard cap of 24 players regardless.
ShapleyValues shapley_exact(const ValueFunction& v,
                            std::size_t exact_limit = kDefaultExactLimit);

/// Uniform draw in [0, bound) by rejection on mt19937_64 output, identical on
/// every standard library (unlike std::uniform_int_distribution).
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// Fisher-Yates on `order` using uniform_below.
void shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng);

/// Average marginal contribution over `samples` random player orderings drawn
/// from mt19937_64(seed). All orderings are generated before any evaluation.
/// std_error is the per-player sample standard deviation / sqrt(samples)
/// (0 when samples == 1).
ShapleyValues shapley_permutation(const ValueFunction& v, std::size_t samples,
                                  std::uint64_t seed,
                                  std::size_t permutations_per_batch = 64);

}  // namespace xabsa::explain

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#include "xabsa/shapley.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "xabsa/error.hpp"

namespace xabsa::explain {
namespace {

constexpr std::size_t kHardExactCap = 24;
constexpr std::size_t kExactBatch = 4096;

void check_result_size(std::size_t got, std::size_t want) {
  if (got != want) {
    throw Error("value function returned " + std::to_string(got) +
                " values for " + std::to_string(want) + " coalitions");
  }
}

}  // namespace

std::vector<double> LambdaValueFunction::evaluate(
    std::span<const Coalition> coalitions) const {
  std::vector<double> out;
  out.reserve(coalitions.size());
  for (const auto& c : coalitions) out.push_back(fn_(c));
  return out;
}

std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::kExact: return "exact";
    case Estimator::kPermutation: return "permutation";
    case Estimator::kHierarchical: return "hierarchical";
  }
  return "exact";
}

ShapleyValues shapley_exact(const ValueFunction& v, std::size_t exact_limit) {
  const std::size_t n = v.size();
  if (n > exact_limit || n > kHardExactCap) {
    throw ConfigError("exact Shapley needs 2^" + std::to_string(n) +
                      " evaluations, over the limit of " +
                      std::to_string(std::min(exact_limit, kHardExactCap)) +
                      " players; use the permutation or hierarchical estimator");
  }
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<double> values;
  values.reserve(count);
  for (std::uint64_t first = 0; first < count; first += kExactBatch) {
    const std::uint64_t last = std::min<std::uint64_t>(count, first + kExactBatch);
    std::vector<Coalition> batch;
    batch.reserve(last - first);
    for (std::uint64_t mask = first; mask < last; ++mask) {
      Coalition c(n);
      for (std::size_t i = 0; i < n; ++i) c[i] = ((mask >> i) & 1U) != 0;
      batch.push_back(std::move(c));
    }
    auto out = v.evaluate(batch);
    check_result_size(out.size(), batch.size());
    values.insert(values.end(), out.begin(), out.end());
  }

  ShapleyValues result;
  result.estimator = Estimator::kExact;
  result.base_value = values.front();
  result.full_value = values.back();
  result.phi.assign(n, 0.0);
  result.std_error.assign(n, 0.0);
  if (n == 0) return result;

  // |S|!(n-|S|-1)!/n! = 1 / (n * C(n-1, |S|))
  std::vector<double> weight(n);
  double binom = 1.0;
  for (std::size_t s = 0; s < n; ++s) {
    weight[s] = 1.0 / (static_cast<double>(n) * binom);
    binom = binom * static_cast<double>(n - 1 - s) / static_cast<double>(s + 1);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    double acc = 0.0;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      if (mask & bit) continue;
      acc += weight[static_cast<std::size_t>(std::popcount(mask))] *
             (values[mask | bit] - values[mask]);
    }
    result.phi[i] = acc;
  }
  return result;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

void shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(order[i - 1], order[j]);
  }
}

ShapleyValues shapley_permutation(const ValueFunction& v, std::size_t samples,
                                  std::uint64_t seed,
                                  std::size_t permutations_per_batch) {
  if (samples < 1) throw ConfigError("permutation Shapley needs at least one sample");
  const std::size_t n = v.size();
  permutations_per_batch = std::max<std::size_t>(1, permutations_per_batch);

  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> orders(samples);
  for (auto& order : orders) {
    order.resize(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(order, rng);
  }

  const std::vector<Coalition> ends = {Coalition(n, false), Coalition(n, true)};
  const auto end_values = v.evaluate(ends);
  check_result_size(end_values.size(), 2);

  ShapleyValues result;
  result.estimator = Estimator::kPermutation;
  result.sample_count = samples;
  result.seed = seed;
  result.base_value = end_values[0];
  result.full_value = end_values[1];
  result.phi.assign(n, 0.0);
  result.std_error.assign(n, 0.0);
  if (n == 0) return result;

  // Welford accumulators per player.
  std::vector<double> mean(n, 0.0);
  std::vector<double> m2(n, 0.0);
  std::size_t seen = 0;

  for (std::size_t first = 0; first < samples; first += permutations_per_batch) {
    const std::size_t last = std::min(samples, first + permutations_per_batch);
    std::vector<Coalition> batch;
    batch.reserve((last - first) * (n - 1));
    for (std::size_t p = first; p < last; ++p) {
      Coalition c(n, false);
      for (std::size_t k = 0; k + 1 < n; ++k) {
        c[orders[p][k]] = true;
        batch.push_back(c);
      }
    }
    const auto out = v.evaluate(batch);
    check_result_size(out.size(), batch.size());

    std::size_t at = 0;
    for (std::size_t p = first; p < last; ++p) {
      ++seen;
      double previous = result.base_value;
      for (std::size_t k = 0; k < n; ++k) {
        const double current = k + 1 < n ? out[at++] : result.full_value;
        const std::size_t player = orders[p][k];
        const double marginal = current - previous;
        previous = current;
        const double delta = marginal - mean[player];
        mean[player] += delta / static_cast<double>(seen);
        m2[player] += delta * (marginal - mean[player]);
      }
    }
  }

  result.phi = mean;
  if (samples > 1) {
    const double m = static_cast<double>(samples);
    for (std::size_t i = 0; i < n; ++i) {
      result.std_error[i] = std::sqrt(m2[i] / (m - 1.0)) / std::sqrt(m);
    }
  }
  return result;
}

}  // namespace xabsa::explain

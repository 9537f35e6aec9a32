// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

// Shared helpers for the unit and acceptance tests.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "xabsa/fileio.hpp"
#include "xabsa/shapley.hpp"

namespace xabsa::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(XABSA_FIXTURE_DIR) / name;
}

inline std::filesystem::path golden(const std::string& name) {
  return std::filesystem::path(XABSA_GOLDEN_DIR) / name;
}

inline std::string fixture_text(const std::string& name) {
  std::string s = read_file(fixture(name));
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("xabsa-" + tag + "-" + std::to_string(rd()) + "-" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mask_of(const explain::Coalition& c) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i]) m |= std::uint64_t{1} << i;
  }
  return m;
}

/// Game with an independent uniform [0, 1) value per coalition. Same
/// definition as tests/oracles/shapley_oracle.py.
inline double hashed_game(std::uint64_t seed, std::uint64_t mask) {
  return static_cast<double>(splitmix64(seed + mask) >> 11) * 0x1.0p-53;
}

/// Table of v over all 2^n coalitions, indexed by bit mask.
inline std::vector<double> random_table(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> t(std::size_t{1} << n);
  for (auto& x : t) x = u(rng);
  return t;
}

inline explain::LambdaValueFunction table_game(const std::vector<double>& table,
                                               std::size_t n) {
  return explain::LambdaValueFunction(
      n, [table](const explain::Coalition& c) { return table[mask_of(c)]; });
}

/// Shapley values by the subset formula, written independently of the
/// library so the estimators have something to answer to.
inline std::vector<double> subset_formula(const std::vector<double>& table,
                                          std::size_t n) {
  std::vector<double> fact(n + 1, 1.0);
  for (std::size_t k = 1; k <= n; ++k) fact[k] = fact[k - 1] * static_cast<double>(k);
  std::vector<double> phi(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
      if (s & bit) continue;
      const auto k = static_cast<std::size_t>(__builtin_popcountll(s));
      const double w = fact[k] * fact[n - k - 1] / fact[n];
      phi[i] += w * (table[s | bit] - table[s]);
    }
  }
  return phi;
}

}  // namespace xabsa::testing

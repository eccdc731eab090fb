// Copyright 2026 The cuspfusion Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cuspfusion/cusp.hpp"
#include "cuspfusion/error.hpp"

namespace cuspfusion {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  bool contains(double v) const noexcept { return v >= lo && v <= hi; }
  bool operator==(const Interval&) const = default;
};

/// Generative setup for a simulated population.
struct SamplerConfig {
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  double sigma = 10.0;
  Interval a_range{-1.0, 1.0};
  Interval b_range{-2.0, 4.0};
  Interval x0_range{-1.0, 1.0};
  MinimizerConfig minimizer{};
  bool exact_mode = false;  // take basin minima from the cubic solution instead of Nelder-Mead

  /// Throws DomainError naming the offending field.
  void validate() const;
};

/// One simulated individual.
struct Person {
  std::int64_t id = 0;
  double a = 0.0;   // demographic index (DB_A)
  double b = 0.0;   // social-media behavior index (DB_B)
  double x0 = 0.0;  // initial guess for the latent state
  double x = 0.0;   // occupied local minimum of V(.; a, b)
  double p = 0.5;   // P(y = 1) = logistic(sigma * x)
  int y = 0;        // vote

  bool operator==(const Person&) const = default;
};

/// Minimization failure annotated with the index of the individual.
class SamplingFailure : public ConvergenceFailure {
 public:
  SamplingFailure(std::size_t index, const std::string& what)
      : ConvergenceFailure("person " + std::to_string(index) + ": " + what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Numerically stable logistic 1 / (1 + exp(-sigma x)).
double vote_probability(double x, double sigma);

/// 1 iff u < p. Throws DomainError when p is outside [0, 1].
int sample_vote(double p, double u);

/// Draws a, b, x0, u per person (in that order) from one seeded stream, then
/// resolves the latent minimum, vote probability and vote.
std::vector<Person> sample_population(const SamplerConfig& cfg);

/// Returns a description of the first violated invariant, or nullopt.
std::optional<std::string> check_person(const Person& person, const SamplerConfig& cfg);

/// The a -> -a reflection of a person: (a, x0, x, y) -> (-a, -x0, -x, 1 - y)
/// with p recomputed from the reflected state.
Person mirrored(const Person& person, double sigma);

/// Largest |x^3 - b x - a| over a population (vectorized).
double max_stationarity_residual(std::span<const Person> population);

}  // namespace cuspfusion

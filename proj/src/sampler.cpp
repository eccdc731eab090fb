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

#include "cuspfusion/sampler.hpp"

#include <cmath>
#include <string>

#include "cuspfusion/kernels.hpp"
#include "cuspfusion/rng.hpp"

namespace cuspfusion {

namespace {

void check_interval(const Interval& r, const char* name) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.lo < r.hi)) {
    throw DomainError(std::string(name) + " must satisfy lower < upper");
  }
}

struct Draw {
  double a, b, x0, u;
};

}  // namespace

void SamplerConfig::validate() const {
  if (n < 1) throw DomainError("n must be >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be > 0");
  check_interval(a_range, "a_range");
  check_interval(b_range, "b_range");
  check_interval(x0_range, "x0_range");
  if (!(minimizer.initial_step > 0.0) || !(minimizer.x_tolerance > 0.0) ||
      !(minimizer.f_tolerance > 0.0) || minimizer.max_iterations < 1) {
    throw DomainError("minimizer settings must be positive");
  }
}

double vote_probability(double x, double sigma) {
  const double z = sigma * x;
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

int sample_vote(double p, double u) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("vote probability outside [0, 1]");
  return u < p ? 1 : 0;
}

std::vector<Person> sample_population(const SamplerConfig& cfg) {
  cfg.validate();

  UniformStream stream(cfg.seed);
  std::vector<Draw> draws(cfg.n);
  for (Draw& d : draws) {
    d.a = stream.uniform(cfg.a_range.lo, cfg.a_range.hi);
    d.b = stream.uniform(cfg.b_range.lo, cfg.b_range.hi);
    d.x0 = stream.uniform(cfg.x0_range.lo, cfg.x0_range.hi);
    d.u = stream.unit();
  }

  std::vector<Person> population(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const Draw& d = draws[i];
    Person& person = population[i];
    person.id = static_cast<std::int64_t>(i);
    person.a = d.a;
    person.b = d.b;
    person.x0 = d.x0;
    const CuspParams params{d.a, d.b};
    try {
      person.x = cfg.exact_mode ? basin_minimum(d.x0, params)
                                : local_minimum_from(d.x0, params, cfg.minimizer);
    } catch (const ConvergenceFailure& e) {
      throw SamplingFailure(i, e.what());
    } catch (const CurvatureFailure& e) {
      throw SamplingFailure(i, e.what());
    }
    person.p = vote_probability(person.x, cfg.sigma);
    person.y = sample_vote(person.p, d.u);
  }
  return population;
}

std::optional<std::string> check_person(const Person& person, const SamplerConfig& cfg) {
  if (!cfg.a_range.contains(person.a)) return "a outside a_range";
  if (!cfg.b_range.contains(person.b)) return "b outside b_range";
  if (!cfg.x0_range.contains(person.x0)) return "x0 outside x0_range";
  const CuspParams params{person.a, person.b};
  if (std::abs(gradient(person.x, params)) > kStationarityTolerance) {
    return "x is not stationary";
  }
  if (curvature(person.x, params) < -kCurvatureTolerance) return "x has negative curvature";
  if (!(person.p >= 0.0 && person.p <= 1.0)) return "p outside [0, 1]";
  if (person.p != vote_probability(person.x, cfg.sigma)) return "p does not match logistic(sigma x)";
  if (person.y != 0 && person.y != 1) return "y not in {0, 1}";
  return std::nullopt;
}

Person mirrored(const Person& person, double sigma) {
  Person out = person;
  out.a = -person.a;
  out.x0 = -person.x0;
  out.x = -person.x;
  out.p = vote_probability(out.x, sigma);
  out.y = 1 - person.y;
  return out;
}

double max_stationarity_residual(std::span<const Person> population) {
  std::vector<double> x(population.size()), a(population.size()), b(population.size());
  for (std::size_t i = 0; i < population.size(); ++i) {
    x[i] = population[i].x;
    a[i] = population[i].a;
    b[i] = population[i].b;
  }
  return kernels::max_stationarity_residual(x, a, b);
}

}  // namespace cuspfusion

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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"

#include "cuspfusion/cusp.hpp"
#include "cuspfusion/datastore.hpp"
#include "cuspfusion/error.hpp"
#include "cuspfusion/influence.hpp"
#include "cuspfusion/logistic.hpp"
#include "cuspfusion/sampler.hpp"

using namespace cuspfusion;

namespace {

Person make_person(std::int64_t id, double a, double b, double x) {
  Person p;
  p.id = id;
  p.a = a;
  p.b = b;
  p.x0 = x;
  p.x = x;
  p.p = vote_probability(x, 10.0);
  p.y = p.p >= 0.5 ? 1 : 0;
  return p;
}

Person on_lower_branch(std::int64_t id, double a, double b) {
  return make_person(id, a, b, critical_points({a, b}).minima.front());
}

Person on_upper_branch(std::int64_t id, double a, double b) {
  return make_person(id, a, b, critical_points({a, b}).minima.back());
}

std::vector<Person> population(std::size_t n, std::uint64_t seed) {
  SamplerConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  return sample_population(cfg);
}

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

TEST_CASE("susceptibility classification") {
  const Person meta = on_lower_branch(1, 0.5, 2.0);
  REQUIRE(meta.x < 0.0);
  const SusceptibilityRecord r = susceptibility(meta);
  CHECK(r.branch == Branch::Metastable);
  REQUIRE(r.delta_b_flip);
  CHECK(*r.delta_b_flip == doctest::Approx(2.0 - 1.1905507889761495).epsilon(1e-12));
  CHECK(std::abs(*r.delta_b_flip - 0.809449) <= 1e-6);
  CHECK(r.flip_direction == FlipDirection::ToOne);
  CHECK_FALSE(r.on_degenerate);

  const SusceptibilityRecord mirror = susceptibility(on_upper_branch(2, -0.5, 2.0));
  CHECK(mirror.branch == Branch::Metastable);
  CHECK(mirror.flip_direction == FlipDirection::ToZero);

  const SusceptibilityRecord aligned = susceptibility(on_upper_branch(3, 0.5, 2.0));
  CHECK(aligned.branch == Branch::Aligned);
  CHECK_FALSE(aligned.delta_b_flip);
  CHECK_FALSE(aligned.flip_direction);

  const SusceptibilityRecord mono = susceptibility(on_upper_branch(4, 0.5, 1.0));
  CHECK(mono.branch == Branch::MonostableNeutral);
  CHECK_FALSE(mono.delta_b_flip);

  for (const Person& p : {on_lower_branch(5, 0.0, 3.0), on_upper_branch(6, 0.0, 3.0)}) {
    const SusceptibilityRecord zero = susceptibility(p);
    CHECK(zero.branch == Branch::MonostableNeutral);
    CHECK_FALSE(zero.delta_b_flip);
    CHECK_FALSE(zero.flip_direction);
  }

  const double fold = fold_boundary_b(0.5);
  CHECK_THROWS_AS(susceptibility(make_person(7, 0.5, fold, 0.0)), DegenerateParameters);
}

TEST_CASE("rank_targets ordering") {
  std::vector<Person> people{
      on_upper_branch(0, 0.5, 1.0),    // monostable
      on_lower_branch(1, 0.5, 2.09),   // metastable, delta about 0.9
      on_upper_branch(2, 0.5, 2.0),    // aligned
      on_lower_branch(3, 0.5, 1.29),   // metastable, delta about 0.1
      make_person(4, 0.5, fold_boundary_b(0.5), 0.0),
  };
  const auto ranked = rank_targets(people);
  REQUIRE(ranked.size() == 5);
  CHECK(ranked[0].id == 3);
  CHECK(ranked[1].id == 1);
  CHECK(*ranked[0].delta_b_flip < *ranked[1].delta_b_flip);
  CHECK(ranked[2].id == 0);
  CHECK(ranked[3].id == 2);
  CHECK(ranked[4].id == 4);
  CHECK(ranked[4].on_degenerate);

  std::vector<Person> ties{on_lower_branch(9, 0.5, 2.0), on_lower_branch(8, 0.5, 2.0)};
  const auto tie_rank = rank_targets(ties);
  CHECK(tie_rank[0].id == 8);

  std::vector<Person> mono;
  for (int i = 5; i >= 0; --i) mono.push_back(on_upper_branch(i, 0.9, -1.0));
  const auto mono_rank = rank_targets(mono);
  for (int i = 0; i < 6; ++i) {
    CHECK(mono_rank[i].id == i);
    CHECK(mono_rank[i].branch != Branch::Metastable);
  }
}

TEST_CASE("ranking a sampled population") {
  const auto pop = population(10000, 1);
  const auto ranked = rank_targets(pop);

  std::set<std::int64_t> ids;
  for (const auto& r : ranked) ids.insert(r.id);
  CHECK(ids.size() == pop.size());
  CHECK(*ids.begin() == 0);
  CHECK(*ids.rbegin() == 9999);

  std::size_t meta = 0;
  for (const auto& r : ranked) meta += r.branch == Branch::Metastable;
  // Oracle (n = 1e5, exact basins): 0.1906.
  CHECK(std::abs(meta / 10000.0 - 0.19) <= 0.03);
  for (std::size_t i = 1; i < meta; ++i) CHECK(*ranked[i - 1].delta_b_flip <= *ranked[i].delta_b_flip);

  for (const Person& p : pop) {
    const auto r = susceptibility(p);
    if (r.branch != Branch::Metastable) continue;
    CHECK(*r.delta_b_flip >= 0.0);
    CHECK(*r.delta_b_flip == doctest::Approx(p.b - fold_boundary_b(p.a)).epsilon(1e-12));
    CHECK((r.flip_direction == FlipDirection::ToOne) == (p.a > 0.0));
  }
}

TEST_CASE("delta_b_flip shifts one-for-one with b") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ua(0.05, 0.95);
  for (int i = 0; i < 200; ++i) {
    const double a = ua(rng);
    const double b = fold_boundary_b(a) + 0.5;
    constexpr double kEps = 1e-3;
    const auto r1 = susceptibility(on_lower_branch(0, a, b));
    const auto r2 = susceptibility(on_lower_branch(0, a, b + kEps));
    REQUIRE(r1.delta_b_flip);
    REQUIRE(r2.delta_b_flip);
    CHECK(std::abs((*r2.delta_b_flip - *r1.delta_b_flip) - kEps) <= 1e-12);
  }
}

TEST_CASE("interventions") {
  const Person meta = on_lower_branch(1, 0.5, 2.0);
  // Lower root of x^3 - 2x - 0.5.
  CHECK(meta.x == doctest::Approx(-1.2670351).epsilon(1e-7));

  const InterventionResult same = apply_intervention(meta, 2.0);
  CHECK(std::abs(same.new_x - meta.x) <= 1e-8);
  CHECK_FALSE(same.flipped);

  const InterventionResult flip = apply_intervention(meta, 1.0);
  CHECK(flip.new_x > 0.0);
  CHECK(flip.flipped);
  CHECK(flip.new_p >= 0.999);
  CHECK(flip.new_b == 1.0);
  CHECK(std::abs(gradient(flip.new_x, {0.5, 1.0})) <= 1e-8);
  CHECK(curvature(flip.new_x, {0.5, 1.0}) > 0.0);

  const InterventionResult stays = apply_intervention(meta, 1.3);
  CHECK(stays.new_x < 0.0);
  CHECK_FALSE(stays.flipped);

  CHECK_THROWS_AS(apply_intervention(meta, std::nan("")), DomainError);
}

TEST_CASE("aligned people never flip under a b sweep") {
  std::vector<double> sweep;
  for (int k = 0; k <= 120; ++k) sweep.push_back(-2.0 + 0.05 * k);
  std::vector<double> down(sweep.rbegin(), sweep.rend());
  sweep.insert(sweep.end(), down.begin(), down.end());

  for (const Person& p : population(1000, 3)) {
    if (susceptibility(p).branch != Branch::Aligned) continue;
    for (double x : hysteresis_path(p, sweep)) CHECK(sgn(x) == sgn(p.a));
    for (double nb : {-2.0, 0.0, 1.0, 4.0}) CHECK_FALSE(apply_intervention(p, nb).flipped);
  }
  const Person canonical = on_upper_branch(0, 0.5, 2.0);
  for (double x : hysteresis_path(canonical, sweep)) CHECK(x > 0.0);
}

TEST_CASE("pushing metastable people past the fold flips them") {
  std::size_t meta = 0, flipped = 0;
  for (const Person& p : population(3000, 4)) {
    const auto r = susceptibility(p);
    if (r.branch != Branch::Metastable) continue;
    ++meta;
    const InterventionResult res = apply_intervention(p, fold_boundary_b(p.a) - 0.01);
    flipped += res.flipped && sgn(res.new_x) == sgn(p.a);
  }
  REQUIRE(meta > 100);
  CHECK(flipped >= 0.99 * static_cast<double>(meta));
}

TEST_CASE("susceptibility csv") {
  const std::vector<Person> people{on_lower_branch(0, 0.5, 2.0), on_upper_branch(1, 0.5, 2.0),
                                   on_lower_branch(2, -0.5, 0.5)};
  const auto ranked = rank_targets(people);
  const std::string csv = susceptibility_to_csv(ranked);
  CHECK(csv.rfind("id,branch,delta_b_flip,flip_direction\n", 0) == 0);
  CHECK(csv.find("\n0,metastable,0.80944921102385") != std::string::npos);
  CHECK(csv.find(",to_1\n") != std::string::npos);
  CHECK(csv.find("\n1,aligned,,\n") != std::string::npos);
  CHECK(csv.find("\n2,monostable_neutral,,\n") != std::string::npos);
}

TEST_CASE("fusion gain report") {
  SUBCASE("identical constant-feature models have zero deltas") {
    std::vector<DbTable::Row> rows;
    for (int i = 0; i < 40; ++i) rows.push_back({i, {0.0, 0.0, static_cast<double>(i % 2)}});
    const DbTable joined("j", kJoinedSchema, rows);
    const FittedModel m = fit(joined, FeatureSpec{InputSet::AB, 3});
    const FusionReport rep = fusion_gain(joined, m, m, m, {});
    CHECK(rep.joint_minus_a.auc == 0.0);
    CHECK(rep.joint_minus_b.log_loss == 0.0);
    CHECK(rep.a_minus_b.accuracy == 0.0);
    CHECK(rep.population == 0);  // no ranking supplied
    CHECK(rep.metastable_count == 0);
    CHECK(rep.metastable_fraction == 0.0);
  }
  SUBCASE("default population shows the fusion effect") {
    const auto pop = population(10000, 1);
    const auto parts = split(pop);
    const DbTable joined = join(parts.db_a, parts.db_b);
    const FittedModel ma = fit(joined, {InputSet::A, 3}), mb = fit(joined, {InputSet::B, 3}),
                      mj = fit(joined, {InputSet::AB, 3});
    const auto targets = rank_targets(pop);
    const FusionReport rep = fusion_gain(joined, ma, mb, mj, targets);
    CHECK(rep.model_joint.auc >= rep.model_a.auc - 0.01);
    CHECK(rep.model_a.auc >= rep.model_b.auc + 0.1);
    REQUIRE(rep.independence);
    CHECK(rep.independence->p_value > 0.01);
    CHECK(rep.model_joint.auc > 0.6);
    CHECK(rep.joint_minus_a.auc == doctest::Approx(rep.model_joint.auc - rep.model_a.auc));
    CHECK(rep.metastable_fraction ==
          doctest::Approx(static_cast<double>(rep.metastable_count) / 10000.0));
  }
}
